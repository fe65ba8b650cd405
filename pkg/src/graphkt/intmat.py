"""Exact integer matrices, Smith normal form and finitely generated abelian groups.

Entries are Python ``int`` and never overflow.  The Smith reduction may run
in a compiled int64 kernel, but only while every intermediate is provably in
range; otherwise it is redone with Python integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "AbelianGroup",
    "smith_normal_form",
    "determinantal_divisors",
    "determinantal_divisors_batch",
    "kernel_basis",
    "cokernel",
    "transpose",
    "determinant",
    "rational_rank",
]


@dataclass(frozen=True, eq=False)
class IntMatrix:
    """Dense integer matrix with optional row and column labels.

    ``data`` is a tuple of row tuples.  ``nrows``/``ncols`` are stored
    explicitly so that ``0 x n`` and ``m x 0`` matrices keep their shape.
    """

    nrows: int
    ncols: int
    data: tuple[tuple[int, ...], ...]
    row_labels: tuple[str, ...] | None = None
    col_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.data) != self.nrows:
            raise ValueError(f"expected {self.nrows} rows, got {len(self.data)}")
        for row in self.data:
            if len(row) != self.ncols:
                raise ValueError(f"expected rows of length {self.ncols}, got {len(row)}")
        if self.row_labels is not None and len(self.row_labels) != self.nrows:
            raise ValueError("row_labels do not match the number of rows")
        if self.col_labels is not None and len(self.col_labels) != self.ncols:
            raise ValueError("col_labels do not match the number of columns")

    @classmethod
    def from_rows(
        cls,
        rows: Iterable[Iterable[int]],
        ncols: int | None = None,
        row_labels: Sequence[str] | None = None,
        col_labels: Sequence[str] | None = None,
    ) -> "IntMatrix":
        data = tuple(tuple(_as_int(x) for x in row) for row in rows)
        if ncols is None:
            if data:
                ncols = len(data[0])
            elif col_labels is not None:
                ncols = len(col_labels)
            else:
                ncols = 0
        return cls(
            len(data),
            ncols,
            data,
            tuple(row_labels) if row_labels is not None else None,
            tuple(col_labels) if col_labels is not None else None,
        )

    @classmethod
    def _trusted(cls, nrows, ncols, data, row_labels=None, col_labels=None) -> "IntMatrix":
        # Skips validation; only for shapes produced internally.
        self = object.__new__(cls)
        self.__dict__.update(
            nrows=nrows, ncols=ncols, data=data, row_labels=row_labels, col_labels=col_labels
        )
        return self

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(nrows, ncols, tuple((0,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def from_array(cls, arr) -> "IntMatrix":
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {arr.shape}")
        return cls.from_rows(arr.tolist(), ncols=arr.shape[1])

    def to_array(self) -> np.ndarray:
        """Object-dtype array, so entries stay exact."""
        out = np.empty((self.nrows, self.ncols), dtype=object)
        for i, row in enumerate(self.data):
            for j, x in enumerate(row):
                out[i, j] = x
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.data]

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self.data[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.data)

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.data[i][i] for i in range(min(self.nrows, self.ncols)))

    def with_labels(self, row_labels=None, col_labels=None) -> "IntMatrix":
        return IntMatrix(
            self.nrows,
            self.ncols,
            self.data,
            tuple(row_labels) if row_labels is not None else None,
            tuple(col_labels) if col_labels is not None else None,
        )

    @property
    def T(self) -> "IntMatrix":
        return transpose(self)

    def __eq__(self, other):
        # Labels are metadata; equality is on shape and entries.
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.shape, self.data))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(
            self.nrows,
            self.ncols,
            tuple(tuple(-x for x in row) for row in self.data),
            self.row_labels,
            self.col_labels,
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(
            self.nrows,
            self.ncols,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)),
            self.row_labels,
            self.col_labels,
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.data)) if other.nrows else [()] * other.ncols
        data = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.data
        )
        return IntMatrix(self.nrows, other.ncols, data, self.row_labels, other.col_labels)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(vec) != self.ncols:
            raise ValueError(f"vector of length {len(vec)} does not match {self.ncols} columns")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.data)

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r}, shape={self.shape})"

    def pretty(self) -> str:
        """Right-aligned text rendering, with labels when present."""
        cells = [[str(x) for x in row] for row in self.data]
        header = list(self.col_labels) if self.col_labels else None
        left = list(self.row_labels) if self.row_labels else None
        width = max(
            [len(c) for row in cells for c in row] + ([len(h) for h in header] if header else [1])
        )
        lw = max((len(s) for s in left), default=0) if left else 0
        lines = []
        if header:
            lines.append(" " * (lw + 1 if left else 0) + " ".join(h.rjust(width) for h in header))
        for i, row in enumerate(cells):
            prefix = left[i].ljust(lw) + " " if left else ""
            lines.append(prefix + "[" + " ".join(c.rjust(width) for c in row) + "]")
        if not lines:
            lines.append(f"<empty {self.nrows}x{self.ncols}>")
        return "\n".join(lines)


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, float) and x.is_integer():
        return int(x)
    raise TypeError(f"matrix entries must be integers, got {x!r}")


def transpose(m: IntMatrix) -> IntMatrix:
    data = tuple(zip(*m.data)) if m.nrows else tuple(() for _ in range(m.ncols))
    return IntMatrix(m.ncols, m.nrows, data, m.col_labels, m.row_labels)


class SmithDecomposition:
    """``u @ m @ v == d`` with ``u``, ``v`` unimodular and ``d`` in Smith form.

    The three matrices are materialised on first access; the diagonal and
    rank are available without building them.
    """

    __slots__ = ("rank", "_shape", "_flat", "_labels", "_mats")

    def __init__(self, u: IntMatrix, v: IntMatrix, d: IntMatrix, rank: int):
        self.rank = rank
        self._shape = d.shape
        self._flat = None
        self._labels = None
        self._mats = (u, v, d)

    @classmethod
    def _from_flat(cls, rows, cols, d, u, vt, rank, labels):
        self = object.__new__(cls)
        self.rank = rank
        self._shape = (rows, cols)
        self._flat = (d, u, vt)
        self._labels = labels
        self._mats = None
        return self

    def _materialise(self):
        rows, cols = self._shape
        d, u, vt = self._flat
        self._mats = (
            IntMatrix._trusted(
                rows, rows, tuple(tuple(u[i : i + rows]) for i in range(0, rows * rows, rows))
            ),
            IntMatrix._trusted(cols, cols, tuple(tuple(vt[j::cols]) for j in range(cols))),
            IntMatrix._trusted(
                rows,
                cols,
                tuple(tuple(d[i : i + cols]) for i in range(0, rows * cols, cols)),
                *self._labels,
            ),
        )
        return self._mats

    @property
    def u(self) -> IntMatrix:
        return (self._mats or self._materialise())[0]

    @property
    def v(self) -> IntMatrix:
        return (self._mats or self._materialise())[1]

    @property
    def d(self) -> IntMatrix:
        return (self._mats or self._materialise())[2]

    @property
    def diagonal(self) -> tuple[int, ...]:
        if self._mats is not None:
            return self._mats[2].diagonal()
        rows, cols = self._shape
        return tuple(self._flat[0][:: cols + 1][: min(rows, cols)])

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nonzero diagonal entries, in divisibility order."""
        return self.diagonal[: self.rank]

    def __iter__(self):
        return iter((self.u, self.v, self.d, self.rank))

    def __eq__(self, other):
        if not isinstance(other, SmithDecomposition):
            return NotImplemented
        return tuple(self) == tuple(other)

    __hash__ = None

    def __repr__(self):
        return f"SmithDecomposition(rank={self.rank}, diagonal={self.diagonal})"


def _smith_lists(a: list[list[int]], m: int, n: int):
    """In-place Smith reduction of ``a``; returns ``(u, vt, rank)``.

    ``vt`` is the column transform stored transposed, so column operations
    become row operations on it.
    """
    u = [[0] * m for _ in range(m)]
    for i in range(m):
        u[i][i] = 1
    vt = [[0] * n for _ in range(n)]
    for j in range(n):
        vt[j][j] = 1
    t = 0
    lim = min(m, n)
    while t < lim:
        # Pivot: smallest nonzero |entry| in the trailing block, first in
        # row-major order on ties.
        pi = pj = -1
        best = 0
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x:
                    ax = x if x > 0 else -x
                    if best == 0 or ax < best:
                        best, pi, pj = ax, i, j
                        if ax == 1:
                            break
            if best == 1:
                break
        if best == 0:
            break
        if pi != t:
            a[t], a[pi] = a[pi], a[t]
            u[t], u[pi] = u[pi], u[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]
            vt[t], vt[pj] = vt[pj], vt[t]

        rt = a[t]
        ut = u[t]
        p = rt[t]
        clean = True
        for i in range(t + 1, m):
            x = a[i][t]
            if x:
                q = x // p
                a[i] = ri = [y - q * z for y, z in zip(a[i], rt)]
                u[i] = [y - q * z for y, z in zip(u[i], ut)]
                if ri[t]:
                    clean = False
        vtt = vt[t]
        for j in range(t + 1, n):
            x = rt[j]
            if x:
                q = x // p
                for i in range(t, m):
                    row = a[i]
                    if row[t]:
                        row[j] -= q * row[t]
                vt[j] = [y - q * z for y, z in zip(vt[j], vtt)]
                if rt[j]:
                    clean = False
        if not clean:
            # A remainder smaller than |p| survived; pick a new pivot.
            continue

        # Row and column t are clear.  Enforce p | every trailing entry.
        if p != 1 and p != -1:
            bad = -1
            for i in range(t + 1, m):
                ri = a[i]
                for j in range(t + 1, n):
                    if ri[j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad >= 0:
                a[t] = [y + z for y, z in zip(rt, a[bad])]
                u[t] = [y + z for y, z in zip(ut, u[bad])]
                continue

        if p < 0:
            a[t] = [-y for y in rt]
            u[t] = [-y for y in ut]
        t += 1
    return u, vt, t


_kernel = None


def _load_kernel():
    global _kernel
    if _kernel is None:
        try:
            from graphkt._kernel import smith_int64
        except ImportError:  # pragma: no cover - numba missing
            _kernel = False
        else:
            _kernel = smith_int64
    return _kernel


def smith_normal_form(m: IntMatrix, engine: str = "auto") -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Returns ``SmithDecomposition(u, v, d, rank)`` with ``u @ m @ v == d``,
    ``d`` diagonal with nonnegative entries ``d1 | d2 | ... | d_rank`` and
    zeros after.  Output is deterministic for a given input.

    ``engine="auto"`` tries the compiled int64 kernel first and falls back
    to Python integers whenever an entry could leave the safe range;
    ``engine="python"`` always uses Python integers.  Both engines perform
    the same operations and return identical decompositions.

    >>> smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]])).diagonal
    (2, 4)
    """
    if engine not in ("auto", "python"):
        raise ValueError(f"unknown engine {engine!r}")
    rows, cols = m.nrows, m.ncols
    res = None
    if engine == "auto" and rows and cols:
        kernel = _kernel if _kernel is not None else _load_kernel()
        if kernel:
            res = kernel(m.data, rows, cols)
    if res is not None:
        d, u, vt, rank = res
        return SmithDecomposition._from_flat(
            rows, cols, d, u, vt, rank, (m.row_labels, m.col_labels)
        )
    a = [list(row) for row in m.data]
    u, vt, rank = _smith_lists(a, rows, cols)
    return SmithDecomposition(
        IntMatrix._trusted(rows, rows, tuple(map(tuple, u))),
        IntMatrix._trusted(cols, cols, tuple(zip(*vt)) if cols else ()),
        IntMatrix._trusted(rows, cols, tuple(map(tuple, a)), m.row_labels, m.col_labels),
        rank,
    )


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.nrows != m.ncols:
        raise ValueError(f"determinant of non-square {m.shape} matrix")
    return _bareiss([list(row) for row in m.data])


def _bareiss(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def determinantal_divisors(m: IntMatrix) -> tuple[int, ...]:
    """gcd of all k x k minors for k = 1, 2, ..., trailing zeros dropped.

    Brute-force enumeration of minors; deliberately shares no code with
    :func:`smith_normal_form` so it can serve as an oracle for it.
    """
    data = m.data
    out: list[int] = []
    for k in range(1, min(m.nrows, m.ncols) + 1):
        g = 0
        for rs in combinations(range(m.nrows), k):
            for cs in combinations(range(m.ncols), k):
                g = gcd(g, _bareiss([[data[i][j] for j in cs] for i in rs]))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            break
        out.append(g)
    return tuple(out)


def _stack_det(blocks: np.ndarray) -> np.ndarray:
    """Determinants of a stack ``(..., k, k)`` of int64 blocks by permutation expansion."""
    k = blocks.shape[-1]
    out = np.zeros(blocks.shape[:-2], dtype=np.int64)
    for perm in permutations(range(k)):
        sign = 1
        seen = list(perm)
        for i in range(k):
            while seen[i] != i:
                j = seen[i]
                seen[i], seen[j] = seen[j], seen[i]
                sign = -sign
        term = np.ones(blocks.shape[:-2], dtype=np.int64)
        for i, j in enumerate(perm):
            term = term * blocks[..., i, j]
        out += sign * term
    return out


def determinantal_divisors_batch(stack) -> np.ndarray:
    """Vectorised :func:`determinantal_divisors` for a stack of equal-shape matrices.

    ``stack`` has shape ``(N, rows, cols)``.  Returns an ``(N, min(rows, cols))``
    int64 array whose k-th column is the gcd of all (k+1)-minors; zeros mark
    vanishing divisors.  Limited to ``min(rows, cols) <= 4`` and to entries
    small enough that no minor can overflow int64 (Hadamard bound).
    """
    stack = np.asarray(stack, dtype=np.int64)
    if stack.ndim != 3:
        raise ValueError(f"expected a (N, rows, cols) stack, got shape {stack.shape}")
    n, rows, cols = stack.shape
    size = min(rows, cols)
    if size > 4:
        raise ValueError("batch oracle supports min(rows, cols) <= 4")
    peak = int(np.abs(stack).max()) if stack.size else 0
    if size and (peak * size**0.5) ** size >= 2**62:
        raise ValueError("entries too large for exact int64 minors")
    out = np.zeros((n, size), dtype=np.int64)
    for k in range(1, size + 1):
        g = np.zeros(n, dtype=np.int64)
        for rs in combinations(range(rows), k):
            sub = stack[:, rs, :]
            for cs in combinations(range(cols), k):
                g = np.gcd(g, _stack_det(sub[:, :, cs]))
        out[:, k - 1] = g
    # A vanishing divisor forces all later ones to vanish; make that explicit.
    dead = np.cumsum(out == 0, axis=1) > 0
    out[dead] = 0
    return out


def rational_rank(m: IntMatrix) -> int:
    """Rank over Q by Gaussian elimination on fractions."""
    a = [[Fraction(x) for x in row] for row in m.data]
    rank = 0
    for c in range(m.ncols):
        piv = next((i for i in range(rank, m.nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pr = a[rank]
        for i in range(rank + 1, m.nrows):
            f = a[i][c] / pr[c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], pr)]
        rank += 1
    return rank


def kernel_basis(m: IntMatrix, snf: SmithDecomposition | None = None) -> list[tuple[int, ...]]:
    """Z-basis of ``{x : m x = 0}``, taken from the column transform of the SNF."""
    s = snf if snf is not None else smith_normal_form(m)
    return [s.v.column(j) for j in range(s.rank, m.ncols)]


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^free_rank + Z/d1 + ... + Z/dk`` with ``1 < d1 | d2 | ... | dk``."""

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(int(d) for d in self.invariant_factors))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        fs = self.invariant_factors
        for d in fs:
            if d <= 1:
                raise ValueError(f"invariant factors must exceed 1, got {d}")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise ValueError(f"invariant factors {a}, {b} violate divisibility")

    @classmethod
    def from_diagonal(cls, nrows: int, diagonal: Sequence[int]) -> "AbelianGroup":
        """Cokernel of an ``nrows``-row matrix whose Smith diagonal is given."""
        nonzero = [d for d in diagonal if d]
        return cls(nrows - len(nonzero), tuple(d for d in nonzero if d > 1))

    @classmethod
    def free(cls, rank: int) -> "AbelianGroup":
        return cls(rank, ())

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def is_free(self) -> bool:
        return not self.invariant_factors

    @property
    def torsion_order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " ⊕ ".join(parts) if parts else "0"

    _TERM = re.compile(r"^Z(?:\^(\d+)|/(\d+))?$")

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        """Inverse of ``str``; accepts ``+`` as well as ``⊕`` between terms."""
        text = text.strip()
        if text == "0":
            return cls()
        free = 0
        factors = []
        for term in re.split(r"\s*[⊕+]\s*", text):
            match = cls._TERM.match(term)
            if match is None:
                raise ValueError(f"cannot parse group term {term!r} in {text!r}")
            power, order = match.groups()
            if order is not None:
                factors.append(int(order))
            else:
                free += int(power) if power is not None else 1
        return cls(free, tuple(factors))

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "invariant_factors": list(self.invariant_factors)}


def cokernel(m: IntMatrix, snf: SmithDecomposition | None = None) -> AbelianGroup:
    """``Z^rows / image(m)`` in invariant-factor form."""
    s = snf if snf is not None else smith_normal_form(m)
    return AbelianGroup.from_diagonal(m.nrows, s.diagonal)
