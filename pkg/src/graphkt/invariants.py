"""Graded K-theory and K-homology of relative graph algebras.

For a problem ``(E, V, parity)`` let ``M = incl - adj^T``, the E0 x V matrix of
``ZV -> ZE0``.  Then

    K0^gr = coker M,   K1^gr = ker M,
    K0_gr = ker M^T,   K1_gr = coker M^T.

Kernels of maps between free groups are free, so only their rank is kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from graphkt.graph import (
    Graph,
    GraphError,
    KTheoryProblem,
    add_tail,
    make_problem,
    regular_vertices,
)
from graphkt.intmat import (
    AbelianGroup,
    IntMatrix,
    cokernel,
    kernel_basis,
    rational_rank,
    smith_normal_form,
    transpose,
)

__all__ = [
    "GradedKTheoryResult",
    "GradedKHomologyResult",
    "ExactSequenceReport",
    "DualityReport",
    "TailInvarianceReport",
    "connecting_matrix",
    "graded_k_theory",
    "graded_k_homology",
    "classical_k_theory",
    "classical_k_homology",
    "classical_problem",
    "exact_sequence_report",
    "duality_report",
    "tail_invariance_report",
    "TailPreconditionError",
]


@dataclass(frozen=True)
class GradedKTheoryResult:
    k0: AbelianGroup
    k1: AbelianGroup
    matrix: IntMatrix
    problem: KTheoryProblem
    rank: int
    kernel_basis: tuple[tuple[int, ...], ...] | None = None

    @property
    def groups(self) -> dict[str, AbelianGroup]:
        return {"K0^gr": self.k0, "K1^gr": self.k1}


@dataclass(frozen=True)
class GradedKHomologyResult:
    k0: AbelianGroup
    k1: AbelianGroup
    matrix: IntMatrix
    problem: KTheoryProblem
    rank: int

    @property
    def groups(self) -> dict[str, AbelianGroup]:
        return {"K0_gr": self.k0, "K1_gr": self.k1}


def connecting_matrix(p: KTheoryProblem) -> IntMatrix:
    """``incl - adj^T``: rows are all vertices, columns the relative set."""
    return p.inclusion_matrix - transpose(p.signed_adjacency)


def graded_k_theory(p: KTheoryProblem, with_kernel_basis: bool = False) -> GradedKTheoryResult:
    m = connecting_matrix(p)
    snf = smith_normal_form(m)
    basis = tuple(kernel_basis(m, snf)) if with_kernel_basis else None
    return GradedKTheoryResult(
        k0=cokernel(m, snf),
        k1=AbelianGroup.free(m.ncols - snf.rank),
        matrix=m,
        problem=p,
        rank=snf.rank,
        kernel_basis=basis,
    )


def graded_k_homology(p: KTheoryProblem) -> GradedKHomologyResult:
    """For finite graphs the dual map is the literal transpose of the K-theory matrix."""
    m = transpose(connecting_matrix(p))
    snf = smith_normal_form(m)
    return GradedKHomologyResult(
        k0=AbelianGroup.free(m.ncols - snf.rank),
        k1=cokernel(m, snf),
        matrix=m,
        problem=p,
        rank=snf.rank,
    )


def classical_problem(g: Graph) -> KTheoryProblem:
    return make_problem(g.with_parities(0), regular_vertices(g))


def classical_k_theory(g: Graph) -> GradedKTheoryResult:
    """Ungraded K-theory of the graph algebra: trivial grading, all regular vertices."""
    return graded_k_theory(classical_problem(g))


def classical_k_homology(g: Graph) -> GradedKHomologyResult:
    return graded_k_homology(classical_problem(g))


@dataclass(frozen=True)
class ExactSequenceReport:
    """Rank bookkeeping for ``0 -> K_odd -> Z^dom -> Z^cod -> K_even -> 0``.

    ``rank`` is recomputed over Q, independently of the Smith form the groups
    came from.
    """

    kernel_group: AbelianGroup
    domain_rank: int
    codomain_rank: int
    cokernel_group: AbelianGroup
    matrix: IntMatrix
    rank: int
    verified: bool

    def describe(self) -> str:
        return (
            f"0 -> {self.kernel_group} -> Z^{self.domain_rank} --(rank {self.rank})--> "
            f"Z^{self.codomain_rank} -> {self.cokernel_group} -> 0"
        )


def exact_sequence_report(result: GradedKTheoryResult | GradedKHomologyResult) -> ExactSequenceReport:
    """Check that the groups fit the four-term exact sequence of their matrix.

    For K-theory the kernel group is K1^gr and the cokernel group K0^gr; for
    K-homology they are K0_gr and K1_gr.
    """
    m = result.matrix
    if isinstance(result, GradedKTheoryResult):
        ker, cok = result.k1, result.k0
    else:
        ker, cok = result.k0, result.k1
    r = rational_rank(m)
    ok = (
        ker.is_free
        and ker.free_rank + r == m.ncols
        and cok.free_rank + r == m.nrows
        and len(cok.invariant_factors) <= r
    )
    return ExactSequenceReport(ker, m.ncols, m.nrows, cok, m, r, ok)


@dataclass(frozen=True)
class DualityReport:
    k_theory: GradedKTheoryResult
    k_homology: GradedKHomologyResult
    failures: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures


def duality_report(p: KTheoryProblem) -> DualityReport:
    """Compare K-theory and K-homology of the same problem.

    Torsion of K0^gr and K1_gr must agree, free ranks pair up as
    K0_gr ~ K0^gr and K1_gr ~ K1^gr, and the free ranks of K0^gr and K1^gr
    differ by |E0| - |V|.
    """
    kt = graded_k_theory(p)
    kh = graded_k_homology(p)
    failures = []
    if kt.k0.invariant_factors != kh.k1.invariant_factors:
        failures.append(
            f"torsion mismatch: K0^gr = {kt.k0} but K1_gr = {kh.k1}"
        )
    if kh.k0.free_rank != kt.k0.free_rank:
        failures.append(f"free rank mismatch: K0_gr = {kh.k0} vs K0^gr = {kt.k0}")
    if kh.k1.free_rank != kt.k1.free_rank:
        failures.append(f"free rank mismatch: K1_gr = {kh.k1} vs K1^gr = {kt.k1}")
    if not (kt.k1.is_free and kh.k0.is_free):
        failures.append("a kernel group has torsion")
    expected = p.num_vertices - p.num_relative
    if kt.k0.free_rank - kt.k1.free_rank != expected:
        failures.append(
            f"rank-nullity: rk K0^gr - rk K1^gr = {kt.k0.free_rank - kt.k1.free_rank}, "
            f"expected |E0| - |V| = {expected}"
        )
    return DualityReport(kt, kh, tuple(failures))


GroupTuple = tuple[AbelianGroup, AbelianGroup, AbelianGroup, AbelianGroup]


def _four_groups(p: KTheoryProblem) -> GroupTuple:
    kt = graded_k_theory(p)
    kh = graded_k_homology(p)
    return (kt.k0, kt.k1, kh.k0, kh.k1)


@dataclass(frozen=True)
class TailInvarianceReport:
    """Groups ``(K0^gr, K1^gr, K0_gr, K1_gr)`` per tail length.

    ``baseline`` holds the groups of the untouched problem; adding a tail at
    a vertex receiving no edges should not change any of them.
    """

    at: str
    baseline: GroupTuple
    by_length: tuple[tuple[int, GroupTuple], ...]
    relative_sets: tuple[tuple[str, ...], ...] = field(default=(), repr=False)

    @property
    def constant(self) -> bool:
        return len({groups for _, groups in self.by_length}) <= 1

    @property
    def matches_baseline(self) -> bool:
        return all(groups == self.baseline for _, groups in self.by_length)

    @property
    def passed(self) -> bool:
        return self.constant and self.matches_baseline


class TailPreconditionError(GraphError):
    pass


def tail_invariance_report(
    g: Graph, v_set: Iterable[str] | str, at: str, max_length: int
) -> TailInvarianceReport:
    """Graded invariants of ``g`` with tails of length ``1..max_length`` attached at ``at``.

    For tail length ``L`` the relative set is ``v_set`` plus ``at`` and the
    first ``L - 1`` tail vertices, i.e. every vertex the tail made regular.
    """
    if isinstance(max_length, bool) or not isinstance(max_length, int) or max_length < 1:
        raise TailPreconditionError(f"max_length must be a positive integer, got {max_length!r}")
    if at not in g.index:
        raise TailPreconditionError(f"unknown vertex {at!r}")
    if at in regular_vertices(g):
        raise TailPreconditionError(f"vertex {at!r} already receives edges; tails attach only at sources")
    base = make_problem(g, v_set)
    rel = list(base.relative_set)
    baseline = _four_groups(base)
    rows = []
    rel_sets = []
    n = len(g.vertices)
    for length in range(1, max_length + 1):
        tailed = add_tail(g, at, length)
        new = [at] + list(tailed.vertices[n : n + length - 1])
        p = make_problem(tailed, rel + new)
        rows.append((length, _four_groups(p)))
        rel_sets.append(p.relative_set.ordered)
    return TailInvarianceReport(at, baseline, tuple(rows), tuple(rel_sets))
