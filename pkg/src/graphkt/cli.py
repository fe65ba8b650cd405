"""Command-line front end.

    graphkt ktheory FILE         graded K-theory
    graphkt khomology FILE       graded K-homology
    graphkt all FILE             both, plus the duality cross-check
    graphkt classical FILE       trivial grading, all regular vertices
    graphkt snf FILE             Smith form of a matrix document
    graphkt tails FILE --at V --max-length L
    graphkt check FILE           invariant suite

Exit status: 0 success, 1 failed check, 2 bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from graphkt import __version__
from graphkt.graph import (
    Graph,
    GraphError,
    KTheoryProblem,
    make_problem,
    parse_document,
)
from graphkt.intmat import (
    AbelianGroup,
    IntMatrix,
    cokernel,
    determinant,
    determinantal_divisors,
    smith_normal_form,
)
from graphkt.invariants import (
    classical_problem,
    connecting_matrix,
    duality_report,
    exact_sequence_report,
    graded_k_homology,
    graded_k_theory,
)
from graphkt.tails import TailSweepConfig, sweep

DEFAULT_SEED = 20240101
ORACLE_MINOR_LIMIT = 20000


class InputError(Exception):
    pass


@dataclass
class OutputRecord:
    command: str
    input_digest: str
    groups: dict[str, AbelianGroup] = field(default_factory=dict)
    matrices: dict[str, IntMatrix] = field(default_factory=dict)
    checks: list[dict] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    text: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["passed"] is not False for c in self.checks)

    def check(self, name: str, passed, detail: str = ""):
        self.checks.append({"name": name, "passed": passed, "detail": detail})

    def to_machine(self) -> dict:
        out = {
            "version": __version__,
            "command": self.command,
            "input_digest": self.input_digest,
            "groups": {
                name: {**g.to_dict(), "text": str(g)} for name, g in self.groups.items()
            },
            "checks": self.checks,
            "passed": self.passed,
        }
        if self.matrices:
            out["matrices"] = {name: _matrix_dict(m) for name, m in self.matrices.items()}
        out.update(self.extra)
        return out

    def to_text(self) -> str:
        lines = list(self.text)
        for name, m in self.matrices.items():
            lines.append(f"{name} ({m.nrows}x{m.ncols}):")
            lines.extend("  " + row for row in m.pretty().splitlines())
        for c in self.checks:
            status = {True: "PASS", False: "FAIL", None: "SKIP"}[c["passed"]]
            lines.append(f"[{status}] {c['name']}" + (f": {c['detail']}" if c["detail"] else ""))
        return "\n".join(lines) + "\n"


def _matrix_dict(m: IntMatrix) -> dict:
    out = {"rows": m.nrows, "cols": m.ncols, "entries": m.tolist()}
    if m.row_labels is not None:
        out["row_labels"] = list(m.row_labels)
    if m.col_labels is not None:
        out["col_labels"] = list(m.col_labels)
    return out


def digest(doc) -> str:
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise InputError(f"{path} is not valid UTF-8") from None


def _load_problem(path: str) -> tuple[Graph, KTheoryProblem, str]:
    text = _read(path)
    try:
        graph, rel = parse_document(text)
        problem = make_problem(graph, rel)
    except GraphError as exc:
        raise InputError(f"{path}: {exc}") from None
    return graph, problem, digest(json.loads(text))


def _header(p: KTheoryProblem) -> str:
    g = p.graph
    return (
        f"graph: {len(g.vertices)} vertices, {len(g.edges)} edges; "
        f"relative set V = {{{', '.join(p.relative_set)}}}"
    )


def _pair(groups: dict[str, AbelianGroup]) -> str:
    return ", ".join(f"{name} = {g}" for name, g in groups.items())


def _ktheory(rec: OutputRecord, p: KTheoryProblem, args):
    res = graded_k_theory(p, with_kernel_basis=args.emit_kernel_basis)
    rec.groups.update(res.groups)
    rec.text.append(_pair(res.groups))
    if args.emit_matrices:
        rec.matrices["signed_adjacency"] = p.signed_adjacency
        rec.matrices["ktheory_matrix"] = res.matrix
    if args.emit_kernel_basis:
        basis = [list(b) for b in res.kernel_basis]
        rec.extra["kernel_basis"] = {"coordinates": list(p.relative_set), "vectors": basis}
        rec.text.append(f"kernel basis (coordinates {', '.join(p.relative_set)}): {basis}")
    return res


def _khomology(rec: OutputRecord, p: KTheoryProblem, args):
    res = graded_k_homology(p)
    rec.groups.update(res.groups)
    rec.text.append(_pair(res.groups))
    if args.emit_matrices:
        rec.matrices["khomology_matrix"] = res.matrix
    return res


def cmd_ktheory(args) -> OutputRecord:
    _, p, dig = _load_problem(args.file)
    rec = OutputRecord("ktheory", dig, text=[_header(p)])
    _ktheory(rec, p, args)
    return rec


def cmd_khomology(args) -> OutputRecord:
    _, p, dig = _load_problem(args.file)
    rec = OutputRecord("khomology", dig, text=[_header(p)])
    _khomology(rec, p, args)
    return rec


def cmd_all(args) -> OutputRecord:
    _, p, dig = _load_problem(args.file)
    rec = OutputRecord("all", dig, text=[_header(p)])
    _ktheory(rec, p, args)
    _khomology(rec, p, args)
    rep = duality_report(p)
    rec.check("duality", rep.passed, "; ".join(rep.failures))
    return rec


def cmd_classical(args) -> OutputRecord:
    graph, _, dig = _load_problem(args.file)
    p = classical_problem(graph)
    rec = OutputRecord("classical", dig, text=[_header(p) + " (trivial grading)"])
    _ktheory(rec, p, args)
    _khomology(rec, p, args)
    return rec


def _parse_matrix_doc(text: str, path: str) -> tuple[IntMatrix, dict]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed matrix document: {exc}") from None
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise InputError(f"{path}: matrix document needs a 'matrix' key")
    rows = doc["matrix"]
    try:
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ValueError("'matrix' must be a list of rows")
        ncols = doc.get("cols", len(rows[0]) if rows else 0)
        m = IntMatrix.from_rows(rows, ncols=ncols, row_labels=doc.get("row_labels"),
                                col_labels=doc.get("col_labels"))
        if "rows" in doc and doc["rows"] != m.nrows:
            raise ValueError(f"'rows' is {doc['rows']} but the matrix has {m.nrows} rows")
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None
    return m, doc


def cmd_snf(args) -> OutputRecord:
    m, doc = _parse_matrix_doc(_read(args.file), args.file)
    s = smith_normal_form(m)
    rec = OutputRecord("snf", digest(doc))
    rec.groups["coker"] = cokernel(m, s)
    rec.matrices.update({"input": m, "u": s.u, "d": s.d, "v": s.v})
    rec.extra["rank"] = s.rank
    rec.extra["diagonal"] = list(s.diagonal)
    rec.text.append(f"rank {s.rank}, diagonal {list(s.diagonal)}, coker = {rec.groups['coker']}")
    rec.check("u @ m @ v == d", s.u @ m @ s.v == s.d)
    return rec


def _tuple_text(groups) -> str:
    return ", ".join(f"{n} = {g}" for n, g in zip(("K0^gr", "K1^gr", "K0_gr", "K1_gr"), groups))


def cmd_tails(args) -> OutputRecord:
    graph, p, dig = _load_problem(args.file)
    try:
        cfg = TailSweepConfig(tuple(args.at), args.max_length)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    result = sweep(graph, p.relative_set.ordered, cfg)
    rec = OutputRecord("tails", dig, text=[_header(p)])
    points = []
    for pt in result:
        if pt.report is None:
            rec.text.append(f"at {pt.at}: error: {pt.error}")
            rec.check(f"tail at {pt.at}", False, pt.error)
            points.append({"at": pt.at, "error": pt.error})
            continue
        rep = pt.report
        rec.text.append(f"at {pt.at}: baseline {_tuple_text(rep.baseline)}")
        for length, groups in rep.by_length:
            rec.text.append(f"  L={length}: {_tuple_text(groups)}")
        rec.check(f"tail at {pt.at} constant", rep.constant)
        rec.check(f"tail at {pt.at} matches baseline", rep.matches_baseline)
        points.append({
            "at": pt.at,
            "baseline": [g.to_dict() for g in rep.baseline],
            "by_length": [
                {"length": length, "groups": [g.to_dict() for g in groups]}
                for length, groups in rep.by_length
            ],
        })
    rec.extra["tails"] = points
    return rec


def _random_unimodular(rng: random.Random, n: int, steps: int = 12) -> IntMatrix:
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        rows[i] = [x + c * y for x, y in zip(rows[i], rows[j])]
    if n and rng.random() < 0.5:
        rows[0] = [-x for x in rows[0]]
    return IntMatrix.from_rows(rows, ncols=n)


def _snf_oracle_check(m: IntMatrix) -> tuple[bool | None, str]:
    k = min(m.shape)
    minors = sum(comb(m.nrows, i) * comb(m.ncols, i) for i in range(1, k + 1))
    if minors > ORACLE_MINOR_LIMIT:
        return None, f"{minors} minors exceed the enumeration limit"
    divs = determinantal_divisors(m)
    expected = [d // prev for d, prev in zip(divs, (1,) + divs)]
    expected += [0] * (k - len(expected))
    got = list(smith_normal_form(m).diagonal)
    return got == expected, f"diagonal {got}, minors give {expected}"


def cmd_check(args) -> OutputRecord:
    graph, p, dig = _load_problem(args.file)
    rng = random.Random(args.seed)
    rec = OutputRecord("check", dig, text=[_header(p)])
    rep = duality_report(p)
    rec.groups.update(rep.k_theory.groups)
    rec.groups.update(rep.k_homology.groups)
    rec.text.append(_pair(rep.k_theory.groups))
    rec.text.append(_pair(rep.k_homology.groups))
    rec.check("duality", rep.passed, "; ".join(rep.failures))

    for label, res in (("K-theory", rep.k_theory), ("K-homology", rep.k_homology)):
        seq = exact_sequence_report(res)
        rec.check(f"exact sequence ({label})", seq.verified, seq.describe())

    m = connecting_matrix(p)
    s = smith_normal_form(m)
    unimodular = m.nrows == 0 or abs(determinant(s.u)) == 1
    unimodular = unimodular and (m.ncols == 0 or abs(determinant(s.v)) == 1)
    rec.check("SNF transforms", s.u @ m @ s.v == s.d and unimodular)
    ok, detail = _snf_oracle_check(m)
    rec.check("SNF vs determinantal divisors", ok, detail)
    rec.check("SNF engines agree", s == smith_normal_form(m, engine="python"))

    left = _random_unimodular(rng, m.nrows)
    right = _random_unimodular(rng, m.ncols)
    twisted = left @ m @ right
    same = cokernel(twisted) == rep.k_theory.k0 and smith_normal_form(twisted).rank == s.rank
    rec.check("unimodular invariance", same)

    order = list(graph.vertices)
    rng.shuffle(order)
    names = {v: f"r{i}" for i, v in enumerate(rng.sample(list(graph.vertices), len(graph.vertices)))}
    relabelled = graph.relabel(names, [names[v] for v in order])
    q = make_problem(relabelled, [names[v] for v in p.relative_set])
    before = (rep.k_theory.k0, rep.k_theory.k1, rep.k_homology.k0, rep.k_homology.k1)
    after = graded_k_theory(q), graded_k_homology(q)
    rec.check(
        "relabelling invariance",
        before == (after[0].k0, after[0].k1, after[1].k0, after[1].k1),
    )
    rec.extra["seed"] = args.seed
    return rec


COMMANDS = {
    "ktheory": (cmd_ktheory, "graded K-theory of the document's problem"),
    "khomology": (cmd_khomology, "graded K-homology of the document's problem"),
    "all": (cmd_all, "K-theory, K-homology and the duality check"),
    "classical": (cmd_classical, "ungraded invariants of C*(E): parity 0, V = all regular"),
    "snf": (cmd_snf, "Smith normal form of a matrix document"),
    "tails": (cmd_tails, "tail-invariance sweep"),
    "check": (cmd_check, "invariant and oracle checks"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--emit-matrices", action="store_true")
    common.add_argument("--emit-kernel-basis", action="store_true")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    parser = argparse.ArgumentParser(prog="graphkt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("file")
        if name == "tails":
            sp.add_argument("--at", action="append", required=True, metavar="VERTEX")
            sp.add_argument("--max-length", type=int, required=True)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    func = COMMANDS[args.command][0]
    try:
        rec = func(args)
    except InputError as exc:
        print(f"graphkt: error: {exc}", file=stderr)
        return 2
    if args.format == "machine":
        stdout.write(json.dumps(rec.to_machine(), sort_keys=True, indent=2, ensure_ascii=False))
        stdout.write("\n")
    else:
        stdout.write(rec.to_text())
    return 0 if rec.passed else 1


def main():  # pragma: no cover
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
