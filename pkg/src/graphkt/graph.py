"""Finite directed graphs with a {0,1} edge grading, relative vertex sets,
and the integer matrices built from them.

Conventions: an edge ``e`` points from ``source(e)`` into ``range(e)``.  The
signed adjacency matrix has rows indexed by the relative set and columns by
all vertices, with entry ``(v, w)`` summing ``(-1)**parity`` over edges with
range ``v`` and source ``w``.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from graphkt.intmat import IntMatrix

__all__ = [
    "GraphError",
    "Edge",
    "Graph",
    "RelativeSet",
    "KTheoryProblem",
    "parse_graph",
    "parse_document",
    "load_document",
    "regular_vertices",
    "make_problem",
    "add_tail",
    "cuntz_graph",
    "random_graph",
    "random_relative_set",
]


class GraphError(ValueError):
    """Invalid graph document, graph, or relative set."""


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    range: str
    parity: int = 0


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        seen = set()
        for v in self.vertices:
            if not isinstance(v, str):
                raise GraphError(f"vertex identifiers must be strings, got {v!r}")
            if v in seen:
                raise GraphError(f"duplicate vertex {v!r}")
            seen.add(v)
        ids = set()
        for e in self.edges:
            if e.id in ids:
                raise GraphError(f"duplicate edge {e.id!r}")
            ids.add(e.id)
            for end in (e.source, e.range):
                if end not in seen:
                    raise GraphError(f"edge {e.id!r} refers to unknown vertex {end!r}")
            if e.parity not in (0, 1) or isinstance(e.parity, bool):
                raise GraphError(f"edge {e.id!r} has parity {e.parity!r}, expected 0 or 1")

    @property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def edge_ids(self) -> set[str]:
        return {e.id for e in self.edges}

    def with_parities(self, parity) -> "Graph":
        """Copy with parities replaced; ``parity`` is 0/1 or a mapping edge-id -> 0/1."""
        if isinstance(parity, Mapping):
            edges = [Edge(e.id, e.source, e.range, parity.get(e.id, e.parity)) for e in self.edges]
        else:
            edges = [Edge(e.id, e.source, e.range, parity) for e in self.edges]
        return Graph(self.vertices, edges)

    def flipped(self) -> "Graph":
        """Every parity replaced by its complement."""
        return self.with_parities({e.id: 1 - e.parity for e in self.edges})

    def relabel(self, mapping: Mapping[str, str], order: Iterable[str] | None = None) -> "Graph":
        """Rename vertices by ``mapping``; ``order`` optionally fixes the new vertex order."""
        renamed = [mapping[v] for v in self.vertices]
        vertices = tuple(order) if order is not None else renamed
        if sorted(vertices) != sorted(renamed):
            raise GraphError("order must list exactly the relabelled vertices")
        edges = [Edge(e.id, mapping[e.source], mapping[e.range], e.parity) for e in self.edges]
        return Graph(vertices, edges)

    def to_document(self, relative_set=None) -> dict:
        doc = {
            "vertices": list(self.vertices),
            "edges": [
                {"id": e.id, "source": e.source, "range": e.range, "parity": e.parity}
                for e in self.edges
            ],
        }
        if relative_set is not None:
            doc["relative_set"] = (
                relative_set if isinstance(relative_set, str) else sorted_by(self, relative_set)
            )
        return doc


def sorted_by(g: Graph, vertices: Iterable[str]) -> list[str]:
    """``vertices`` in the graph's declaration order."""
    wanted = set(vertices)
    return [v for v in g.vertices if v in wanted]


def regular_vertices(g: Graph) -> frozenset[str]:
    """Vertices receiving at least one edge (finite graphs are row-finite)."""
    return frozenset(e.range for e in g.edges)


@dataclass(frozen=True)
class RelativeSet:
    members: frozenset[str]
    ordered: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def validated(cls, g: Graph, members: Iterable[str]) -> "RelativeSet":
        members = list(members)
        known = set(g.vertices)
        regular = regular_vertices(g)
        for v in members:
            if v not in known:
                raise GraphError(f"relative set names unknown vertex {v!r}")
            if v not in regular:
                raise GraphError(f"vertex {v!r} in the relative set is not regular")
        return cls(frozenset(members), tuple(sorted_by(g, members)))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.ordered)

    def __contains__(self, v):
        return v in self.members


@dataclass(frozen=True)
class KTheoryProblem:
    """A graph, a relative set of regular vertices and the two derived matrices.

    ``inclusion_matrix`` is vertices x relative-set; ``signed_adjacency`` is
    relative-set x vertices.
    """

    graph: Graph
    relative_set: RelativeSet
    inclusion_matrix: IntMatrix
    signed_adjacency: IntMatrix

    @property
    def num_vertices(self) -> int:
        return len(self.graph.vertices)

    @property
    def num_relative(self) -> int:
        return len(self.relative_set)


def make_problem(g: Graph, v_set: Iterable[str] | str = "all_regular") -> KTheoryProblem:
    """Validate ``v_set`` against ``g`` and build the inclusion and signed adjacency matrices.

    ``v_set`` may also be one of the keywords ``"all_regular"`` or ``"empty"``.
    """
    if isinstance(v_set, str):
        if v_set == "all_regular":
            v_set = regular_vertices(g)
        elif v_set == "empty":
            v_set = ()
        else:
            raise GraphError(f"unknown relative set keyword {v_set!r}")
    rel = RelativeSet.validated(g, v_set)
    idx = g.index
    rows = rel.ordered
    row_of = {v: i for i, v in enumerate(rows)}
    n = len(g.vertices)

    incl = [[0] * len(rows) for _ in range(n)]
    for j, v in enumerate(rows):
        incl[idx[v]][j] = 1

    adj = [[0] * n for _ in rows]
    for e in g.edges:
        i = row_of.get(e.range)
        if i is not None:
            adj[i][idx[e.source]] += -1 if e.parity else 1

    return KTheoryProblem(
        graph=g,
        relative_set=rel,
        inclusion_matrix=IntMatrix.from_rows(incl, ncols=len(rows), row_labels=g.vertices, col_labels=rows),
        signed_adjacency=IntMatrix.from_rows(adj, ncols=n, row_labels=rows, col_labels=g.vertices),
    )


def adjacency_counts(g: Graph) -> IntMatrix:
    """Unsigned matrix: entry ``(v, w)`` counts edges from ``w`` into ``v``."""
    idx = g.index
    n = len(g.vertices)
    counts = Counter((idx[e.range], idx[e.source]) for e in g.edges)
    rows = [[counts.get((i, j), 0) for j in range(n)] for i in range(n)]
    return IntMatrix.from_rows(rows, ncols=n, row_labels=g.vertices, col_labels=g.vertices)


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def add_tail(g: Graph, at: str, length: int) -> Graph:
    """Attach a path ``at_length -> ... -> at_1 -> at`` of parity-0 edges.

    New vertices are appended in the order ``at_1, ..., at_length``.  Names
    that collide with existing vertices get primes appended.
    """
    if at not in g.index:
        raise GraphError(f"unknown vertex {at!r}")
    if isinstance(length, bool) or not isinstance(length, int) or length < 1:
        raise GraphError(f"tail length must be a positive integer, got {length!r}")
    taken_v = set(g.vertices)
    taken_e = g.edge_ids()
    vertices = list(g.vertices)
    edges = list(g.edges)
    prev = at
    for k in range(1, length + 1):
        v = _fresh(f"{at}_{k}", taken_v)
        vertices.append(v)
        edges.append(Edge(_fresh(f"{v}->{prev}", taken_e), v, prev, 0))
        prev = v
    return Graph(vertices, edges)


def cuntz_graph(n: int, odd: int = 0, vertex: str = "v") -> Graph:
    """One vertex with ``n`` loops, the first ``odd`` of them with parity 1."""
    if not 0 <= odd <= n:
        raise GraphError(f"need 0 <= odd <= n, got odd={odd}, n={n}")
    return Graph((vertex,), [Edge(f"e{i + 1}", vertex, vertex, int(i < odd)) for i in range(n)])


def random_graph(rng: random.Random, max_vertices: int = 6, max_edges: int = 12,
                 min_vertices: int = 1) -> Graph:
    nv = rng.randint(min_vertices, max_vertices)
    vertices = [f"v{i}" for i in range(nv)]
    edges = [
        Edge(f"e{k}", rng.choice(vertices), rng.choice(vertices), rng.randint(0, 1))
        for k in range(rng.randint(0, max_edges))
    ]
    return Graph(vertices, edges)


def random_relative_set(rng: random.Random, g: Graph) -> list[str]:
    return [v for v in sorted_by(g, regular_vertices(g)) if rng.random() < 0.5]


# -- document format ---------------------------------------------------------


def _require(cond, msg):
    if not cond:
        raise GraphError(msg)


def parse_document(text: str | bytes) -> tuple[Graph, list[str] | str]:
    """Parse a graph document into ``(graph, relative_set)``.

    ``relative_set`` is a vertex list or one of ``"all_regular"``/``"empty"``;
    it defaults to ``"all_regular"`` when the key is absent.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed graph document: {exc}") from None
    _require(isinstance(doc, dict), "graph document must be an object")
    unknown = set(doc) - {"vertices", "edges", "relative_set"}
    _require(not unknown, f"unknown keys in graph document: {sorted(unknown)}")
    vertices = doc.get("vertices")
    _require(isinstance(vertices, list), "'vertices' must be a list")
    for v in vertices:
        _require(isinstance(v, str), f"vertex identifiers must be strings, got {v!r}")
    raw_edges = doc.get("edges", [])
    _require(isinstance(raw_edges, list), "'edges' must be a list")
    edges = []
    for i, rec in enumerate(raw_edges):
        _require(isinstance(rec, dict), f"edge #{i} must be an object")
        missing = {"id", "source", "range"} - set(rec)
        _require(not missing, f"edge #{i} ({rec.get('id', '?')}) is missing {sorted(missing)}")
        extra = set(rec) - {"id", "source", "range", "parity"}
        _require(not extra, f"edge {rec['id']!r} has unknown keys {sorted(extra)}")
        for key in ("id", "source", "range"):
            _require(isinstance(rec[key], str), f"edge #{i}: {key!r} must be a string")
        parity = rec.get("parity", 0)
        _require(
            type(parity) is int and parity in (0, 1),
            f"edge {rec['id']!r} has parity {parity!r}, expected 0 or 1",
        )
        edges.append(Edge(rec["id"], rec["source"], rec["range"], parity))
    graph = Graph(vertices, edges)

    rel = doc.get("relative_set", "all_regular")
    if isinstance(rel, str):
        _require(rel in ("all_regular", "empty"), f"unknown relative_set keyword {rel!r}")
    else:
        _require(
            isinstance(rel, list) and all(isinstance(v, str) for v in rel),
            "'relative_set' must be a list of vertex ids, 'all_regular' or 'empty'",
        )
        _require(len(set(rel)) == len(rel), "'relative_set' lists a vertex twice")
    return graph, rel


def parse_graph(text: str | bytes) -> Graph:
    return parse_document(text)[0]


def load_document(path) -> tuple[Graph, list[str] | str]:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())
