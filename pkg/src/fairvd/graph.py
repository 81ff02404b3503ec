"""Undirected simple graphs over dense integer ids, fair-cost objectives and
the plain-text graph format.

Vertex sets are passed around as ``frozenset`` of ids; internally most
routines work on integer bitmasks (bit ``v`` set iff vertex ``v`` is present).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import InvalidInputError


def popcount(x: int) -> int:
    return bin(x).count("1")


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> list[int]:
    """Ids of the set bits of ``mask`` in increasing order."""
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


class Graph:
    """Immutable undirected simple graph on vertices ``0..n-1``."""

    __slots__ = ("n", "edges", "_adj", "_masks")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise InvalidInputError(f"negative vertex count {n}")
        norm = set()
        for e in edges:
            u, v = e
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInputError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise InvalidInputError(f"self-loop at {u}")
            norm.add((u, v) if u < v else (v, u))
        adj = [set() for _ in range(n)]
        masks = [0] * n
        for u, v in norm:
            adj[u].add(v)
            adj[v].add(u)
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        self.n = n
        self.edges = frozenset(norm)
        self._adj = tuple(frozenset(a) for a in adj)
        self._masks = tuple(masks)

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def masks(self) -> tuple[int, ...]:
        """Per-vertex neighbourhood bitmasks."""
        return self._masks

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def closed_neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v] | {v}

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def complement(self) -> "Graph":
        return Graph(self.n, ((u, v) for u in range(self.n) for v in range(u + 1, self.n)
                              if v not in self._adj[u]))

    def check_set(self, w: Iterable[int]) -> frozenset[int]:
        """Validate a vertex set against this graph and freeze it."""
        w = frozenset(w)
        for v in w:
            if not isinstance(v, int) or not 0 <= v < self.n:
                raise InvalidInputError(f"vertex {v!r} out of range for n={self.n}")
        return w


@dataclass(frozen=True)
class LabeledGraph:
    """A graph together with named vertex subsets."""

    graph: Graph
    labels: Mapping[str, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        frozen = {}
        for name, members in self.labels.items():
            frozen[name] = self.graph.check_set(members)
        object.__setattr__(self, "labels", frozen)

    @property
    def n(self) -> int:
        return self.graph.n

    def label_vector(self, v: int) -> tuple[bool, ...]:
        return tuple(v in self.labels[name] for name in sorted(self.labels))


def fair_cost(g: Graph, w: Iterable[int]) -> int:
    """Largest number of ``w``-neighbours seen by any vertex of ``g``."""
    wm = mask_of(g.check_set(w))
    if not wm:
        return 0
    return max((popcount(m & wm) for m in g.masks), default=0)


def l_fair_cost(g: Graph, ws: Iterable[Iterable[int]]) -> int:
    """Fair cost of a family of sets: the max over members of their fair cost.

    An empty family costs 0.
    """
    return max((fair_cost(g, w) for w in ws), default=0)


def is_vertex_cover(g: Graph, w: Iterable[int]) -> bool:
    w = g.check_set(w)
    return all(u in w or v in w for u, v in g.edges)


def disjoint_union(gs: list[Graph]) -> tuple[Graph, list[int]]:
    """Disjoint union; returns the graph and the id offset of every part."""
    if not gs:
        raise InvalidInputError("disjoint_union needs at least one graph")
    offsets, edges, total = [], [], 0
    for g in gs:
        offsets.append(total)
        edges.extend((u + total, v + total) for u, v in g.edges)
        total += g.n
    return Graph(total, edges), offsets


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, list[int]]:
    """Subgraph induced by ``s`` relabelled to ``0..|s|-1`` in id order.

    The second value maps each new id back to its original id.
    """
    keep = sorted(g.check_set(s))
    index = {v: i for i, v in enumerate(keep)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    return Graph(len(keep), edges), keep


def induced_labeled(lg: LabeledGraph, s: Iterable[int]) -> tuple[LabeledGraph, list[int]]:
    sub, keep = induced_subgraph(lg.graph, s)
    index = {v: i for i, v in enumerate(keep)}
    labels = {name: frozenset(index[v] for v in members if v in index)
              for name, members in lg.labels.items()}
    return LabeledGraph(sub, labels), keep


def components(g: Graph, within: int | None = None) -> list[list[int]]:
    """Connected components of ``g`` restricted to the vertex mask ``within``.

    Components are sorted internally and ordered by smallest id.
    """
    if within is None:
        within = (1 << g.n) - 1
    out = []
    rest = within
    masks = g.masks
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= masks[v]
            nxt &= within & ~comp
            comp |= nxt
            frontier = nxt
        out.append(bits(comp))
        rest &= ~comp
    return out


# --- text format -----------------------------------------------------------

def parse_graph(text: str) -> LabeledGraph:
    """Parse the ``n m`` / ``u v`` / ``label <name> ids...`` text format."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise InvalidInputError("empty graph file")
    lineno, head = rows[0]
    try:
        n, m = (int(t) for t in head)
    except ValueError:
        raise InvalidInputError(f"line {lineno}: expected 'n m' header") from None
    edge_rows = rows[1:1 + m]
    if len(edge_rows) < m or any(r[1][0] == "label" for r in edge_rows):
        raise InvalidInputError(f"expected {m} edge lines")
    edges = []
    for lineno, toks in edge_rows:
        if len(toks) != 2:
            raise InvalidInputError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise InvalidInputError(f"line {lineno}: non-integer vertex id") from None
        edges.append((u, v))
    if len({(min(e), max(e)) for e in edges}) != len(edges):
        raise InvalidInputError("duplicate edge")
    g = Graph(n, edges)
    labels = {}
    for lineno, toks in rows[1 + m:]:
        if toks[0] != "label" or len(toks) < 2:
            raise InvalidInputError(f"line {lineno}: expected 'label <name> <id> ...'")
        if toks[1] in labels:
            raise InvalidInputError(f"line {lineno}: duplicate label {toks[1]!r}")
        try:
            labels[toks[1]] = frozenset(int(t) for t in toks[2:])
        except ValueError:
            raise InvalidInputError(f"line {lineno}: non-integer vertex id") from None
    return LabeledGraph(g, labels)


def format_graph(g: Graph | LabeledGraph) -> str:
    lg = g if isinstance(g, LabeledGraph) else LabeledGraph(g)
    lines = [f"{lg.graph.n} {lg.graph.m}"]
    lines += [f"{u} {v}" for u, v in lg.graph.sorted_edges()]
    for name, members in lg.labels.items():
        lines.append(" ".join(["label", name, *map(str, sorted(members))]))
    return "\n".join(lines) + "\n"


def read_labeled_graph(path: str | Path) -> LabeledGraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def read_graph(path: str | Path) -> Graph:
    return read_labeled_graph(path).graph


def write_graph(path: str | Path, g: Graph | LabeledGraph) -> None:
    Path(path).write_text(format_graph(g), encoding="utf-8")
