"""Modular decomposition trees.

Internal nodes substitute their children into a template graph: child ``i``
becomes a module, and two children are completely joined iff they are
adjacent in the template.  ``decompose`` returns the tree of maximal strong
modules (parallel / series / prime nodes).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import InvalidInputError
from .graph import Graph, bits, components, mask_of


@dataclass(frozen=True)
class ModTree:
    """One node of a decomposition tree.

    ``vertex`` is set on leaves only; ``template`` is a graph on
    ``range(len(children))`` for internal nodes.
    """

    kind: str
    children: tuple["ModTree", ...] = ()
    template: Graph | None = None
    vertex: int | None = None
    n: int = 1
    delta: int = 0
    vertices: frozenset[int] = field(default=frozenset(), compare=False)

    @staticmethod
    def leaf(v: int) -> "ModTree":
        return ModTree("leaf", vertex=v, n=1, delta=0, vertices=frozenset([v]))

    @staticmethod
    def node(template: Graph, children, kind: str | None = None) -> "ModTree":
        children = tuple(children)
        r = len(children)
        if template.n != r:
            raise InvalidInputError(f"template has {template.n} vertices for {r} children")
        if kind is None:
            if template.m == 0:
                kind = "parallel"
            elif template.m == r * (r - 1) // 2:
                kind = "series"
            else:
                kind = "prime"
        sizes = [c.n for c in children]
        # a vertex of child i sees its own child's neighbours plus every
        # vertex of each template-adjacent child
        delta = max(c.delta + sum(sizes[j] for j in template.neighbors(i))
                    for i, c in enumerate(children))
        verts = frozenset().union(*(c.vertices for c in children))
        return ModTree(kind, children, template, None, sum(sizes), delta, verts)

    @property
    def is_leaf(self) -> bool:
        return self.kind == "leaf"

    def dump(self, indent: int = 0) -> str:
        """Indented text, one node per line."""
        pad = "  " * indent
        line = f"{pad}node {self.kind} children={len(self.children)} n={self.n}"
        if self.is_leaf:
            line += f" id={self.vertex}"
        return "\n".join([line, *(c.dump(indent + 1) for c in self.children)])

    def __str__(self):
        return self.dump()


def _module_closure(masks, within: int, seed: int) -> int:
    """Smallest module of ``G[within]`` containing the vertex set ``seed``."""
    mod = seed
    while True:
        grow = 0
        for x in bits(within & ~mod):
            seen = masks[x] & mod
            if seen and seen != mod:
                grow |= 1 << x
        if not grow:
            return mod
        mod |= grow


def _quotient(g: Graph, parts: list[list[int]]) -> Graph:
    reps = [p[0] for p in parts]
    return Graph(len(parts), [(i, j) for i, j in combinations(range(len(parts)), 2)
                              if g.has_edge(reps[i], reps[j])])


def _decompose(g: Graph, co: Graph, verts: list[int]) -> ModTree:
    if len(verts) == 1:
        return ModTree.leaf(verts[0])
    within = mask_of(verts)
    parts = components(g, within)
    kind = "parallel"
    if len(parts) == 1:
        parts = components(co, within)
        kind = "series"
    if len(parts) == 1:
        kind = "prime"
        parts = _maximal_modules(g, verts, within)
    parts.sort(key=lambda p: p[0])
    children = [_decompose(g, co, p) for p in parts]
    return ModTree.node(_quotient(g, parts), children, kind)


def _maximal_modules(g: Graph, verts: list[int], within: int) -> list[list[int]]:
    # G[verts] and its complement are connected, so the maximal proper
    # modules are strong and partition verts; u, v share one iff the module
    # generated by {u, v} is proper
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in combinations(verts, 2):
        if find(u) == find(v):
            continue
        if _module_closure(g.masks, within, (1 << u) | (1 << v)) != within:
            parent[find(v)] = find(u)
    groups: dict[int, list[int]] = {}
    for v in verts:
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


def decompose(g: Graph) -> ModTree:
    """Modular decomposition into maximal strong modules."""
    if g.n == 0:
        raise InvalidInputError("cannot decompose the empty graph")
    return _decompose(g, g.complement(), list(range(g.n)))


def expand_edges(t: ModTree) -> set[tuple[int, int]]:
    if t.is_leaf:
        return set()
    edges = set()
    for c in t.children:
        edges |= expand_edges(c)
    for i, j in t.template.edges:
        for u in t.children[i].vertices:
            for v in t.children[j].vertices:
                edges.add((u, v) if u < v else (v, u))
    return edges


def expand(t: ModTree) -> Graph:
    """The graph defined by the tree, on ids ``0..max id``."""
    return Graph(max(t.vertices) + 1, expand_edges(t))


def width(t: ModTree) -> int:
    """Largest number of children of any internal node (0 for a leaf)."""
    if t.is_leaf:
        return 0
    return max(len(t.children), *(width(c) for c in t.children))


def modular_width(t: ModTree) -> int:
    """Width once parallel/series nodes are split into binary ones.

    Degenerate nodes can always be rebuilt from nested two-child
    substitutions, so they contribute 2; prime nodes contribute their
    child count.
    """
    if t.is_leaf:
        return 0
    own = len(t.children) if t.kind == "prime" else 2
    return max(own, *(modular_width(c) for c in t.children))


def internal_nodes(t: ModTree):
    """Post-order iteration over internal nodes."""
    for c in t.children:
        yield from internal_nodes(c)
    if not t.is_leaf:
        yield t
