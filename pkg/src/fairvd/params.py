"""Structural parameters: twin edges, twin cover, twin classes and
neighbourhood diversity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidInputError
from .graph import Graph, LabeledGraph, bits, components, mask_of, popcount


@dataclass(frozen=True)
class TwinClique:
    vertices: tuple[int, ...]
    cover_set: frozenset[int]

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True)
class TwinCover:
    """A twin cover ``cover`` and the twin cliques of ``G - cover``.

    Cliques are ordered by smallest vertex id; ``cover_set`` is the set of
    cover vertices adjacent to (every vertex of) the clique.
    """

    cover: frozenset[int]
    cliques: tuple[TwinClique, ...]

    @property
    def k(self) -> int:
        return len(self.cover)


def is_twin_edge(g: Graph, u: int, v: int) -> bool:
    """``N(u) - {v} == N(v) - {u}`` for the edge ``uv``."""
    if not g.has_edge(u, v):
        raise InvalidInputError(f"{u}-{v} is not an edge")
    m = g.masks
    return m[u] & ~(1 << v) == m[v] & ~(1 << u)


def twin_cover_from_set(g: Graph, cover: Iterable[int]) -> TwinCover:
    """Build the clique decomposition for a given twin cover.

    Raises :class:`InvalidInputError` if ``cover`` misses a non-twin edge.
    """
    cover = g.check_set(cover)
    for u, v in g.edges:
        if u not in cover and v not in cover and not is_twin_edge(g, u, v):
            raise InvalidInputError(f"non-twin edge {u}-{v} is not covered")
    cmask = mask_of(cover)
    rest = ((1 << g.n) - 1) & ~cmask
    cliques = []
    for comp in components(g, rest):
        cliques.append(TwinClique(tuple(comp), frozenset(bits(g.masks[comp[0]] & cmask))))
    return TwinCover(cover, tuple(cliques))


def _greedy_cover(masks: list[int], alive: int) -> int:
    """Repeatedly take a max-degree vertex; an upper bound for pruning."""
    cover = 0
    deg = {v: popcount(masks[v] & alive) for v in bits(alive)}
    while True:
        v = max(deg, key=lambda x: (deg[x], -x), default=None)
        if v is None or deg[v] == 0:
            return cover
        cover |= 1 << v
        alive &= ~(1 << v)
        del deg[v]
        for u in bits(masks[v] & alive):
            deg[u] -= 1


def _matching_bound(masks: list[int], alive: int) -> int:
    size = 0
    free = alive
    for v in bits(alive):
        if free >> v & 1:
            nb = masks[v] & free & ~(1 << v)
            if nb:
                free &= ~(1 << v) & ~(nb & -nb)
                size += 1
    return size


def min_vertex_cover(g: Graph, budget: int | None = None, edges=None) -> frozenset[int] | None:
    """Exact minimum vertex cover of ``g`` (or of the sub-edge-set ``edges``)
    by branching on an edge at a max-degree vertex.  Returns ``None`` if every
    cover is larger than ``budget``."""
    n = g.n
    if edges is None:
        edges = g.edges
    masks = [0] * n
    for u, v in edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    everything = (1 << n) - 1
    best_mask = _greedy_cover(masks, everything)
    best = [popcount(best_mask), best_mask]
    limit = n if budget is None else budget

    def search(alive, chosen, size):
        # alive: vertices not yet in the cover
        pick, pick_deg = -1, 0
        for v in bits(alive):
            d = popcount(masks[v] & alive)
            if d > pick_deg:
                pick, pick_deg = v, d
        if pick_deg == 0:
            if size < best[0]:
                best[0], best[1] = size, chosen
            return
        if size + _matching_bound(masks, alive) >= min(best[0], limit + 1):
            return
        # branch: pick in the cover, or pick out (so all its live neighbours in)
        search(alive & ~(1 << pick), chosen | (1 << pick), size + 1)
        nb = masks[pick] & alive
        search(alive & ~nb & ~(1 << pick), chosen | nb, size + popcount(nb))

    search(everything, 0, 0)
    if best[0] > limit:
        return None
    return frozenset(bits(best[1]))


def min_twin_cover(g: Graph, budget: int | None = None) -> TwinCover | None:
    """A minimum twin cover, or ``None`` if it has more than ``budget`` vertices.

    Every non-twin edge must be covered, so this is a minimum vertex cover of
    the subgraph formed by the non-twin edges.
    """
    if budget is not None and budget < 0:
        raise InvalidInputError("budget must be non-negative")
    hard = [(u, v) for u, v in g.sorted_edges() if not is_twin_edge(g, u, v)]
    cover = min_vertex_cover(g, g.n if budget is None else budget, hard)
    if cover is None:
        return None
    return twin_cover_from_set(g, cover)


def twin_classes(g: Graph | LabeledGraph) -> list[tuple[int, ...]]:
    """Partition by equal closed neighbourhood and equal label membership."""
    lg = g if isinstance(g, LabeledGraph) else LabeledGraph(g)
    masks = lg.graph.masks
    groups: dict = {}
    for v in range(lg.n):
        key = (masks[v] | (1 << v), lg.label_vector(v))
        groups.setdefault(key, []).append(v)
    return sorted((tuple(c) for c in groups.values()), key=lambda c: c[0])


def neighborhood_diversity(g: Graph) -> tuple[int, list[tuple[int, ...]]]:
    """Number of types under ``N(u)-{v} == N(v)-{u}`` and the type classes."""
    masks = g.masks
    classes: list[list[int]] = []
    for v in range(g.n):
        for cls in classes:
            u = cls[0]
            if masks[u] & ~(1 << v) == masks[v] & ~(1 << u):
                cls.append(v)
                break
        else:
            classes.append([v])
    return len(classes), [tuple(c) for c in classes]
