"""Small named graph families and seeded random generators."""

from __future__ import annotations

import random
from itertools import combinations

from .graph import Graph


def empty(n: int) -> Graph:
    return Graph(n)


def complete(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def path(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves: int) -> Graph:
    """``K_{1,leaves}`` with the centre at id 0."""
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def complete_multipartite(*sizes: int) -> Graph:
    part, v = [], 0
    for p, s in enumerate(sizes):
        part += [p] * s
        v += s
    return Graph(v, ((a, b) for a, b in combinations(range(v), 2) if part[a] != part[b]))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def gnp(n: int, p: float, rng: random.Random) -> Graph:
    return Graph(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


def twin_structured(k: int, clique_sizes: list[int], rng: random.Random,
                    cover_density: float = 0.5, attach: float = 0.5) -> Graph:
    """Graph with twin cover of size at most ``k`` built from explicit cliques.

    Vertices ``0..k-1`` form the cover (random edges among them); each clique
    gets a random cover set and is joined completely to it.
    """
    edges = [(u, v) for u, v in combinations(range(k), 2) if rng.random() < cover_density]
    v = k
    for size in clique_sizes:
        members = list(range(v, v + size))
        edges += list(combinations(members, 2))
        cover_set = [c for c in range(k) if rng.random() < attach]
        edges += [(c, x) for c in cover_set for x in members]
        v += size
    return Graph(v, edges)
