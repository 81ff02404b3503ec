"""Fair Vertex Cover: find a vertex cover minimising the largest number of
cover vertices in any vertex's neighbourhood.

Three solvers:

* :func:`solve_dp` - dynamic program over the modular decomposition,
  ``O(2^r * r * n^3)``-style for width ``r``;
* :func:`solve_brute` - enumeration of all subsets (the oracle);
* :func:`solve_bnb` - branch and bound for the decision version, used on
  reduction instances too large to enumerate.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, ResourceLimitError
from .graph import Graph, bits, fair_cost, is_vertex_cover, popcount
from .modec import ModTree, decompose

INF = float("inf")


# --- dynamic program over the modular decomposition --------------------------

@dataclass
class _Table:
    """Per-node table: ``size[p]`` is the least size of a vertex cover of the
    node's graph with fair cost at most ``p`` (``INF`` if none).  ``choice[p]``
    records the cover type and child budgets for reconstruction."""

    size: list
    choice: list


@dataclass
class DPResult:
    cost: int
    cover: frozenset[int]
    size: int
    stats: dict = field(default_factory=dict)


def _lookup(tab: _Table, p: int):
    # fair cost never exceeds n - 1, so budgets past the end behave like the last one
    return tab.size[min(p, len(tab.size) - 1)]


def _vertex_covers(template: Graph) -> list[int]:
    """All vertex covers of the template as bitmasks, in increasing mask order."""
    r = template.n
    masks = template.masks
    out = []
    for c in range(1 << r):
        missing = ((1 << r) - 1) & ~c
        # every vertex outside c must have all its neighbours inside c
        if all(masks[i] & ~c == 0 for i in bits(missing)):
            out.append(c)
    return out


def _ctype_key(c: int) -> tuple:
    return tuple(bits(c))


def _node_table(t: ModTree, child_tabs: list[_Table], stats: dict) -> _Table:
    r = len(t.children)
    sizes = [c.n for c in t.children]
    deltas = [c.delta for c in t.children]
    nbrs = [list(t.template.neighbors(i)) for i in range(r)]
    mass = [sum(sizes[j] for j in nbrs[i]) for i in range(r)]
    covers = _vertex_covers(t.template)
    # deterministic tie-break: lexicographically smallest type
    covers.sort(key=_ctype_key)
    stats["types"] = stats.get("types", 0) + len(covers)
    size_tab = [INF] * (t.n + 1)
    choice_tab = [None] * (t.n + 1)
    for ctype in covers:
        inside = [(ctype >> i) & 1 == 1 for i in range(r)]
        fixed = sum(sizes[i] for i in range(r) if inside[i])
        for p in range(t.n + 1):
            budgets = {}
            total = fixed
            ok = True
            for i in range(r):
                if inside[i]:
                    continue
                pi = p - mass[i]
                if pi < 0:
                    ok = False
                    break
                ci = _lookup(child_tabs[i], pi)
                if ci == INF:
                    ok = False
                    break
                budgets[i] = pi
                total += ci
            if not ok:
                continue
            for i in range(r):
                if not inside[i]:
                    continue
                seen = deltas[i]
                for j in nbrs[i]:
                    seen += sizes[j] if inside[j] else _lookup(child_tabs[j], budgets[j])
                if seen > p:
                    ok = False
                    break
            if ok and total < size_tab[p]:
                size_tab[p] = total
                choice_tab[p] = (ctype, budgets)
    return _Table(size_tab, choice_tab)


def _build_tables(t: ModTree, tables: dict, stats: dict) -> _Table:
    if t.is_leaf:
        tab = _Table([0, 0], [None, None])
    else:
        child_tabs = [_build_tables(c, tables, stats) for c in t.children]
        tab = _node_table(t, child_tabs, stats)
        stats["nodes"] = stats.get("nodes", 0) + 1
    tables[id(t)] = tab
    return tab


def _reconstruct(t: ModTree, p: int, tables: dict, out: set) -> None:
    if t.is_leaf:
        return
    tab = tables[id(t)]
    ctype, budgets = tab.choice[min(p, len(tab.size) - 1)]
    for i, child in enumerate(t.children):
        if (ctype >> i) & 1:
            out.update(child.vertices)
        else:
            _reconstruct(child, budgets[i], tables, out)


def table_of(t: ModTree) -> list:
    """Root table (min cover size per fair-cost bound); exposed for tests."""
    tables: dict = {}
    _build_tables(t, tables, {})
    return tables[id(t)].size, tables


def solve_dp(g: Graph, tree: ModTree | None = None) -> DPResult:
    """Minimum fair cost of a vertex cover via the modular decomposition."""
    if g.n == 0:
        raise InvalidInputError("graph must be non-empty")
    if tree is None:
        tree = decompose(g)
    tables: dict = {}
    stats: dict = {}
    root = _build_tables(tree, tables, stats)
    k = next(p for p, s in enumerate(root.size) if s != INF)
    cover: set = set()
    _reconstruct(tree, k, tables, cover)
    stats.update(width=max((len(x.children) for x in _walk(tree)), default=0),
                 table=[s if s != INF else None for s in root.size])
    return DPResult(k, frozenset(cover), int(root.size[k]), stats)


def _walk(t: ModTree):
    yield t
    for c in t.children:
        yield from _walk(c)


# --- brute force --------------------------------------------------------------

DEFAULT_BRUTE_CAP = 22


@dataclass
class BruteResult:
    cost: int
    cover: frozenset[int]


def solve_brute(g: Graph, cap: int = DEFAULT_BRUTE_CAP) -> BruteResult:
    """Exact optimum by enumerating every subset of ``V``.

    Ties: smaller cost, then smaller size, then lexicographically smallest
    sorted id list.
    """
    n = g.n
    if n > cap:
        raise ResourceLimitError(f"n={n} exceeds brute-force cap {cap}")
    subsets = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(1 << n, dtype=bool)
    for u, v in g.edges:
        ok &= ((subsets >> u) | (subsets >> v)) & 1 == 1
    cand = subsets[ok]
    cost = np.zeros(len(cand), dtype=np.int64)
    for m in g.masks:
        np.maximum(cost, np.bitwise_count(cand & m), out=cost)
    best = cost.min()
    tied = cand[cost == best]
    sizes = np.bitwise_count(tied)
    tied = tied[sizes == sizes.min()]
    winner = min((tuple(bits(int(s))) for s in tied))
    return BruteResult(int(best), frozenset(winner))


# --- branch and bound ---------------------------------------------------------

class Outcome(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass
class BnBResult:
    outcome: Outcome
    cover: frozenset[int] | None = None
    nodes: int = 0

    def __bool__(self):
        return self.outcome is Outcome.YES


class _Timeout(Exception):
    pass


def solve_bnb(g: Graph, k: int, time_budget: float | None = 60.0) -> BnBResult:
    """Decide whether some vertex cover has fair cost at most ``k``.

    Vertices are either put in the cover, left out (which forces every
    neighbour in), or undecided.  Propagation:

    * a vertex of degree > k cannot be left out (all its neighbours would
      be in the cover);
    * a vertex whose exclusion would push some vertex past ``k`` is forced in;
    * an undecided vertex whose neighbours are all in the cover is left out
      (taking it can only raise counts).
    """
    n = g.n
    masks = g.masks
    deadline = None if time_budget is None else time.monotonic() + time_budget
    counter = [0]

    def propagate(cov, out):
        """Returns updated (cov, out) or None on conflict."""
        changed = True
        while changed:
            changed = False
            # fair-cost lower bound from committed cover vertices
            for v in range(n):
                if popcount(masks[v] & cov) > k:
                    return None
            und = ((1 << n) - 1) & ~cov & ~out
            for v in bits(und):
                nb = masks[v]
                if nb & out:
                    cov |= 1 << v
                    changed = True
                    continue
                if nb & ~cov == 0:
                    out |= 1 << v
                    changed = True
                    continue
                add = nb & ~cov
                if popcount(nb) > k or any(popcount(masks[w] & (cov | add)) > k
                                           for w in bits(_touched(masks, add))):
                    cov |= 1 << v
                    changed = True
            if changed:
                for v in bits(out):
                    if masks[v] & out:
                        return None
        return cov, out

    def search(cov, out):
        counter[0] += 1
        if deadline is not None and counter[0] % 64 == 0 and time.monotonic() > deadline:
            raise _Timeout
        state = propagate(cov, out)
        if state is None:
            return None
        cov, out = state
        und = ((1 << n) - 1) & ~cov & ~out
        if not und:
            return cov
        v = max(bits(und), key=lambda x: (popcount(masks[x] & und), -x))
        # leave v out first: keeps the cover small around v's neighbours
        found = search(cov | masks[v], out | (1 << v))
        if found is not None:
            return found
        return search(cov | (1 << v), out)

    try:
        found = search(0, 0)
    except _Timeout:
        return BnBResult(Outcome.UNKNOWN, None, counter[0])
    if found is None:
        return BnBResult(Outcome.NO, None, counter[0])
    cover = frozenset(bits(found))
    assert is_vertex_cover(g, cover) and fair_cost(g, cover) <= k
    return BnBResult(Outcome.YES, cover, counter[0])


def _touched(masks, add: int) -> int:
    out = 0
    for u in bits(add):
        out |= masks[u]
    return out
