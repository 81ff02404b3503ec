"""Minimum fair cost of a set satisfying a one-free-variable formula, on graphs
of small twin cover.

A solution ``W`` is summarised by its *shape*: ``W`` restricted to the
cover ``K``, plus, for each cover set ``A``, a table counting the cliques
attached to exactly ``A`` by their (selected, unselected) split.  Splits
are capped at ``r + 1`` and counts at ``alpha + 1``; sets of equal shape
satisfy the same formulas.

The search runs over cover intersections and realizable shapes.  For each
shape the cheapest set of that shape is found exactly
(:func:`min_cost_solution`); candidates are then tried in cost order, and
the first whose shape satisfies the formula wins.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations_with_replacement, product

from .errors import InvalidInputError, ResourceLimitError
from .formula import DEFAULT_ATOM_BUDGET, Formula, evaluate
from .graph import Graph, LabeledGraph, bits, fair_cost, mask_of, popcount
from .kernel import kernelize
from .params import TwinCover, min_twin_cover


def shape_r(q_s: int, q_v: int) -> int:
    return 2 ** (q_s + 2) * q_v


def shape_alpha(q_s: int, q_v: int) -> int:
    return 2 ** (shape_r(q_s, q_v) * (q_s + 1)) * (q_v + 1)


@dataclass(frozen=True)
class AShape:
    """Capped split counts for the cliques with one cover set.

    ``cells`` holds the non-zero entries as sorted ``((i, j), count)`` pairs.
    """

    cover_set: frozenset[int]
    cells: tuple
    r: int
    alpha: int

    def count(self, i: int, j: int) -> int:
        return dict(self.cells).get((i, j), 0)

    def grid(self) -> list[list[int]]:
        size = self.r + 2
        out = [[0] * size for _ in range(size)]
        for (i, j), c in self.cells:
            out[i][j] = c
        return out


@dataclass(frozen=True)
class Shape:
    wk: frozenset[int]
    ashapes: tuple[AShape, ...]

    def of(self, cover_set) -> AShape:
        for a in self.ashapes:
            if a.cover_set == frozenset(cover_set):
                return a
        raise KeyError(cover_set)


def cell_of(size: int, x: int, r: int) -> tuple[int, int]:
    """Cell of a clique of ``size`` vertices with ``x`` of them selected."""
    return min(r + 1, x), min(r + 1, size - x)


def cell_cost(size: int, i: int, j: int, r: int) -> int | None:
    """Fewest selected vertices putting a clique of ``size`` in cell ``(i, j)``,
    or ``None`` if the cell is out of reach."""
    top = r + 1
    if i < top and j < top:
        return i if i + j == size else None
    if j < top:
        x = size - j
        return x if x >= top else None
    if i < top:
        return i if size - i >= top else None
    return top if size >= 2 * top else None


def _cover_sets(cover: TwinCover) -> dict[frozenset, list]:
    groups: dict = {}
    for c in cover.cliques:
        groups.setdefault(c.cover_set, []).append(c)
    return dict(sorted(groups.items(), key=lambda kv: sorted(kv[0])))


def _ashape(cover_set, counts: Counter, r: int, alpha: int) -> AShape:
    cells = tuple(sorted((cell, min(alpha + 1, c)) for cell, c in counts.items() if c))
    return AShape(frozenset(cover_set), cells, r, alpha)


def shape_of(g: Graph, cover: TwinCover, w, q_s: int, q_v: int) -> Shape:
    w = g.check_set(w)
    r, alpha = shape_r(q_s, q_v), shape_alpha(q_s, q_v)
    ashapes = []
    for a, cliques in _cover_sets(cover).items():
        counts = Counter()
        for c in cliques:
            x = sum(1 for v in c.vertices if v in w)
            counts[cell_of(len(c), x, r)] += 1
        ashapes.append(_ashape(a, counts, r, alpha))
    return Shape(frozenset(w & cover.cover), tuple(ashapes))


def enumerate_realizable_shapes(g: Graph, cover: TwinCover, wk, q_s: int, q_v: int):
    """Every shape attained by some ``W`` with ``W`` meeting the cover in ``wk``."""
    wk = g.check_set(wk)
    if not wk <= cover.cover:
        raise InvalidInputError("wk must be a subset of the twin cover")
    r, alpha = shape_r(q_s, q_v), shape_alpha(q_s, q_v)
    per_a = []
    for a, cliques in _cover_sets(cover).items():
        by_size = Counter(len(c) for c in cliques)
        choices = []
        for size, m in sorted(by_size.items()):
            options = sorted({cell_of(size, x, r) for x in range(size + 1)})
            choices.append([Counter(combo) for combo in
                            combinations_with_replacement(options, m)])
        found = set()
        for pick in product(*choices):
            found.add(_ashape(a, sum(pick, Counter()), r, alpha))
        per_a.append(sorted(found, key=lambda s: s.cells))
    for combo in product(*per_a):
        yield Shape(frozenset(wk), tuple(combo))


# --- cheapest set of a given shape --------------------------------------------

def _distribute(m: int, opts, needs, open_):
    """Ways to split ``m`` identical cliques over ``opts`` without overfilling
    exact cells."""
    if not opts:
        if m == 0:
            yield ()
        return
    ci = opts[0][0]
    hi = m if open_[ci] else min(m, needs[ci])
    for c in range(hi, -1, -1):
        for rest in _distribute(m - c, opts[1:], needs, open_):
            yield (c,) + rest


def _assign(groups, cells, demand, open_, cap, r):
    """Minimum total selection placing every clique in a cell of the table.

    ``groups`` is a list of ``(size, count)``; exact cells must be filled to
    their demand, open cells (capped counts) to at least it.  A clique may
    only use a cell whose selection keeps ``min(x, size - 1) <= cap``.
    Returns ``(total, plan)`` or ``None``.
    """
    memo: dict = {}
    remaining = [0] * (len(groups) + 1)
    for gi in range(len(groups) - 1, -1, -1):
        remaining[gi] = remaining[gi + 1] + groups[gi][1]

    def go(gi, needs):
        if sum(needs) > remaining[gi]:
            return None
        if gi == len(groups):
            return (0, ())
        key = (gi, needs)
        if key in memo:
            return memo[key]
        size, m = groups[gi]
        opts = []
        for ci, cell in enumerate(cells):
            x = cell_cost(size, cell[0], cell[1], r)
            if x is None or min(x, size - 1) > cap:
                continue
            if open_[ci] or needs[ci] > 0:
                opts.append((ci, x))
        best = None
        for dist in _distribute(m, opts, needs, open_):
            new = list(needs)
            cost = 0
            for (ci, x), c in zip(opts, dist):
                new[ci] = max(0, new[ci] - c)
                cost += c * x
            sub = go(gi + 1, tuple(new))
            if sub is not None and (best is None or cost + sub[0] < best[0]):
                best = (cost + sub[0], (tuple(zip(opts, dist)),) + sub[1])
        memo[key] = best
        return best

    return go(0, tuple(demand))


def _solve_a(cliques, ashape: AShape, cap):
    """Selection per clique for one cover set, or ``None``."""
    by_size: dict[int, list] = {}
    for c in cliques:
        by_size.setdefault(len(c), []).append(c)
    groups = sorted((s, len(cs)) for s, cs in by_size.items())
    cells = [cell for cell, _ in ashape.cells]
    demand = [c for _, c in ashape.cells]
    open_ = [c == ashape.alpha + 1 for c in demand]
    found = _assign(groups, cells, demand, open_, cap, ashape.r)
    if found is None:
        return None
    total, plan = found
    picks = {}
    for (size, _), placement in zip(groups, plan):
        queue = sorted(by_size[size], key=lambda c: c.vertices[0])
        for (_, x), c in placement:
            for clique in queue[:c]:
                picks[clique] = x
            queue = queue[c:]
    return total, picks


def _feasible(g: Graph, cover: TwinCover, s: Shape, p):
    wk = mask_of(s.wk)
    masks = g.masks
    picks = {}
    load = {}
    for a, cliques in _cover_sets(cover).items():
        try:
            ashape = s.of(a)
        except KeyError:
            return None
        cap = None if p is None else p - popcount(mask_of(a) & wk)
        if cap is not None and cap < 0:
            return None
        solved = _solve_a(cliques, ashape, float("inf") if cap is None else cap)
        if solved is None:
            return None
        load[a] = solved[0]
        picks.update(solved[1])
    if p is not None:
        for v in bits(wk | mask_of(cover.cover)):
            seen = popcount(masks[v] & wk) + sum(x for a, x in load.items() if v in a)
            if seen > p:
                return None
    w = set(s.wk)
    for clique, x in picks.items():
        w.update(clique.vertices[:x])
    return frozenset(w)


def realize(g: Graph, cover: TwinCover, s: Shape) -> frozenset[int] | None:
    """A representative set of shape ``s`` (lowest-id cliques and vertices)."""
    return _feasible(g, cover, s, None)


def min_cost_solution(g: Graph, cover: TwinCover, s: Shape):
    """``(cost, W)`` with ``W`` of shape ``s`` and minimum fair cost, or ``None``
    if no set has this shape."""
    if realize(g, cover, s) is None:
        return None
    lo, hi = 0, max(g.n - 1, 0)
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(g, cover, s, mid) is None:
            lo = mid + 1
        else:
            hi = mid
    w = _feasible(g, cover, s, lo)
    cost = fair_cost(g, w)
    assert cost == lo, (cost, lo)
    return cost, w


# --- the pipeline -------------------------------------------------------------

def _free_var(f: Formula) -> str:
    if len(f.free) != 1:
        raise InvalidInputError(f"expected one free set variable, got {list(f.free)}")
    return f.free[0]


def holds_under_shape(g: Graph, cover: TwinCover, f: Formula, s: Shape,
                      budget: int = DEFAULT_ATOM_BUDGET) -> bool:
    """Truth of ``f`` for the sets of shape ``s``, via a kernel of the graph
    labeled with a representative."""
    name = _free_var(f)
    w = realize(g, cover, s)
    if w is None:
        raise InvalidInputError("shape is not realizable")
    report = kernelize(LabeledGraph(g, {name: w}), f.q_s, f.q_v)
    kern = report.reduced
    return evaluate(kern, f, {name: kern.labels[name]}, budget=budget)


@dataclass
class FairEvalResult:
    cost: int
    witness: frozenset[int]
    stats: dict


def fair_evaluate(g: Graph, f: Formula, cover: TwinCover | None = None,
                  budget: int = DEFAULT_ATOM_BUDGET,
                  max_candidates: int = 10 ** 6) -> FairEvalResult | None:
    """Minimum fair cost of ``W`` with ``g |= f(W)``; ``None`` if unsatisfiable."""
    _free_var(f)
    if cover is None:
        cover = min_twin_cover(g)
    q_s, q_v = f.q_s, f.q_v
    candidates = []
    kcover = sorted(cover.cover)
    for sub in range(1 << len(kcover)):
        wk = frozenset(kcover[i] for i in bits(sub))
        for s in enumerate_realizable_shapes(g, cover, wk, q_s, q_v):
            solved = min_cost_solution(g, cover, s)
            if solved is None:
                continue
            cost, w = solved
            candidates.append((cost, len(w), sorted(w), s))
            if len(candidates) > max_candidates:
                raise ResourceLimitError(f"more than {max_candidates} shapes")
    candidates.sort(key=lambda c: c[:3])
    checked = 0
    for cost, _, w, s in candidates:
        checked += 1
        if holds_under_shape(g, cover, f, s, budget):
            stats = {"shapes": len(candidates), "checked": checked, "k": cover.k}
            return FairEvalResult(cost, frozenset(w), stats)
    return None
