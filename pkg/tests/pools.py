"""Seeded graph and formula pools shared by the tests."""

from __future__ import annotations

import random

from fairvd import families as fam
from fairvd.formula import (Adj, And, Const, Eq, Formula, Implies, In, Iff, Not, Or, Quant,
                            parse)
from fairvd.graph import Graph

VC = "(forall u (forall v (implies (adj u v) (or (in u X) (in v X)))))"

# one free set variable X; q_S <= 1, q_v <= 2
FORMULA_TEXTS = {
    "vertex_cover": VC,
    "dominating": "(forall u (or (in u X) (exists v (and (adj u v) (in v X)))))",
    "independent": "(forall u (forall v (implies (and (in u X) (in v X)) (not (adj u v)))))",
    "everything": "(forall x (in x X))",
    "nothing": "(forall x (not (in x X)))",
    "closed_nbhd": "(exists u (and (in u X) (forall v (implies (adj u v) (in v X)))))",
    "edge_inside": "(exists u (exists v (and (adj u v) (and (in u X) (in v X)))))",
    "total_dominating": "(forall u (exists v (and (adj u v) (in v X))))",
    "extends_independent": ("(existsS Y (forall u (and (implies (in u X) (in u Y)) "
                            "(forall v (implies (and (adj u v) (in u Y)) (not (in v Y)))))))"),
    "has_non_isolated": ("(existsS Y (and (exists x (in x Y)) (forall x (iff (in x Y) "
                         "(and (in x X) (exists y (adj x y)))))))"),
}


def formula_pool() -> dict[str, Formula]:
    return {name: parse(text, ["X"]) for name, text in FORMULA_TEXTS.items()}


SENTENCE_TEXTS = [
    "(exists x (exists y (adj x y)))",
    "(forall x (exists y (adj x y)))",
    "(exists x (forall y (or (= x y) (adj x y))))",
    "(forall x (forall y (or (= x y) (adj x y))))",
    "(exists x (not (= x x)))",
    "(existsS Y (forall x (forall y (implies (adj x y) (iff (in x Y) (not (in y Y)))))))",
    "(existsS Y (forall x (exists y (and (adj x y) (iff (in x Y) (not (in y Y)))))))",
    "(forallS Y (exists x (or (in x Y) (forall y (not (adj x y))))))",
    "(exists x (exists y (and (not (= x y)) (not (adj x y)))))",
    "(exists x (forall y (not (adj x y))))",
]


def sentence_pool() -> list[Formula]:
    out = [parse(t) for t in SENTENCE_TEXTS]
    assert all(f.q_s <= 1 and f.q_v <= 2 for f in out)
    return out


def random_formula(rng: random.Random, depth: int = 5, q_s: int = 1, q_v: int = 2,
                   free: tuple = ()) -> Formula:
    """Random formula with at most ``q_s`` set and ``q_v`` vertex quantifiers."""
    budget = {"s": q_s, "v": q_v}
    names = iter(f"v{i}" for i in range(100))
    snames = iter(f"S{i}" for i in range(100))

    def atom(vs, ss):
        if not vs:
            return Const(rng.random() < 0.5)
        x, y = rng.choice(vs), rng.choice(vs)
        kind = rng.randrange(3 if ss else 2)
        if kind == 0:
            return Adj(x, y)
        if kind == 1:
            return Eq(x, y)
        return In(x, rng.choice(ss))

    def gen(d, vs, ss):
        if d <= 1:
            return atom(vs, ss)
        roll = rng.random()
        if roll < 0.35 and (budget["v"] or budget["s"]):
            if budget["s"] and (not budget["v"] or rng.random() < 0.3):
                budget["s"] -= 1
                var = next(snames)
                return Quant(rng.choice(["existsS", "forallS"]), var, gen(d - 1, vs, ss + [var]))
            budget["v"] -= 1
            var = next(names)
            return Quant(rng.choice(["exists", "forall"]), var, gen(d - 1, vs + [var], ss))
        if roll < 0.5:
            return Not(gen(d - 1, vs, ss))
        if roll < 0.9:
            cls = rng.choice([And, Or])
            return cls((gen(d - 1, vs, ss), gen(d - 1, vs, ss)))
        cls = rng.choice([Implies, Iff])
        return cls(gen(d - 1, vs, ss), gen(d - 1, vs, ss))

    root = gen(depth, [], list(free))
    return Formula(root, tuple(free))


def graph_pool(seed: int = 7) -> list[Graph]:
    """Twenty graphs with at most ten vertices."""
    rng = random.Random(seed)
    pool = [
        fam.star(4), fam.cycle(4), fam.path(5), fam.complete(4), fam.cycle(5),
        fam.complete_multipartite(2, 3), fam.empty(3), fam.petersen(),
        Graph(6, [(0, 1), (2, 3), (4, 5)]), fam.complete_multipartite(1, 2, 2),
    ]
    while len(pool) < 15:
        pool.append(fam.twin_structured(rng.randint(1, 3),
                                        [rng.randint(1, 3) for _ in range(rng.randint(1, 4))],
                                        rng))
    while len(pool) < 20:
        pool.append(fam.gnp(rng.randint(5, 9), rng.choice([0.2, 0.5, 0.8]), rng))
    assert all(g.n <= 10 for g in pool)
    return pool


def _is_module(masks, s: int, m: int) -> bool:
    for v in range(len(masks)):
        if (s >> v) & 1 and not (m >> v) & 1:
            row = masks[v] & m
            if row not in (0, m):
                return False
    return True


def min_width_oracle(g: Graph) -> int:
    """Minimum width over all substitution expressions for ``g``, by exhaustive
    search over partitions of each vertex subset into modules."""
    masks = g.masks
    memo: dict[int, int] = {}

    def best(s: int) -> int:
        if s & (s - 1) == 0:
            return 0
        if s in memo:
            return memo[s]
        members = [v for v in range(g.n) if (s >> v) & 1]
        modules = []
        for sub in range(1, 1 << len(members)):
            m = sum(1 << members[i] for i in range(len(members)) if (sub >> i) & 1)
            if m != s and _is_module(masks, s, m):
                modules.append(m)
        out = len(members)

        def split(rest, parts, worst):
            nonlocal out
            if max(worst, parts) >= out:
                return
            if rest == 0:
                out = max(worst, parts)
                return
            low = rest & -rest
            for m in modules:
                if m & low and m & rest == m:
                    split(rest & ~m, parts + 1, max(worst, best(m)))

        split(s, 0, 0)
        memo[s] = out
        return out

    return best((1 << g.n) - 1)
