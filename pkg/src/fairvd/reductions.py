"""Instance generators for two hardness constructions.

* Multicolored clique -> Fair Vertex Cover, on graphs that become forests of
  shallow guard-rooted trees once a small modulator is removed.
* Unary bin packing -> multi-set fair evaluation of a first-order formula on
  disjoint cliques plus a universal vertex.

Each generator comes with a brute-force or witness-translation check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidInputError, ResourceLimitError
from .formula import Evaluator, Formula, parse
from .graph import Graph, bits, components, fair_cost, is_vertex_cover


# --- multicolored clique -------------------------------------------------------

@dataclass(frozen=True)
class MccInstance:
    """``l`` colour classes of ``n`` vertices each (numbered ``1..n``) and,
    for every pair ``a < b``, the list of edges ``(i, j)`` between vertex
    ``i`` of class ``a`` and vertex ``j`` of class ``b``.

    All pairs must carry the same number ``m`` of edges.  Classes with fewer
    real vertices are padded by declaring a larger ``n``: the extra vertices
    are simply isolated.
    """

    l: int
    n: int
    edges: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.l < 2 or self.n < 1:
            raise InvalidInputError("need l >= 2 classes of n >= 1 vertices")
        norm = {}
        for (a, b), es in self.edges.items():
            if not (1 <= a < b <= self.l):
                raise InvalidInputError(f"bad class pair {(a, b)}")
            es = sorted(set(es))
            for i, j in es:
                if not (1 <= i <= self.n and 1 <= j <= self.n):
                    raise InvalidInputError(f"edge ({a},{i})-({b},{j}) out of range")
            norm[(a, b)] = es
        for pair in self.pairs():
            norm.setdefault(pair, [])
        sizes = {len(es) for es in norm.values()}
        if len(sizes) > 1:
            raise InvalidInputError(f"pairs carry different edge counts {sorted(sizes)}")
        object.__setattr__(self, "edges", dict(sorted(norm.items())))

    @property
    def m(self) -> int:
        return len(next(iter(self.edges.values())))

    def pairs(self):
        return list(itertools.combinations(range(1, self.l + 1), 2))

    def is_clique(self, choice) -> bool:
        choice = list(choice)
        if len(choice) != self.l:
            return False
        return all((choice[a - 1], choice[b - 1]) in set(self.edges[(a, b)])
                   for a, b in self.pairs())

    def cliques(self):
        """All multicolored cliques as tuples of per-class vertex numbers."""
        return [c for c in itertools.product(range(1, self.n + 1), repeat=self.l)
                if self.is_clique(c)]


def parse_mcc(text: str) -> MccInstance:
    """Lines ``l <count>``, ``n <count>``, ``edge <a> <i> <b> <j>``; ``#`` comments."""
    l = n = None
    edges: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        try:
            if parts[0] == "l" and len(parts) == 2:
                l = int(parts[1])
            elif parts[0] == "n" and len(parts) == 2:
                n = int(parts[1])
            elif parts[0] == "edge" and len(parts) == 5:
                a, i, b, j = map(int, parts[1:])
                if a > b:
                    a, i, b, j = b, j, a, i
                edges.setdefault((a, b), []).append((i, j))
            else:
                raise ValueError
        except ValueError:
            raise InvalidInputError(f"line {lineno}: cannot parse {raw.strip()!r}") from None
    if l is None or n is None:
        raise InvalidInputError("missing 'l' or 'n' line")
    return MccInstance(l, n, edges)


def format_mcc(inst: MccInstance) -> str:
    lines = [f"l {inst.l}", f"n {inst.n}"]
    for (a, b), es in inst.edges.items():
        lines += [f"edge {a} {i} {b} {j}" for i, j in es]
    return "\n".join(lines) + "\n"


@dataclass
class MccReduction:
    graph: Graph
    k: int
    roles: dict          # role name -> list of vertex ids
    modulator: int       # predicted modulator size
    check_budget: int

    def ids(self, role: str) -> list[int]:
        return self.roles[role]


def default_k(m: int, n: int) -> int:
    # an unselected edge choice vertex sees its guard and 2n enumeration vertices
    return max(m - 1, 2 * n + 1)


def tight_k(m: int, n: int) -> int:
    return max(m - 1, 2 * n)


class _Builder:
    def __init__(self):
        self.n = 0
        self.edges = []
        self.roles: dict[str, list[int]] = {}

    def new(self, role: str, count: int = 1) -> list[int]:
        ids = list(range(self.n, self.n + count))
        self.n += count
        self.roles.setdefault(role, []).extend(ids)
        return ids

    def join(self, u: int, vs) -> None:
        self.edges.extend((u, v) for v in vs)


def _vname(a):
    return f"V{a}"


def _ename(a, b):
    return f"E{a}-{b}"


def gen_fairvc_from_mcc(inst: MccInstance, k: int | None = None,
                        check_budget: int | None = None) -> MccReduction:
    """Fair Vertex Cover instance ``(H, k)`` with a fair-cost-``k`` cover iff
    ``inst`` has a multicolored clique.

    Ids are allocated in a fixed order: vertex gadgets by class, edge
    gadgets by pair, check vertices by ordered pair, then every pendant
    structure (leaves, budget-lowering middles) in the same order.
    """
    n, m, l = inst.n, inst.m, inst.l
    if k is None:
        k = default_k(m, n)
    if check_budget is None:
        check_budget = n
    b = _Builder()

    def gadget(name, z):
        guard = b.new(f"{name}.guard")[0]
        choices = b.new(f"{name}.choice", z)
        b.join(guard, choices)
        return guard, choices

    guards = []
    lower, upper = {}, {}
    for a in range(1, l + 1):
        name = _vname(a)
        guard, choices = gadget(name, n)
        guards.append((guard, n))
        lower[a], upper[a] = [], []
        for i, c in enumerate(choices, 1):
            lo = b.new(f"{name}.enum.{i}.lower", i)
            hi = b.new(f"{name}.enum.{i}.upper", n - i)
            b.join(c, lo + hi)
            lower[a] += lo
            upper[a] += hi
    e_lower, e_upper = {}, {}
    for a, bb in inst.pairs():
        name = _ename(a, bb)
        guard, choices = gadget(name, m)
        guards.append((guard, m))
        for side in (a, bb):
            e_lower[(a, bb, side)], e_upper[(a, bb, side)] = [], []
        for q, (c, (i, j)) in enumerate(zip(choices, inst.edges[(a, bb)]), 1):
            for side, num, tag in ((a, i, "a"), (bb, j, "b")):
                lo = b.new(f"{name}.enum.{q}.{tag}-lower", num)
                hi = b.new(f"{name}.enum.{q}.{tag}-upper", n - num)
                b.join(c, lo + hi)
                e_lower[(a, bb, side)] += lo
                e_upper[(a, bb, side)] += hi
    checks = []
    for a in range(1, l + 1):
        for bb in range(1, l + 1):
            if a == bb:
                continue
            pair = (min(a, bb), max(a, bb), a)
            c1 = b.new(f"check1.{a}-{bb}")[0]
            c2 = b.new(f"check2.{a}-{bb}")[0]
            b.join(c1, lower[a] + e_upper[pair])
            b.join(c2, upper[a] + e_lower[pair])
            checks += [c1, c2]

    def enforce(v):
        b.join(v, b.new("leaf", k + 1))

    def lower_budget(v, budget):
        for mid in b.new("middle", max(0, k - budget)):
            b.join(v, [mid])
            enforce(mid)

    for guard, z in guards:
        enforce(guard)
        lower_budget(guard, z - 1)
    for c in checks:
        enforce(c)
        lower_budget(c, check_budget)

    modulator = (2 * l * (l - 1) * (1 + max(0, k - check_budget))
                 + l * max(0, k - (n - 1))
                 + len(inst.pairs()) * max(0, k - (m - 1)))
    return MccReduction(Graph(b.n, b.edges), k, b.roles, modulator, check_budget)


def translate_clique_to_cover(inst: MccInstance, clique, red: MccReduction) -> frozenset[int]:
    """Cover of ``red.graph`` built from a multicolored clique (one vertex
    number per class)."""
    clique = list(clique)
    if not inst.is_clique(clique):
        raise InvalidInputError(f"{clique} is not a multicolored clique")
    roles = red.roles
    cover = set()
    for role in roles:
        if role.endswith(".guard") or role.startswith("check") or role == "middle":
            cover.update(roles[role])
    for a in range(1, inst.l + 1):
        name = _vname(a)
        pick = clique[a - 1]
        choices = roles[f"{name}.choice"]
        cover.update(c for i, c in enumerate(choices, 1) if i != pick)
        cover.update(roles[f"{name}.enum.{pick}.lower"])
        cover.update(roles.get(f"{name}.enum.{pick}.upper", []))
    for a, bb in inst.pairs():
        name = _ename(a, bb)
        q = inst.edges[(a, bb)].index((clique[a - 1], clique[bb - 1])) + 1
        choices = roles[f"{name}.choice"]
        cover.update(c for i, c in enumerate(choices, 1) if i != q)
        for part in ("a-lower", "a-upper", "b-lower", "b-upper"):
            cover.update(roles.get(f"{name}.enum.{q}.{part}", []))
    return frozenset(cover)


def modulator_of(red: MccReduction) -> list[int]:
    return sorted(v for role, ids in red.roles.items()
                  if role.startswith("check") or role == "middle" for v in ids)


def check_structure(red: MccReduction) -> list[str]:
    """Problems found after deleting the modulator; empty if every component
    is a single vertex or a tree of depth at most 3 around exactly one guard."""
    g = red.graph
    mod = set(modulator_of(red))
    problems = []
    if len(mod) != red.modulator:
        problems.append(f"modulator has {len(mod)} vertices, predicted {red.modulator}")
    guards = {v for role, ids in red.roles.items() if role.endswith(".guard") for v in ids}
    within = ((1 << g.n) - 1) & ~sum(1 << v for v in mod)
    masks = g.masks
    for comp in components(g, within):
        if len(comp) == 1:
            continue
        roots = [v for v in comp if v in guards]
        if len(roots) != 1:
            problems.append(f"component at {comp[0]} has {len(roots)} guards")
            continue
        cm = sum(1 << v for v in comp)
        edges = sum(len(bits(masks[v] & cm)) for v in comp) // 2
        if edges != len(comp) - 1:
            problems.append(f"component at {comp[0]} is not a tree")
            continue
        depth, frontier, seen = 0, [roots[0]], 1 << roots[0]
        while frontier:
            nxt = []
            for v in frontier:
                for u in bits(masks[v] & cm & ~seen):
                    seen |= 1 << u
                    nxt.append(u)
            if nxt:
                depth += 1
            frontier = nxt
        if depth > 3:
            problems.append(f"component at {comp[0]} has depth {depth}")
    return problems


def format_roles(red: MccReduction) -> str:
    lines = [f"param k {red.k}", f"param check_budget {red.check_budget}",
             f"param modulator {red.modulator}"]
    lines += [f"role {name} " + " ".join(map(str, ids))
              for name, ids in red.roles.items()]
    return "\n".join(lines) + "\n"


def parse_roles(text: str) -> tuple[dict, dict]:
    roles, params = {}, {}
    for raw in text.splitlines():
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "role" and len(parts) >= 2:
            roles[parts[1]] = [int(x) for x in parts[2:]]
        elif parts[0] == "param" and len(parts) == 3:
            params[parts[1]] = int(parts[2])
        else:
            raise InvalidInputError(f"cannot parse map line {raw!r}")
    return roles, params


# --- unary bin packing ----------------------------------------------------------

@dataclass(frozen=True)
class BinPackingInstance:
    bins: int
    capacity: int
    sizes: tuple[int, ...]

    def __post_init__(self):
        if self.bins < 1 or self.capacity < 1:
            raise InvalidInputError("need at least one bin and positive capacity")
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise InvalidInputError("need at least one item, all sizes >= 1")
        object.__setattr__(self, "sizes", tuple(self.sizes))

    def feasible(self) -> bool:
        """Direct check over all item-to-bin maps."""
        for assign in itertools.product(range(self.bins), repeat=len(self.sizes)):
            load = [0] * self.bins
            for s, j in zip(self.sizes, assign):
                load[j] += s
            if max(load) <= self.capacity:
                return True
        return False


def parse_binpacking(text: str) -> BinPackingInstance:
    """Lines ``bins <l>``, ``capacity <B>``, ``sizes <s1> <s2> ...``."""
    vals: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        try:
            if parts[0] in ("bins", "capacity") and len(parts) == 2:
                vals[parts[0]] = int(parts[1])
            elif parts[0] == "sizes" and len(parts) >= 2:
                vals["sizes"] = tuple(int(x) for x in parts[1:])
            else:
                raise ValueError
        except ValueError:
            raise InvalidInputError(f"line {lineno}: cannot parse {raw.strip()!r}") from None
    missing = {"bins", "capacity", "sizes"} - set(vals)
    if missing:
        raise InvalidInputError(f"missing {sorted(missing)}")
    return BinPackingInstance(vals["bins"], vals["capacity"], vals["sizes"])


def format_binpacking(inst: BinPackingInstance) -> str:
    return (f"bins {inst.bins}\ncapacity {inst.capacity}\n"
            f"sizes {' '.join(map(str, inst.sizes))}\n")


def _disj(parts, op):
    return parts[0] if len(parts) == 1 else f"({op} {' '.join(parts)})"


def binpacking_formula_text(l: int) -> str:
    xs = [f"X{j}" for j in range(1, l + 1)]
    univ = "(forall w (implies (not (= w u)) (adj w u)))"
    cover = ("(forall v (implies (not (= v u)) "
             + _disj([f"(in v {x})" for x in xs], "or") + "))")
    agree = _disj([f"(iff (in v {x}) (in w {x}))" for x in xs], "and")
    same = ("(forall v (forall w (implies (and (not (= v u)) (not (= w u)) (adj v w)) "
            + agree + ")))")
    return f"free {' '.join(xs)}\n(exists u (and {univ} {cover} {same}))\n"


def gen_lfair_from_binpacking(inst: BinPackingInstance):
    """``(G, formula text, l, k)``: cliques of the item sizes plus a universal
    vertex (the last id), and a formula whose ``l`` free sets pack the items."""
    edges, v = [], 0
    for s in inst.sizes:
        edges += list(itertools.combinations(range(v, v + s), 2))
        v += s
    u = v
    edges += [(x, u) for x in range(u)]
    return Graph(u + 1, edges), binpacking_formula_text(inst.bins), inst.bins, inst.capacity


DEFAULT_LFAIR_CAP = 20


def _cheap_sets(g: Graph, k: int) -> list[int]:
    """All subsets of fair cost at most ``k`` as bitmasks."""
    subsets = np.arange(1 << g.n, dtype=np.int64)
    ok = np.ones(len(subsets), dtype=bool)
    for mask in g.masks:
        ok &= np.bitwise_count(subsets & mask) <= k
    return [int(s) for s in subsets[ok]]


def lfair_brute_oracle(g: Graph, f: Formula, l: int, k: int,
                       cap: int = DEFAULT_LFAIR_CAP):
    """Sets ``W_1..W_l`` with ``g |= f(W_1..W_l)`` and every per-set fair cost
    at most ``k``, found by enumeration; ``None`` if there are none."""
    if len(f.free) != l:
        raise InvalidInputError(f"formula has {len(f.free)} free sets, expected {l}")
    if l * g.n > cap:
        raise ResourceLimitError(f"l*n = {l * g.n} exceeds enumeration cap {cap}")
    ev = Evaluator(g, f)
    if l == 0:
        return () if ev() else None
    cheap = _cheap_sets(g, k)
    for combo in itertools.product(cheap, repeat=l):
        if ev(*combo):
            ws = tuple(frozenset(bits(s)) for s in combo)
            assert all(fair_cost(g, w) <= k for w in ws)
            return ws
    return None


def write_instance(prefix: str | Path, g: Graph, formula_text: str | None = None,
                   map_text: str | None = None) -> list[Path]:
    from .graph import write_graph
    prefix = Path(prefix)
    out = [prefix.with_name(prefix.name + ".g")]
    write_graph(out[0], g)
    if formula_text is not None:
        out.append(prefix.with_name(prefix.name + ".f"))
        out[-1].write_text(formula_text)
    if map_text is not None:
        out.append(prefix.with_name(prefix.name + ".map"))
        out[-1].write_text(map_text)
    return out


def verify_cover(g: Graph, cover, k: int) -> bool:
    return is_vertex_cover(g, cover) and fair_cost(g, cover) <= k


def binpacking_formula(l: int) -> Formula:
    return parse(binpacking_formula_text(l))
