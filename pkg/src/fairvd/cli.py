"""Command-line front end.

Exit codes: 0 success, 1 negative answer (no / false / unsat / disagreement),
2 bad input, 3 resource limit or internal check failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import faireval, fairvc, kernel, modec, params, reductions
from .errors import FairVDError, InvalidInputError, InvalidStateError, ResourceLimitError
from .formula import DEFAULT_ATOM_BUDGET, evaluate, read_formula
from .families import gnp
from .graph import fair_cost, is_vertex_cover, l_fair_cost, read_labeled_graph

OK, NO, INPUT_ERROR, RESOURCE_ERROR = 0, 1, 2, 3

COMMON_DEFAULTS = {"json": False, "atom_budget": DEFAULT_ATOM_BUDGET,
                   "brute_cap": fairvc.DEFAULT_BRUTE_CAP, "time_budget": 60.0, "seed": 0}


class _Out:
    """Collects text lines and the JSON record; prints one or the other."""

    def __init__(self, command: str, inputs: list[str], as_json: bool):
        self.lines: list[str] = []
        self.record = {"command": command, "input": inputs, "result": None, "cost": None,
                       "witness": None, "kernel": None, "timings": {}}
        self.as_json = as_json

    def line(self, text: str) -> None:
        self.lines.append(text)

    def witness(self, cost: int, w) -> None:
        w = sorted(w)
        self.record["cost"], self.record["witness"] = cost, w
        self.line(f"cost {cost}")
        self.line("cover" + "".join(f" {v}" for v in w))

    def flush(self) -> None:
        if self.as_json:
            print(json.dumps(self.record, sort_keys=True))
        else:
            print("\n".join(self.lines))


def _timed(out: _Out, name: str, fn, *args, **kw):
    t0 = time.perf_counter()
    try:
        return fn(*args, **kw)
    finally:
        out.record["timings"][name] = round(time.perf_counter() - t0, 6)


def _verify_cover(g, cover, bound) -> None:
    if not is_vertex_cover(g, cover) or fair_cost(g, cover) > bound:
        raise InvalidStateError("witness failed re-verification")


def cmd_params(a, out: _Out) -> int:
    g = read_labeled_graph(a.graph).graph
    tc = _timed(out, "twin_cover", params.min_twin_cover, g)
    nd, _ = params.neighborhood_diversity(g)
    tree = _timed(out, "decompose", modec.decompose, g) if g.n else None
    mw = modec.modular_width(tree) if tree else 0
    w = modec.width(tree) if tree else 0
    out.line(f"twin_cover {tc.k}")
    out.line("twin_cover_set" + "".join(f" {v}" for v in sorted(tc.cover)))
    out.line(f"neighborhood_diversity {nd}")
    out.line(f"modular_width {mw}")
    out.line(f"decomposition_width {w}")
    out.record["result"] = {"twin_cover": tc.k, "neighborhood_diversity": nd,
                            "modular_width": mw, "decomposition_width": w}
    return OK


def cmd_fairvc(a, out: _Out) -> int:
    g = read_labeled_graph(a.graph).graph
    if a.k is not None and a.k < 0:
        raise InvalidInputError("--k must be non-negative")
    if a.method == "bnb":
        if a.k is None:
            # optimisation by increasing k
            for k in range(g.max_degree() + 1):
                res = _timed(out, f"bnb_k{k}", fairvc.solve_bnb, g, k, a.time_budget)
                if res.outcome is fairvc.Outcome.UNKNOWN:
                    raise ResourceLimitError(f"time budget exhausted at k={k}")
                if res:
                    _verify_cover(g, res.cover, k)
                    out.record["result"] = "optimum"
                    out.witness(k, res.cover)
                    return OK
            raise InvalidStateError("no cover found up to the maximum degree")
        res = _timed(out, "bnb", fairvc.solve_bnb, g, a.k, a.time_budget)
        out.record["result"] = res.outcome.value
        out.line(res.outcome.value)
        if res.outcome is fairvc.Outcome.UNKNOWN:
            return RESOURCE_ERROR
        if not res:
            return NO
        _verify_cover(g, res.cover, a.k)
        out.witness(fair_cost(g, res.cover), res.cover)
        return OK
    if a.method == "dp":
        res = _timed(out, "dp", fairvc.solve_dp, g)
    else:
        res = _timed(out, "brute", fairvc.solve_brute, g, a.brute_cap)
    _verify_cover(g, res.cover, res.cost)
    if a.k is None:
        out.record["result"] = "optimum"
        out.witness(res.cost, res.cover)
        return OK
    yes = res.cost <= a.k
    out.record["result"] = "yes" if yes else "no"
    out.line("yes" if yes else "no")
    if yes:
        out.witness(res.cost, res.cover)
    return OK if yes else NO


def cmd_mc(a, out: _Out) -> int:
    lg = read_labeled_graph(a.graph)
    f = read_formula(a.sentence)
    truth, report = _timed(out, "model_check", kernel.model_check, lg, f, a.atom_budget)
    out.line("true" if truth else "false")
    out.lines += report.dump().splitlines()
    out.record["result"] = truth
    out.record["kernel"] = {"n": report.reduced.n, "bound": report.bound,
                            "removed": [[v, tag] for v, tag in report.removed]}
    return OK if truth else NO


def cmd_faireval(a, out: _Out) -> int:
    g = read_labeled_graph(a.graph).graph
    f = read_formula(a.formula)
    res = _timed(out, "fair_evaluate", faireval.fair_evaluate, g, f, budget=a.atom_budget)
    if res is None:
        out.record["result"] = "unsat"
        out.line("unsat")
        return NO
    if not evaluate(g, f, {f.free[0]: res.witness}) or fair_cost(g, res.witness) != res.cost:
        raise InvalidStateError("witness failed re-verification")
    out.record["result"] = "optimum"
    out.witness(res.cost, res.witness)
    return OK


def cmd_gen(a, out: _Out) -> int:
    text = Path(a.instance).read_text()
    if a.kind == "mcc":
        inst = reductions.parse_mcc(text)
        red = reductions.gen_fairvc_from_mcc(inst, k=a.k, check_budget=a.check_budget)
        paths = reductions.write_instance(a.output, red.graph, None,
                                          reductions.format_roles(red))
        out.record["result"] = {"n": red.graph.n, "m": red.graph.m, "k": red.k,
                                "modulator": red.modulator}
        out.line(f"instance n={red.graph.n} m={red.graph.m} k={red.k} modulator={red.modulator}")
    else:
        inst = reductions.parse_binpacking(text)
        g, ftext, l, k = reductions.gen_lfair_from_binpacking(inst)
        roles = [f"param l {l}", f"param k {k}", f"role universal {g.n - 1}"]
        v = 0
        for i, s in enumerate(inst.sizes, 1):
            roles.append(f"role item{i} " + " ".join(str(x) for x in range(v, v + s)))
            v += s
        paths = reductions.write_instance(a.output, g, ftext, "\n".join(roles) + "\n")
        out.record["result"] = {"n": g.n, "m": g.m, "l": l, "k": k}
        out.line(f"instance n={g.n} m={g.m} l={l} k={k}")
    for p in paths:
        out.line(f"wrote {p}")
    return OK


def cmd_oracle(a, out: _Out) -> int:
    g = read_labeled_graph(a.graph).graph
    f = read_formula(a.formula)
    ws = _timed(out, "lfair", reductions.lfair_brute_oracle, g, f, a.l, a.k, a.cap)
    if ws is None:
        out.record["result"] = "no"
        out.line("no")
        return NO
    itp = dict(zip(f.free, ws))
    if not evaluate(g, f, itp) or (ws and l_fair_cost(g, ws) > a.k):
        raise InvalidStateError("witness failed re-verification")
    out.record["result"] = "yes"
    out.record["witness"] = [sorted(w) for w in ws]
    out.record["cost"] = l_fair_cost(g, ws)
    out.line("yes")
    for name, w in itp.items():
        out.line(f"set {name}" + "".join(f" {v}" for v in sorted(w)))
    return OK


def _xcheck_one(g, a, out: _Out, tag: str = ""):
    dp = _timed(out, tag + "dp", fairvc.solve_dp, g)
    br = _timed(out, tag + "brute", fairvc.solve_brute, g, a.brute_cap)
    at = _timed(out, tag + "bnb", fairvc.solve_bnb, g, br.cost, a.time_budget)
    below = (_timed(out, tag + "bnb_below", fairvc.solve_bnb, g, br.cost - 1, a.time_budget)
             if br.cost > 0 else None)
    for res, bound in ((dp, dp.cost), (br, br.cost)):
        _verify_cover(g, res.cover, bound)
    bnb_ok = at.outcome is fairvc.Outcome.YES and (
        below is None or below.outcome is fairvc.Outcome.NO)
    bnb = f"{at.outcome.value}@{br.cost}" + (
        "" if below is None else f" {below.outcome.value}@{br.cost - 1}")
    return dp, br, bnb, dp.cost == br.cost and bnb_ok


def cmd_xcheck(a, out: _Out) -> int:
    if (a.graph is None) == (a.random is None):
        raise InvalidInputError("give either a graph file or --random COUNT")
    if a.graph is not None:
        g = read_labeled_graph(a.graph).graph
        dp, br, bnb, agree = _xcheck_one(g, a, out)
        out.line(f"dp {dp.cost}")
        out.line(f"brute {br.cost}")
        out.line(f"bnb {bnb}")
        out.line(f"agree {'true' if agree else 'false'}")
        out.record["result"] = agree
        out.record["cost"] = br.cost
        out.record["witness"] = sorted(br.cover)
        return OK if agree else NO
    if a.random < 1 or not 1 <= a.max_n <= a.brute_cap:
        raise InvalidInputError("--random must be positive and 1 <= --max-n <= --brute-cap")
    rng = random.Random(a.seed)
    rows = []
    for i in range(a.random):
        n = rng.randint(1, a.max_n)
        p = (0.2, 0.5, 0.8)[i % 3]
        g = gnp(n, p, rng)
        dp, br, bnb, agree = _xcheck_one(g, a, out, f"{i}.")
        out.line(f"graph {i} n {n} p {p} dp {dp.cost} brute {br.cost} bnb {bnb} "
                 f"agree {'true' if agree else 'false'}")
        rows.append({"n": n, "p": p, "edges": sorted(g.edges), "dp": dp.cost,
                     "brute": br.cost, "agree": agree})
    ok = all(r["agree"] for r in rows)
    out.line(f"agree {'true' if ok else 'false'}")
    out.record["result"] = {"agree": ok, "graphs": rows}
    return OK if ok else NO


def cmd_bench(a, out: _Out) -> int:
    from . import report
    rows = _timed(out, "bench", report.run_scaling, range(a.min_parts, a.max_parts + 1),
                  a.part_size, a.repeats)
    prefix = Path(a.output)
    csv_path = report.write_csv(rows, prefix.with_name(prefix.name + ".csv"))
    out.line(f"wrote {csv_path}")
    if not a.no_plot:
        png = report.plot_scaling(rows, prefix.with_name(prefix.name + ".png"))
        out.line(f"wrote {png}")
    for row in rows:
        out.line(f"width {row['width']} n {row['n']} seconds {row['seconds']:.6f} "
                 f"ratio {row['ratio']:.4f}")
    out.record["result"] = [{k: row[k] for k in report.FIELDS} for row in rows]
    return OK


def build_parser() -> argparse.ArgumentParser:
    # accepted before or after the subcommand; defaults are filled in by
    # main() so a subparser never overwrites a value given up front
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--json", action="store_true",
                        help="emit one JSON object instead of text")
    common.add_argument("--atom-budget", type=int)
    common.add_argument("--brute-cap", type=int)
    common.add_argument("--time-budget", type=float, help="seconds for branch and bound")
    common.add_argument("--seed", type=int)

    p = argparse.ArgumentParser(prog="fairvd", parents=[common],
                                description="Fair vertex-deletion toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("params", parents=[common], help="structural parameters")
    s.add_argument("graph")
    s.set_defaults(fn=cmd_params)

    s = sub.add_parser("fairvc", parents=[common], help="fair vertex cover")
    s.add_argument("graph")
    s.add_argument("--method", choices=("dp", "brute", "bnb"), default="dp")
    s.add_argument("--k", type=int, default=None, help="decide fair cost <= K")
    s.set_defaults(fn=cmd_fairvc)

    s = sub.add_parser("mc", parents=[common], help="model check a sentence via its kernel")
    s.add_argument("graph")
    s.add_argument("sentence")
    s.set_defaults(fn=cmd_mc)

    s = sub.add_parser("faireval", parents=[common], help="minimum fair cost of f(X)")
    s.add_argument("graph")
    s.add_argument("formula")
    s.set_defaults(fn=cmd_faireval)

    s = sub.add_parser("gen", parents=[common], help="generate reduction instances")
    s.add_argument("kind", choices=("mcc", "binpack"))
    s.add_argument("instance", help="instance description file")
    s.add_argument("-o", "--output", required=True, help="output prefix")
    s.add_argument("--k", type=int, default=None, help="override the budget (mcc)")
    s.add_argument("--check-budget", type=int, default=None, help="check vertex budget (mcc)")
    s.set_defaults(fn=cmd_gen)

    s = sub.add_parser("oracle", parents=[common], help="brute-force oracles")
    s.add_argument("kind", choices=("lfair",))
    s.add_argument("graph")
    s.add_argument("formula")
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--cap", type=int, default=reductions.DEFAULT_LFAIR_CAP)
    s.set_defaults(fn=cmd_oracle)

    s = sub.add_parser("xcheck", parents=[common], help="dp vs brute vs bnb")
    s.add_argument("graph", nargs="?")
    s.add_argument("--random", type=int, default=None, metavar="COUNT",
                   help="check COUNT random graphs drawn from --seed instead")
    s.add_argument("--max-n", type=int, default=10)
    s.set_defaults(fn=cmd_xcheck)

    s = sub.add_parser("bench", parents=[common], help="DP scaling on complete multipartite graphs")
    s.add_argument("-o", "--output", required=True, help="output prefix for .csv and .png")
    s.add_argument("--min-parts", type=int, default=2)
    s.add_argument("--max-parts", type=int, default=9)
    s.add_argument("--part-size", type=int, default=2)
    s.add_argument("--repeats", type=int, default=5)
    s.add_argument("--no-plot", action="store_true")
    s.set_defaults(fn=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    for name, value in COMMON_DEFAULTS.items():
        if not hasattr(a, name):
            setattr(a, name, value)
    for name in ("atom_budget", "brute_cap", "time_budget"):
        if getattr(a, name) <= 0:
            print(f"error: --{name.replace('_', '-')} must be positive", file=sys.stderr)
            return INPUT_ERROR
    inputs = [str(getattr(a, k)) for k in ("graph", "sentence", "formula", "instance")
              if getattr(a, k, None) is not None]
    out = _Out(a.command, inputs, a.json)
    try:
        code = a.fn(a, out)
    except (InvalidInputError, OSError, UnicodeDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return RESOURCE_ERROR
    except (InvalidStateError, FairVDError) as e:
        print(f"internal check failed: {e}", file=sys.stderr)
        return RESOURCE_ERROR
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
