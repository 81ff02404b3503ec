import json
import subprocess
import sys

import pytest

from fairvd import families as fam
from fairvd.cli import main
from fairvd.graph import format_graph, parse_graph
from fairvd.reductions import parse_roles

from pools import VC


@pytest.fixture
def files(tmp_path):
    def put(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return {
        "star": put("star.g", format_graph(fam.star(4))),
        "c4": put("c4.g", format_graph(fam.cycle(4))),
        "petersen": put("petersen.g", format_graph(fam.petersen())),
        "k100": put("k100.g", format_graph(fam.complete(100))),
        "vc": put("vc.f", f"free X\n{VC}\n"),
        "unsat": put("unsat.f", "free X\n(exists x (and (in x X) (not (in x X))))\n"),
        "has_edge": put("edge.f", "(exists x (exists y (adj x y)))\n"),
        "no_loop": put("loop.f", "(exists x (adj x x))\n"),
        "asym": put("asym.f", "(exists x (exists y (and (adj x y) (not (adj y x)))))\n"),
        "mcc": put("inst.mcc", "l 2\nn 2\nedge 1 2 2 1\n"),
        "bp": put("inst.bp", "bins 2\ncapacity 3\nsizes 1 2 3\n"),
        "bad": put("bad.g", "3 1\n0 9\n"),
        "dir": str(tmp_path),
    }


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.parametrize("method", ["dp", "brute", "bnb"])
def test_fairvc_methods(files, capsys, method):
    code, out = run(capsys, "fairvc", files["star"], "--method", method)
    assert code == 0
    assert out.splitlines() == ["cost 1", "cover 0"]


def test_fairvc_decision(files, capsys):
    assert run(capsys, "fairvc", files["c4"], "--method", "bnb", "--k", "1") == (1, "no\n")
    code, out = run(capsys, "fairvc", files["c4"], "--k", "2")
    assert code == 0 and out.startswith("yes\ncost 2\n")


def test_json_record(files, capsys):
    code, out = run(capsys, "--json", "fairvc", files["star"])
    rec = json.loads(out)
    assert code == 0
    assert rec["command"] == "fairvc" and rec["cost"] == 1 and rec["witness"] == [0]
    assert set(rec) == {"command", "input", "result", "cost", "witness", "kernel", "timings"}
    code, out2 = run(capsys, "fairvc", files["star"], "--json")
    assert json.loads(out2)["witness"] == [0]


def test_output_is_deterministic(files, capsys):
    outs = []
    for _ in range(2):
        _, out = run(capsys, "--json", "faireval", files["petersen"], files["vc"])
        rec = json.loads(out)
        rec.pop("timings")
        outs.append(rec)
    assert outs[0] == outs[1]


def test_mc(files, capsys):
    code, out = run(capsys, "mc", files["k100"], files["has_edge"])
    assert code == 0 and out.splitlines()[0] == "true"
    assert out.splitlines()[-1] == "kernel n=2 bound=12"
    code, out = run(capsys, "mc", files["c4"], files["no_loop"])
    assert code == 1 and out.startswith("false")


def test_faireval(files, capsys):
    assert run(capsys, "faireval", files["c4"], files["vc"])[0] == 0
    assert run(capsys, "faireval", files["c4"], files["unsat"]) == (1, "unsat\n")


def test_params(files, capsys):
    code, out = run(capsys, "params", files["petersen"])
    lines = dict(line.split(" ", 1) for line in out.splitlines())
    assert code == 0
    assert lines["twin_cover"] == "6"
    assert lines["neighborhood_diversity"] == "10"
    assert lines["modular_width"] == "10"


def test_xcheck(files, capsys):
    code, out = run(capsys, "xcheck", files["petersen"])
    assert code == 0 and "agree true" in out


def test_gen_mcc_round_trip(files, capsys):
    prefix = files["dir"] + "/red"
    code, _ = run(capsys, "gen", "mcc", files["mcc"], "-o", prefix)
    assert code == 0
    g = parse_graph(open(prefix + ".g").read()).graph
    roles, params = parse_roles(open(prefix + ".map").read())
    assert sorted(v for vs in roles.values() for v in vs) == list(range(g.n))
    code, out = run(capsys, "fairvc", prefix + ".g", "--method", "bnb", "--k", str(params["k"]))
    assert code == 0 and out.startswith("yes")


def test_gen_binpack_and_oracle(files, capsys):
    prefix = files["dir"] + "/bp"
    assert run(capsys, "gen", "binpack", files["bp"], "-o", prefix)[0] == 0
    code, out = run(capsys, "oracle", "lfair", prefix + ".g", prefix + ".f", "--l", "2", "--k", "3")
    assert code == 0 and out.startswith("yes\nset X1")
    code, out = run(capsys, "oracle", "lfair", prefix + ".g", prefix + ".f", "--l", "2", "--k", "2")
    assert (code, out) == (1, "no\n")


def test_oracle_cap_is_resource_error(files, capsys):
    prefix = files["dir"] + "/bp"
    run(capsys, "gen", "binpack", files["bp"], "-o", prefix)
    args = ["oracle", "lfair", prefix + ".g", prefix + ".f", "--l", "2", "--k", "3", "--cap", "5"]
    assert run(capsys, *args)[0] == 3


@pytest.mark.parametrize("argv", [
    ["fairvc", "/nonexistent.g"],
    ["fairvc", "BAD"],
    ["fairvc", "STAR", "--k", "-1"],
    ["fairvc", "STAR", "--method", "magic"],
    ["mc", "STAR", "VC"],
    ["--atom-budget", "0", "fairvc", "STAR"],
    ["nosuchcommand"],
])
def test_input_errors(files, capsys, argv):
    argv = [files["bad"] if a == "BAD" else files["star"] if a == "STAR"
            else files["vc"] if a == "VC" else a for a in argv]
    assert main(argv) == 2


def test_brute_cap_is_resource_error(files, capsys):
    assert main(["fairvc", files["petersen"], "--method", "brute", "--brute-cap", "5"]) == 3


def test_atom_budget_is_resource_error(files, capsys):
    assert main(["--atom-budget", "10", "mc", files["c4"], files["asym"]]) == 3
    assert main(["mc", files["c4"], files["asym"], "--atom-budget", "10"]) == 3
    assert main(["mc", files["c4"], files["asym"]]) == 1


def test_bench(files, capsys, tmp_path):
    code, out = run(capsys, "bench", "-o", str(tmp_path / "b"), "--max-parts", "4",
                    "--repeats", "1")
    assert code == 0
    assert (tmp_path / "b.csv").read_text().splitlines()[0] == \
        "parts,part_size,n,width,seconds,model,ratio"
    assert (tmp_path / "b.png").stat().st_size > 0


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "fairvd", "fairvc", files["star"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "cost 1\ncover 0\n"


def test_xcheck_random_batch_is_seeded(capsys):
    first = run(capsys, "xcheck", "--random", "6", "--max-n", "8", "--seed", "5")
    again = run(capsys, "--seed", "5", "xcheck", "--random", "6", "--max-n", "8")
    other = run(capsys, "xcheck", "--random", "6", "--max-n", "8", "--seed", "6")
    assert first == again
    assert first[0] == 0 and first[1].endswith("agree true\n")
    assert first[1] != other[1]
    assert len(first[1].splitlines()) == 7


def test_xcheck_needs_exactly_one_source(files):
    assert main(["xcheck"]) == 2
    assert main(["xcheck", files["star"], "--random", "2"]) == 2
