import random

import pytest
from hypothesis import given, settings, strategies as st

from fairvd import families as fam
from fairvd.errors import (FormulaSyntaxError, InvalidInputError, ResourceLimitError,
                           UnboundVariableError)
from fairvd.formula import (Evaluator, Formula, Not, atom_bound, count_quantifiers, evaluate,
                            format_formula_file, parse)
from fairvd.graph import Graph, LabeledGraph, bits, mask_of

from pools import FORMULA_TEXTS, VC, random_formula

BIPARTITE = "(existsS Y (forall x (forall y (implies (adj x y) (iff (in x Y) (not (in y Y)))))))"


def relabel(g, perm):
    return Graph(g.n, [(perm[u], perm[v]) for u, v in g.edges])


def test_vertex_cover_formula():
    f = parse(VC, ["X"])
    g = fam.cycle(4)
    assert evaluate(g, f, {"X": {0, 2}})
    assert not evaluate(g, f, {"X": {0, 1}})


@pytest.mark.parametrize("g,expected", [
    (fam.cycle(4), True), (fam.cycle(5), False), (fam.petersen(), False),
    (fam.empty(0), True), (fam.complete_multipartite(2, 3), True),
])
def test_bipartite_sentence(g, expected):
    assert evaluate(g, parse(BIPARTITE)) is expected


def test_quantifier_counts():
    f = parse(FORMULA_TEXTS["extends_independent"], ["X"])
    assert count_quantifiers(f) == (1, 2)
    assert (f.q_s, f.q_v) == (1, 2)


def test_header_supplies_free_variables():
    f = parse("free X Y\n(exists x (and (in x X) (in x Y)))")
    assert f.free == ("X", "Y")
    assert parse(format_formula_file(f)) == f


def test_header_conflict():
    with pytest.raises(InvalidInputError):
        parse("free X\n(exists x (in x X))", ["Y"])


@pytest.mark.parametrize("text,line,col", [
    ("(exists x", 1, 1),
    ("(exists x (adj x x)))", 1, 21),
    ("(forall x\n  (frob x))", 2, 3),
    ("(and)", 1, 1),
    ("(not true true)", 1, 1),
])
def test_syntax_error_positions(text, line, col):
    with pytest.raises(FormulaSyntaxError) as err:
        parse(text)
    assert (err.value.line, err.value.column) == (line, col)


def test_unbound_and_sort_errors():
    with pytest.raises(UnboundVariableError):
        parse("(exists x (adj x y))")
    with pytest.raises(FormulaSyntaxError):
        parse("(exists x (in x x))")
    with pytest.raises(FormulaSyntaxError):
        parse("(exists and true)")


def test_missing_interpretation():
    with pytest.raises(InvalidInputError):
        evaluate(fam.path(2), parse(VC, ["X"]))


def test_labels():
    lg = LabeledGraph(fam.path(3), {"R": {1}})
    assert evaluate(lg, parse("(exists x (and (label R x) (adj x x)))")) is False
    assert evaluate(lg, parse("(forall x (implies (label R x) (exists y (adj x y))))"))


def test_atom_bound():
    f = parse(VC, ["X"])
    assert atom_bound(f, 5) == 25 * 3
    assert atom_bound(parse(BIPARTITE), 3) == 8 * 9 * 3


def test_budget_forces_closure_route_and_raises():
    f = parse(BIPARTITE)
    g = fam.cycle(7)
    ev = Evaluator(g, f, budget=100)
    assert ev.method == "closure"
    with pytest.raises(ResourceLimitError):
        ev()
    assert Evaluator(g, f).method == "codegen"


def test_shadowing():
    f = parse("(exists x (and (adj x x) (exists x (= x x))))")
    assert evaluate(fam.path(3), f) is False
    f = parse("(exists x (exists x (forall y (or (= x y) (adj x y)))))")
    assert evaluate(fam.star(3), f, method="closure") is True
    assert evaluate(fam.star(3), f, method="codegen") is True


@st.composite
def graph_and_formula(draw):
    seed = draw(st.integers(0, 10 ** 6))
    rng = random.Random(seed)
    n = draw(st.integers(1, 6))
    g = fam.gnp(n, rng.random(), rng)
    f = random_formula(rng, depth=5, q_s=1, q_v=2, free=("X",))
    w = draw(st.integers(0, (1 << n) - 1))
    return g, f, w


@settings(max_examples=200, deadline=None)
@given(graph_and_formula())
def test_codegen_matches_closure(case):
    g, f, w = case
    a = Evaluator(g, f, method="codegen")(w)
    b = Evaluator(g, f, method="closure")(w)
    assert a == b


@settings(max_examples=100, deadline=None)
@given(graph_and_formula(), st.randoms(use_true_random=False))
def test_isomorphism_invariance(case, rnd):
    g, f, w = case
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = relabel(g, perm)
    wh = mask_of(perm[v] for v in bits(w))
    assert Evaluator(g, f)(w) == Evaluator(h, f)(wh)


@settings(max_examples=100, deadline=None)
@given(graph_and_formula())
def test_negation(case):
    g, f, w = case
    neg = Formula(Not(f.root), f.free)
    assert Evaluator(g, neg)(w) != Evaluator(g, f)(w)


@settings(max_examples=100, deadline=None)
@given(graph_and_formula())
def test_text_round_trip(case):
    _, f, _ = case
    assert parse(f.to_text(), f.free) == f


def test_de_morgan():
    g = fam.petersen()
    a = parse("(not (exists x (forall y (not (adj x y)))))")
    b = parse("(forall x (exists y (adj x y)))")
    assert evaluate(g, a) == evaluate(g, b) is True
