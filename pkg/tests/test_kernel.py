import random

import pytest
from hypothesis import given, settings, strategies as st

from fairvd import families as fam
from fairvd.errors import InvalidInputError, InvalidStateError
from fairvd.formula import evaluate, parse
from fairvd.graph import LabeledGraph, disjoint_union
from fairvd.kernel import (CLIQUE_RULE, TWIN_RULE, clique_alpha, kernelize, model_check,
                           kernel_size_bound, reduce_cliques, reduce_twins, twin_threshold)
from fairvd.params import min_twin_cover

from pools import random_formula, sentence_pool

HAS_EDGE = parse("(exists x (exists y (adj x y)))")


def test_thresholds():
    assert twin_threshold(1, 2) == 4
    assert clique_alpha(3, 1, 2) == 24
    assert kernel_size_bound(0, 0, 1) == 2 * 2 ** 0


def test_clique_keeps_threshold_many():
    rep = reduce_twins(LabeledGraph(fam.complete(10)), 1, 2)
    assert rep.keep == [0, 1, 2, 3]
    assert {tag for _, tag in rep.removed} == {TWIN_RULE}
    assert [v for v, _ in rep.removed] == list(range(4, 10))


def test_labels_split_twin_classes():
    lg = LabeledGraph(fam.complete(6), {"R": {0, 1, 2}})
    rep = reduce_twins(lg, 0, 1)
    assert rep.keep == [0, 3]
    assert rep.reduced.labels["R"] == {0}


def test_pendants_reduced_to_alpha():
    # leaves are not twins; they are size-1 cliques on cover {0}, alpha = 3
    rep = kernelize(LabeledGraph(fam.star(10)), 0, 2)
    assert rep.keep == [0, 1, 2, 3]


def test_clique_rule_on_disjoint_edges():
    g, _ = disjoint_union([fam.path(2)] * 50)
    truth, rep = model_check(g, HAS_EDGE)
    assert truth
    assert rep.reduced.n == 6
    assert {tag for _, tag in rep.removed} == {CLIQUE_RULE}
    assert rep.bound == kernel_size_bound(0, 0, 2)


def test_large_clique():
    truth, rep = model_check(fam.complete(100), HAS_EDGE)
    assert truth and rep.reduced.n == 2


def test_unsatisfiable_sentence():
    truth, _ = model_check(fam.petersen(), parse("(exists x (not (= x x)))"))
    assert truth is False


def test_model_check_rejects_free_variables():
    with pytest.raises(InvalidInputError):
        model_check(fam.path(3), parse("(exists x (in x X))", ["X"]))


def test_explicit_r_too_small():
    g = fam.complete(3)
    with pytest.raises(InvalidStateError):
        reduce_cliques(LabeledGraph(g), min_twin_cover(g), 0, 1, r=2)


def test_exempt_empty_cover():
    g, _ = disjoint_union([fam.path(2)] * 10)
    lg = LabeledGraph(g)
    cover = min_twin_cover(g)
    assert reduce_cliques(lg, cover, 0, 2, exempt_empty_cover=True).removed == []
    assert len(reduce_cliques(lg, cover, 0, 2).removed) == 14
    assert kernelize(lg, 0, 2, exempt_empty_cover=True).bound is None


def test_dump_format():
    rep = kernelize(LabeledGraph(fam.complete(4)), 0, 1)
    lines = rep.dump().splitlines()
    assert lines[0] == "removed 1 rule=twin-rule"
    assert lines[-1].startswith("kernel n=1 bound=")


def test_keep_maps_into_input():
    g = fam.complete_multipartite(1, 6, 6)
    rep = kernelize(LabeledGraph(g), 0, 1)
    for u, v in rep.reduced.graph.edges:
        assert g.has_edge(rep.keep[u], rep.keep[v])


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_truth_preserved_and_idempotent(seed):
    rng = random.Random(seed)
    k = rng.randint(0, 2)
    g = fam.twin_structured(k, [rng.randint(1, 3) for _ in range(rng.randint(1, 5))], rng)
    if g.n > 11:
        return
    f = random_formula(rng, depth=5, q_s=rng.randint(0, 1), q_v=rng.randint(1, 2))
    truth, rep = model_check(g, f)
    assert truth == evaluate(g, f)
    again = kernelize(rep.reduced, f.q_s, f.q_v)
    assert again.removed == []
    assert rep.reduced.n <= kernel_size_bound(min_twin_cover(g).k, f.q_s, f.q_v)


@pytest.mark.parametrize("index", range(len(sentence_pool())))
def test_sentence_pool_on_families(index):
    f = sentence_pool()[index]
    for g in [fam.complete_multipartite(3, 3), fam.star(7), fam.complete(7),
              disjoint_union([fam.complete(2)] * 5)[0]]:
        assert model_check(g, f)[0] == evaluate(g, f)
