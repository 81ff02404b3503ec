import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from fairvd import families as fam
from fairvd.errors import InvalidInputError
from fairvd.graph import LabeledGraph, is_vertex_cover
from fairvd.params import (is_twin_edge, min_twin_cover, min_vertex_cover, neighborhood_diversity,
                           twin_classes, twin_cover_from_set)


def brute_twin_cover_size(g):
    for size in range(g.n + 1):
        for s in itertools.combinations(range(g.n), size):
            try:
                twin_cover_from_set(g, s)
            except InvalidInputError:
                continue
            return size
    raise AssertionError("the full vertex set is always a twin cover")


def brute_vc_size(g):
    for size in range(g.n + 1):
        for s in itertools.combinations(range(g.n), size):
            if is_vertex_cover(g, s):
                return size


def test_twin_edge():
    g = fam.complete(3)
    assert is_twin_edge(g, 0, 1)
    assert not is_twin_edge(fam.path(3), 0, 1)
    with pytest.raises(InvalidInputError):
        is_twin_edge(fam.path(3), 0, 2)


def test_clique_has_empty_twin_cover():
    tc = min_twin_cover(fam.complete(5))
    assert tc.k == 0
    assert [c.vertices for c in tc.cliques] == [(0, 1, 2, 3, 4)]


def test_star_cover_sets():
    tc = min_twin_cover(fam.star(3))
    assert tc.cover == {0}
    assert all(c.cover_set == {0} for c in tc.cliques)
    assert len(tc.cliques) == 3


def test_petersen_twin_cover():
    assert min_twin_cover(fam.petersen()).k == 6


def test_budget():
    assert min_twin_cover(fam.petersen(), budget=5) is None
    with pytest.raises(InvalidInputError):
        min_twin_cover(fam.path(3), budget=-1)


def test_cycle4_twin_classes_are_singletons():
    # opposite vertices of C4 share open but not closed neighbourhoods
    assert twin_classes(fam.cycle(4)) == [(0,), (1,), (2,), (3,)]
    assert neighborhood_diversity(fam.cycle(4))[0] == 2


def test_twin_classes_respect_labels():
    lg = LabeledGraph(fam.complete(3), {"A": {0}})
    assert twin_classes(lg) == [(0,), (1, 2)]


def test_neighborhood_diversity_multipartite():
    assert neighborhood_diversity(fam.complete_multipartite(2, 3, 1))[0] == 3


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_min_twin_cover_is_minimum(seed):
    rng = random.Random(seed)
    g = fam.gnp(rng.randint(1, 9), rng.random(), rng)
    tc = min_twin_cover(g)
    assert tc.k == brute_twin_cover_size(g)
    covered = set(tc.cover)
    for c in tc.cliques:
        covered.update(c.vertices)
        for u, v in itertools.combinations(c.vertices, 2):
            assert g.has_edge(u, v)
        for v in c.vertices:
            assert g.neighbors(v) & tc.cover == c.cover_set
    assert covered == set(range(g.n))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_min_vertex_cover_is_minimum(seed):
    rng = random.Random(seed)
    g = fam.gnp(rng.randint(1, 10), rng.random(), rng)
    vc = min_vertex_cover(g)
    assert is_vertex_cover(g, vc)
    assert len(vc) == brute_vc_size(g)
