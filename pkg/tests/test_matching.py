import random
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from scipy.optimize import linprog

from specmatch.families import FamilyParams, construct_H
from specmatch.graph import (BudgetExceededError, Graph, complete, complete_bipartite, cycle,
                             empty, is_connected, path, petersen)
from specmatch.matching import (DeficiencyWitness, HalfIntegralMatching, NotBipartiteError,
                                bipartite_double_cover, bipartite_max_matching, check_witness,
                                deficiency_matching_number, deficiency_oracle,
                                fractional_matching_number, half_integral_certificate,
                                has_fractional_perfect_matching)

from conftest import graphs, random_graph


def lp_value(g):
    """Fractional matching number by linear programming (float oracle)."""
    edges = g.edges()
    if not edges:
        return 0.0
    a = np.zeros((g.n, len(edges)))
    for j, (u, v) in enumerate(edges):
        a[u, j] = a[v, j] = 1
    res = linprog(-np.ones(len(edges)), A_ub=a, b_ub=np.ones(g.n), bounds=(0, 1), method="highs")
    return -res.fun


def test_deficiency_examples():
    star = complete_bipartite(1, 3)
    w = deficiency_oracle(star)
    assert (w.members, w.deficiency) == ([0], 2)
    w = deficiency_oracle(cycle(5))
    assert (w.set_mask, w.deficiency) == (0, 0)
    w = deficiency_oracle(complete(1))
    assert (w.set_mask, w.isolated, w.deficiency) == (0, 1, 1)
    assert check_witness(star, deficiency_oracle(star))


def test_deficiency_tie_break_is_smallest_then_lexicographic():
    # P_4: no S scores above 0, so the empty set wins the tie
    w = deficiency_oracle(path(4))
    assert (w.set_mask, w.deficiency) == (0, 0)
    # P_5: both {1} and {3} give 0 but {1,3} gives 3 - 2 = 1
    w = deficiency_oracle(path(5))
    assert (w.members, w.deficiency) == ([1, 3], 1)
    # K_{2,4}: deleting the small side isolates all four others
    w = deficiency_oracle(complete_bipartite(2, 4))
    assert (w.members, w.deficiency) == ([0, 1], 2)


def test_deficiency_budget():
    with pytest.raises(BudgetExceededError):
        deficiency_oracle(empty(23))


def test_double_cover_examples():
    c10 = bipartite_double_cover(cycle(5))
    assert c10.n == 10 and set(c10.degrees()) == {2} and is_connected(c10)
    k2 = bipartite_double_cover(complete(2))
    assert k2.n == 4 and k2.m == 2 and set(k2.degrees()) == {1}
    assert bipartite_double_cover(complete(1)) == empty(2)
    assert bipartite_double_cover(cycle(4)).m == 8


def test_bipartite_matching_examples():
    assert bipartite_max_matching(complete_bipartite(3, 2))[0] == 2
    assert bipartite_max_matching(cycle(10))[0] == 5
    assert bipartite_max_matching(empty(4)) == (0, {})
    with pytest.raises(NotBipartiteError):
        bipartite_max_matching(cycle(5))
    with pytest.raises(NotBipartiteError):
        bipartite_max_matching(cycle(4), side_a=0b0011)


def test_hopcroft_karp_matches_networkx():
    rng = random.Random(17)
    for _ in range(200):
        a, b = rng.randint(0, 12), rng.randint(0, 12)
        p = rng.random()
        edges = [(i, a + j) for i in range(a) for j in range(b) if rng.random() < p]
        g = Graph.from_edges(a + b, edges)
        size, mates = bipartite_max_matching(g, (1 << a) - 1)
        h = nx.Graph()
        h.add_nodes_from(range(a + b))
        h.add_edges_from(edges)
        ref = nx.bipartite.maximum_matching(h, top_nodes=range(a))
        assert size == len(ref) // 2
        assert len(set(mates.values())) == size
        assert all(g.has_edge(u, v) for u, v in mates.items())


def test_fractional_matching_examples():
    assert fractional_matching_number(cycle(5)) == Fraction(5, 2)
    assert fractional_matching_number(complete_bipartite(1, 3)) == 1
    h = construct_H(FamilyParams(2, 1, 2))
    assert fractional_matching_number(h) == 2 == Fraction(h.n - 1, 2)
    assert fractional_matching_number(empty(3)) == 0


def test_certificate_examples():
    c = half_integral_certificate(cycle(5))
    assert c.total == Fraction(5, 2)
    assert all(c.weight(u, v) == Fraction(1, 2) for u, v in cycle(5).edges())
    k2 = half_integral_certificate(complete(2))
    assert k2.weight(0, 1) == 1 and k2.total == 1
    star = complete_bipartite(1, 3)
    c = half_integral_certificate(star)
    assert c.total == 1 and c.is_feasible_for(star)
    assert sorted(h for h in c.halves.values() if h) in ([2], [1, 1])


def test_certificate_serialisation_round_trip():
    c = half_integral_certificate(petersen())
    again = HalfIntegralMatching.from_lines(10, c.to_lines())
    assert again.total == c.total == 5
    assert all(line.endswith("/2") for line in c.to_lines())
    with pytest.raises(ValueError):
        HalfIntegralMatching.from_lines(3, ["0 1 1/3"])


def test_fpm_examples():
    assert has_fractional_perfect_matching(cycle(5))
    assert not has_fractional_perfect_matching(path(3))
    assert has_fractional_perfect_matching(complete(4))
    assert not has_fractional_perfect_matching(complete(1))


def test_oracle_equivalence_small_corpus(corpus7):
    for g in corpus7:
        assert fractional_matching_number(g) == deficiency_matching_number(g)


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=12))
def test_certificate_is_feasible_half_integral_and_optimal(g):
    c = half_integral_certificate(g)
    value = fractional_matching_number(g)
    assert c.is_feasible_for(g)
    assert set(c.halves.values()) <= {1, 2}
    assert c.total == value
    assert (2 * value).denominator == 1
    assert abs(float(value) - lp_value(g)) < 1e-7
    if g.n <= 10:
        assert value == deficiency_matching_number(g)


@settings(max_examples=150, deadline=None)
@given(graphs(min_n=2, max_n=10))
def test_adding_an_edge_never_decreases(g):
    missing = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]
    if not missing:
        return
    u, v = missing[len(missing) // 2]
    bigger = Graph.from_edges(g.n, g.edges() + [(u, v)])
    assert fractional_matching_number(bigger) >= fractional_matching_number(g)


def test_regular_graphs_have_fpm(corpus8):
    regular = [g for g in corpus8 if g.n >= 2 and g.is_regular()] + [petersen()]
    assert len(regular) > 20
    for g in regular:
        assert fractional_matching_number(g) == Fraction(g.n, 2)


def test_witness_fields():
    w = DeficiencyWitness(0b101, 3)
    assert (w.size, w.deficiency, w.members) == (2, 1, [0, 2])
