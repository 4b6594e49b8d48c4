from fractions import Fraction
from math import gcd

import pytest

from qhdcalc.cyclic import (
    HJExpansion,
    QhdLinearWitness,
    chain_graph,
    chain_terms,
    evaluate_terms,
    hj_expand,
    recognize_qhd_linear,
)
from qhdcalc.graph import (
    WeightedGraph,
    determinant,
    intersection_matrix,
    is_negative_definite,
)


def test_hj_expand_basics():
    assert hj_expand(2, 1).terms == (2,)
    assert hj_expand(9, 2).terms == (5, 2)  # 9/2 = 5 - 1/2
    assert hj_expand(9, 5).terms == (2, 5)  # 9/5 = 2 - 1/5
    assert hj_expand(4, 1).terms == (4,)


def test_hj_expand_rejects_bad_input():
    with pytest.raises(ValueError):
        hj_expand(2, 2)
    with pytest.raises(ValueError):
        hj_expand(6, 2)
    with pytest.raises(ValueError):
        hj_expand(1, 2)


def test_hj_roundtrip_and_term_bound():
    for p in range(2, 60):
        for q in range(1, p):
            if gcd(p, q) != 1:
                continue
            e = hj_expand(p, q)
            assert all(t >= 2 for t in e.terms)
            # all-2 chains realize length p-1, so p-1 is the sharp bound
            assert len(e.terms) <= p - 1
            assert evaluate_terms(e.terms) == Fraction(p, q) == e.value


def test_chain_graph():
    assert len(chain_graph(hj_expand(4, 1))) == 1
    g = chain_graph(hj_expand(9, 2))
    assert [g.weight(v) for v in g.vertices] == [-5, -2]
    g = chain_graph(hj_expand(9, 5))
    assert [g.weight(v) for v in g.vertices] == [-2, -5]
    assert abs(determinant(intersection_matrix(g))) == 9


def test_chain_graphs_negative_definite():
    for p, q in ((7, 3), (25, 14), (121, 32)):
        g = chain_graph(hj_expand(p, q))
        assert is_negative_definite(intersection_matrix(g))


def test_recognize_examples():
    w = recognize_qhd_linear(WeightedGraph({1: -4}, []))
    assert (w.p, w.q) == (2, 1)
    # both orientations witness (3,2) and (3,1); the least pair wins
    w = recognize_qhd_linear(WeightedGraph({1: -2, 2: -5}, [(1, 2)]))
    assert (w.p, w.q) == (3, 1)
    assert recognize_qhd_linear(WeightedGraph({1: -2, 2: -2}, [(1, 2)])) is None


def test_recognize_rejects_bad_input(seeds):
    with pytest.raises(ValueError):
        recognize_qhd_linear(seeds["A"])
    with pytest.raises(ValueError):
        recognize_qhd_linear(WeightedGraph({1: -1, 2: -2}, [(1, 2)]))


def test_recognition_sweep():
    # every chain of the square family is recognized; orientation folds
    # q to min(q, p-q); the determinant recovers p^2 exactly
    for p in range(2, 31):
        for q in range(1, p):
            if gcd(p, q) != 1:
                continue
            e = hj_expand(p * p, p * q - 1)
            g = chain_graph(e)
            assert abs(determinant(intersection_matrix(g))) == p * p
            w = recognize_qhd_linear(g)
            assert w == QhdLinearWitness(p, min(q, p - q))


def test_chain_terms_orientation():
    g = chain_graph(hj_expand(25, 9))
    terms = chain_terms(g)
    assert evaluate_terms(terms) == Fraction(25, 9)


def test_expansion_type_guards():
    with pytest.raises(ValueError):
        HJExpansion((1, 2), Fraction(1))
    with pytest.raises(ValueError):
        QhdLinearWitness(4, 2)
