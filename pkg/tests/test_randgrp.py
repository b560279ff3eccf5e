import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from lierecog import linalg as la
from lierecog.chevalley import standard_copy
from lierecog.errors import EvenOrder
from lierecog.randgrp import (GroupHandle, bray_generators, element_order, evaluate_slp, factor_qk_minus_one,
                              find_involution, formula_complement, parse_slp, power_to_involution, pseudo_order,
                              sample_size, slp_text)

_H = {}


def handle(typ="G2", q=3, seed=0):
    G = standard_copy(typ, q)
    return GroupHandle(G.F, G.generator_list(), seed=seed)


def _brute_order(F, g, cap=10_000):
    M = g
    for n in range(1, cap):
        if la.is_identity(M):
            return n
        M = la.matmul(F, M, g)
    raise AssertionError("order too large")


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([("G2", 3), ("G2", 4), ("G2", 5), ("3D4", 2)]), st.integers(0, 2**32 - 1))
def test_element_order_matches_brute_force(tq, seed):
    h = handle(*tq, seed=seed)
    g = h.random_element()
    info = element_order(h.F, g.mat)
    assert info.exact
    assert info.value == _brute_order(h.F, g.mat)


def test_pseudo_order_examples():
    G = standard_copy("G2", 5)
    F = G.F
    assert pseudo_order(F, la.identity(F, 14)) == (1, True)
    assert pseudo_order(F, G.h(G.rootsys.simple(1), F.omega)) == (4, True)


@pytest.mark.parametrize("q,k", [(2, 6), (3, 4), (4, 3), (5, 6), (8, 5), (9, 4)])
def test_factorisation_of_q_to_the_k_minus_one(q, k):
    fac, exact = factor_qk_minus_one(q, k)
    assert exact
    assert dict(fac) == sympy.factorint(q**k - 1)


def test_slp_text_roundtrip_and_evaluation():
    h = handle(seed=3)
    x = h.prod(h.random_element(), h.inv(h.random_element()), h.random_element())
    prog = h.slp(x)
    text = slp_text(prog)
    assert text.splitlines()[0].startswith("GEN")
    assert parse_slp(text) == prog
    assert np.array_equal(evaluate_slp(h.F, prog, h.root_inputs), x.mat)
    assert h.check_slp(x)


def test_subgroup_elements_keep_slps():
    h = handle(seed=4)
    K = h.subgroup([h.random_element(), h.random_element()])
    y = K.power(K.random_element(), 5)
    assert h.check_slp(y)


def test_random_elements_are_reproducible():
    a, b = handle(seed=9), handle(seed=9)
    for _ in range(5):
        assert np.array_equal(a.random_element().mat, b.random_element().mat)


def test_cyclic_group():
    G = standard_copy("G2", 5)
    g = G.h(G.rootsys.simple(1), G.F.omega)
    h = GroupHandle(G.F, [g], seed=1)
    powers = {la.mat_pow(G.F, g, k).tobytes() for k in range(4)}
    for _ in range(10):
        assert h.random_element().mat.tobytes() in powers


def test_even_order_proportion_in_g2_3():
    h = handle(seed=11)
    even = sum(h.order(h.random_element()) % 2 == 0 for _ in range(2000))
    assert even / 2000 > 0.2


def test_involutions():
    h = handle("G2", 4, seed=2)
    t = find_involution(h, tries=64)
    assert t is not None and not h.is_one(t) and h.is_one(h.mul(t, t))
    G = standard_copy("G2", 5)
    g = G.h(G.rootsys.simple(1), G.F.omega)
    k = GroupHandle(G.F, [g], seed=0)
    x = k.gens[0]
    assert np.array_equal(power_to_involution(k, x).mat, la.matmul(G.F, g, g))


def test_bray_outputs_commute():
    h = handle("G2", 3, seed=5)
    t = find_involution(h)
    for y in bray_generators(h, t, 30):
        assert np.array_equal(la.matmul(h.F, y.mat, t.mat), la.matmul(h.F, t.mat, y.mat))


def test_bray_with_central_involution_returns_group_elements():
    G = standard_copy("G2", 3)
    F = G.F
    minus = F.mul(la.identity(F, 14), F.neg(1))
    h = GroupHandle(F, G.generator_list() + [minus], seed=1)
    z = h.gens[-1]
    assert len(bray_generators(h, z, 5)) == 5


def test_formula_needs_odd_order():
    h = handle(seed=6)
    t = find_involution(h)
    with pytest.raises(EvenOrder):
        formula_complement(h, t, 3)


def test_sample_size():
    assert sample_size(0.01, 1) == 5
    assert sample_size(0.5, 10) == 7
    assert sample_size(0.999, 1) == 1
