import numpy as np
import pytest
import sympy

from lierecog import linalg as la
from lierecog.chevalley import random_conjugate, standard_copy
from lierecog.errors import OracleUnavailable, RestartCapExceeded
from lierecog.gf import field_create
from lierecog.oracles import elementary
from lierecog.randgrp import GroupHandle
from lierecog.recog import (_Context, basic_sl2_sl3, basic_sl2_sl6, compute_high_weight, dominates,
                            highest_root_weight, label, labelled_from_copy, primitive_primes, recognize)
from lierecog.rootdata import root_system


@pytest.mark.parametrize("q,k", [(3, 4), (3, 5), (5, 6), (2, 8), (4, 3), (3, 18), (7, 9)])
def test_primitive_primes(q, k):
    want = sorted(r for r in sympy.factorint(q**k - 1) if sympy.n_order(q, r) == k)
    assert sorted(primitive_primes(q, k)) == want


def test_highest_root_weights():
    # <alpha_0, alpha_r^vee> from the Cartan matrix and the highest root
    for typ in ("G2", "F4", "E6", "E7", "E8"):
        R = root_system(typ)
        a0 = np.array(R.highest_root)
        want = tuple(int(v) for v in a0 @ R.cartan)
        assert highest_root_weight(typ) == want
    assert highest_root_weight("E6") == (0, 1, 0, 0, 0, 0)
    assert highest_root_weight("G2") == (1, 0)
    assert highest_root_weight("F4") == (1, 0, 0, 0)


def test_dominance():
    assert dominates("G2", (1, 0), (0, 1))
    assert dominates("G2", (1, 0), (0, 0))
    assert not dominates("G2", (0, 1), (1, 0))


@pytest.mark.parametrize("typ,q", [("G2", 5), ("G2", 3), ("G2", 4), ("3D4", 2), ("F4", 3)])
def test_high_weight_of_adjoint_copies(typ, q):
    G = standard_copy(typ, q)
    w = compute_high_weight(G.F, labelled_from_copy(G), np.random.default_rng(0))
    assert w == highest_root_weight(typ)


def test_high_weight_after_conjugation():
    G = standard_copy("G2", 5)
    C = random_conjugate(G, 2)
    w = compute_high_weight(G.F, labelled_from_copy(G, C._T), np.random.default_rng(0))
    assert w == (1, 0)


def _natural(n, q, seed):
    F = field_create(q)
    gens = [elementary(F, n, i, i + 1, 1) for i in range(n - 1)] + [elementary(F, n, i + 1, i, 1) for i in range(n - 1)]
    return F, GroupHandle(F, gens, seed=seed)


def _commute(h, A, B):
    return all(h.commute(a, b) for a in A.gens for b in B.gens)


def test_basic_sl2_in_sl3():
    F, h = _natural(3, 5, 1)
    A = basic_sl2_sl3(h, 5)
    K1, K2 = A.nodes[1], A.nodes[2]
    assert not _commute(h, K1, K2)
    for K in (K1, K2):
        assert la.commutator_space(F, [g.mat for g in K.gens]).dim == 2


def test_basic_sl2_in_sl6_form_a_chain():
    F, h = _natural(6, 5, 2)
    A = basic_sl2_sl6(h, 5)
    for i in range(1, 6):
        assert la.commutator_space(F, [g.mat for g in A.nodes[i].gens]).dim == 2
    # an A5 diagram in some numbering: a path with four edges
    edges = [(i, j) for i in range(1, 6) for j in range(i + 1, 6) if not _commute(h, A.nodes[i], A.nodes[j])]
    assert len(edges) == 4
    deg = [sum(k in e for e in edges) for k in range(1, 6)]
    assert sorted(deg) == [1, 1, 2, 2, 2]


def test_f4_labelling_is_unavailable():
    G = standard_copy("F4", 3)
    h = GroupHandle(G.F, G.generator_list(), seed=0)
    ctx = _Context(h, "F4", 3, np.random.default_rng(0))
    with pytest.raises(OracleUnavailable):
        label(ctx, None)


def test_recognize_needs_a_field_with_raw_matrices():
    G = standard_copy("G2", 3)
    with pytest.raises(ValueError):
        recognize(G.generator_list(), "G2", 3)


def test_restart_cap():
    G = standard_copy("G2", 3)
    with pytest.raises(RestartCapExceeded):
        recognize(G.generator_list(), "G2", 3, F=G.F, restarts=0)


def test_recognize_g2_3_from_raw_matrices():
    G = standard_copy("G2", 3)
    C = random_conjugate(G, 4)
    res = recognize(C.gens, "G2", 3, seed=4, F=G.F)
    assert res.report.passed
    H = res.generators.handle
    assert all(H.check_slp(e) for e in res.generators.slots.values())
    assert res.high_weight == (1, 0)
