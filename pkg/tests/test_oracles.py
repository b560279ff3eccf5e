import numpy as np
import pytest

from lierecog import linalg as la
from lierecog.chevalley import standard_copy
from lierecog.errors import NotSL2
from lierecog.gf import field_create
from lierecog.oracles import elementary, elementary_decomposition, recognize_sl2, recognize_sl3
from lierecog.randgrp import GroupHandle

from helpers import natural


# (q, ambient field or None, conjugated)
VARIANTS = [(3, None, False), (5, None, True), (4, None, True), (3, 9, True), (2, 8, True),
            (7, None, False), (8, None, True), (9, None, True), (4, 16, True), (5, 25, False)]
INSTANCES = [(v, s) for v in VARIANTS for s in (1, 2)]


def _signed_equal(F, A, B):
    return np.array_equal(A, B) or np.array_equal(A, F.neg(B))


@pytest.mark.parametrize("variant,seed", INSTANCES)
def test_sl2_round_trip(variant, seed):
    q, big, conj = variant
    F, gens = natural(2, q, big, conj, seed)
    h = GroupHandle(F, gens, seed=seed)
    iso = recognize_sl2(h, q, np.random.default_rng(seed))
    for _ in range(50):
        g, k = h.random_element(), h.random_element()
        A = iso.forward(g)
        assert np.array_equal(iso.backward(A).mat, g.mat)
        assert np.array_equal(iso.forward(h.mul(g, k)), la.matmul(F, A, iso.forward(k)))


@pytest.mark.parametrize("variant,seed", INSTANCES)
def test_sl3_round_trip(variant, seed):
    q, big, conj = variant
    F, gens = natural(3, q, big, conj, seed)
    h = GroupHandle(F, gens, seed=seed)
    iso = recognize_sl3(h, q, np.random.default_rng(seed))
    for _ in range(50):
        g, k = h.random_element(), h.random_element()
        A = iso.forward(g)
        assert np.array_equal(iso.backward(A).mat, g.mat)
        assert np.array_equal(iso.forward(h.mul(g, k)), la.matmul(F, A, iso.forward(k)))
    for i, j in [(0, 1), (1, 2), (0, 2), (2, 0)]:
        assert np.array_equal(iso.forward(iso.elementary(i, j, 1)), elementary(F, 3, i, j, 1))


@pytest.mark.parametrize("q", [3, 4, 5])
def test_sl2_in_the_adjoint_module(q):
    """A long-root SL2 of G2 acting on 14 dimensions; forward is exact up to sign."""
    G = standard_copy("G2", q)
    R, F = G.rootsys, G.F
    r = R.simple(1)
    gens = [G.x(s, c) for s in (r, R.neg(r)) for c in G.space.bases[r]]
    h = GroupHandle(F, gens, seed=q)
    iso = recognize_sl2(h, q, np.random.default_rng(q))
    for _ in range(50):
        g, k = h.random_element(), h.random_element()
        A = iso.forward(g)
        assert np.array_equal(iso.backward(A).mat, g.mat)
        assert _signed_equal(F, iso.forward(h.mul(g, k)), la.matmul(F, A, iso.forward(k)))


def test_sl3_in_the_adjoint_module():
    G = standard_copy("G2", 5)
    R, F = G.rootsys, G.F
    a, b = R.simple(1), R.simple(2)
    other = R.add(R.add(R.add(a, b), b), b)
    h = GroupHandle(F, [G.x(s, 1) for s in (a, R.neg(a), other, R.neg(other))], seed=4)
    iso = recognize_sl3(h, 5, np.random.default_rng(4))
    for _ in range(20):
        g = h.random_element()
        assert np.array_equal(iso.forward(iso.backward(iso.forward(g))), iso.forward(g))


def test_elementary_decomposition():
    F = field_create(3, 2)
    for n in (2, 3):
        _, gens = natural(n, 9)
        h = GroupHandle(F, gens, seed=1)
        for _ in range(10):
            A = h.random_element().mat
            M = la.identity(F, n)
            for i, j, c in elementary_decomposition(F, A):
                M = la.matmul(F, M, elementary(F, n, i, j, c))
            assert np.array_equal(M, A)


def test_rejects_trivial_group():
    F = field_create(5)
    with pytest.raises(NotSL2):
        recognize_sl2(GroupHandle(F, [la.identity(F, 2)], seed=0))
