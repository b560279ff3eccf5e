import numpy as np
import pytest

from lierecog import linalg as la
from lierecog.chevalley import center_element, center_word, random_conjugate, standard_copy
from lierecog.errors import ZeroParameter
from lierecog.randgrp import pseudo_order

DIMS = {("G2", 3): 14, ("F4", 3): 52, ("E6", 4): 78, ("3D4", 2): 28, ("2E6", 2): 78}


@pytest.mark.parametrize("tq,d", DIMS.items())
def test_dimensions(tq, d):
    assert standard_copy(*tq).d == d


def test_root_elements_are_homomorphisms_of_the_additive_group():
    G = standard_copy("G2", 4)
    F = G.F
    for r in G.rootsys.roots:
        for c, d in [(1, 2), (3, 3), (2, 1)]:
            lhs = la.matmul(F, G.x(r, c), G.x(r, d))
            assert np.array_equal(lhs, G.x(r, F.add(c, d)))


def test_root_element_order_is_p():
    G = standard_copy("G2", 3)
    g = G.x(G.rootsys.simple(1), 1)
    assert pseudo_order(G.F, g) == (3, True)


def test_h_and_n():
    G = standard_copy("G2", 5)
    F = G.F
    r = G.rootsys.simple(1)
    assert la.is_identity(G.h(r, 1))
    with pytest.raises(ZeroParameter):
        G.n(r, 0)
    n = G.n(r, 1)
    assert np.array_equal(la.matmul(F, n, n), G.h(r, F.neg(1)))
    assert pseudo_order(F, G.h(r, F.omega)) == (4, True)


@pytest.mark.parametrize("typ,q", [("E7", 3), ("E6", 4), ("2E6", 2)])
def test_central_words_act_trivially(typ, q):
    word = center_word(typ, q)
    assert word is not None
    G = standard_copy(typ, q)
    assert not any(la.is_identity(G.h(r, lam)) for r, lam in word)
    assert la.is_identity(center_element(typ, q))


def test_trivial_centres():
    assert center_word("E8", 3) is None
    assert center_word("E6", 2) is None
    assert center_word("E7", 4) is None


def test_twisted_short_roots():
    G = standard_copy("3D4", 2)
    assert G.F.q == 8
    b = G.rootsys.simple(2)
    assert G.space.degree(b) == 3
    assert pseudo_order(G.F, G.x(b, G.F.omega))[0] == 2


def test_3d4_short_sl2_has_order_of_sl2_q3():
    G = standard_copy("3D4", 2)
    F = G.F
    b = G.rootsys.simple(2)
    gens = [G.x(s, c) for s in (b, G.rootsys.neg(b)) for c in G.space.bases[b]]
    seen = {la.identity(F, G.d).tobytes()}
    frontier = [la.identity(F, G.d)]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                m = la.matmul(F, a, g)
                if m.tobytes() not in seen:
                    seen.add(m.tobytes())
                    nxt.append(m)
        frontier = nxt
    assert len(seen) == 8 * 63


def test_random_conjugate():
    G = standard_copy("G2", 3)
    a = random_conjugate(G, 5)
    b = random_conjugate(G, 5)
    assert all(np.array_equal(x, y) for x, y in zip(a.gens, b.gens))
    c = random_conjugate(G, 5, identity_transform=True)
    assert all(np.array_equal(x, y) for x, y in zip(c.gens, G.generator_list()))
    M = G.generator_list()[0]
    assert np.array_equal(a.conjugate_in(M), a.gens[0])
