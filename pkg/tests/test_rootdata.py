import itertools

import numpy as np
import pytest
from sympy.liealgebras.cartan_matrix import CartanMatrix
from sympy.liealgebras.root_system import RootSystem as SympyRoots

from lierecog.rootdata import dynkin_edges, root_system, twisted_root_data

TYPES = ["G2", "F4", "E6", "E7", "E8", "D4"]
COUNTS = {"G2": 12, "F4": 48, "E6": 72, "E7": 126, "E8": 240, "D4": 24}


@pytest.mark.parametrize("typ", TYPES)
def test_root_counts_and_dimension(typ):
    R = root_system(typ)
    assert len(R.roots) == COUNTS[typ]
    assert len(SympyRoots(typ).all_roots()) == COUNTS[typ]
    assert R.dim == COUNTS[typ] + R.rank


@pytest.mark.parametrize("typ", TYPES)
def test_cartan_matrix_against_sympy(typ):
    ours = root_system(typ).cartan.tolist()
    ref = CartanMatrix(typ).tolist()
    # sympy numbers the G2 nodes short-then-long; here node 1 is long
    assert ours == (np.array(ref).T.tolist() if typ == "G2" else ref)


def test_highest_roots():
    assert root_system("G2").highest_root == (2, 3)
    assert root_system("E7").highest_root == (2, 2, 3, 4, 3, 2, 1)
    assert root_system("E8").highest_root == (2, 3, 4, 6, 5, 4, 3, 2)
    assert root_system("F4").highest_root == (2, 3, 4, 2)


def test_long_and_short():
    G = root_system("G2")
    assert G.is_long(G.simple(1)) and not G.is_long(G.simple(2))
    F = root_system("F4")
    assert [F.is_long(F.simple(i)) for i in range(1, 5)] == [True, True, False, False]


@pytest.mark.parametrize("typ", ["G2", "F4", "D4", "E6"])
def test_adjoint_structure_constants(typ):
    """[ad e_a, ad e_b] = N_ab ad e_{a+b}, for every pair of roots."""
    R = root_system(typ)
    ad = {r: R.ad_matrix(r).astype(np.int64) for r in R.roots}
    for a, b in itertools.combinations(R.roots, 2):
        if a == R.neg(b):
            continue
        lhs = ad[a] @ ad[b] - ad[b] @ ad[a]
        s = tuple(x + y for x, y in zip(a, b))
        if R.is_root(s):
            assert np.array_equal(lhs, R.N(a, b) * ad[s])
        else:
            assert not lhs.any()


def test_commutator_expansions():
    G = root_system("G2")
    a, b = G.simple(1), G.simple(2)
    got = sorted(G.commutator_expansion(b, G.add(a, b)))
    assert got == sorted([(1, 1, (1, 2), 2), (1, 2, (2, 3), -3), (2, 1, (1, 3), -3)])
    E = root_system("E6")
    assert E.commutator_expansion(E.simple(1), E.simple(3)) == [(1, 1, (1, 0, 1, 0, 0, 0), 1)]
    F = root_system("F4")
    assert F.commutator_expansion(F.add(F.simple(2), F.simple(3)), F.simple(3)) == [(1, 1, (0, 1, 2, 0), 2)]


def test_exp_terms_give_group_elements():
    """exp(c ad e_r) exp(d ad e_r) = exp((c + d) ad e_r) with integer arithmetic."""
    R = root_system("G2")
    r = R.simple(2)
    terms = R.exp_terms(r)
    d = R.dim

    def ex(c):
        M = np.eye(d, dtype=object)
        for k, T in enumerate(terms, start=1):
            M = M + T.astype(object) * c**k
        return M

    assert (ex(2).dot(ex(3)) == ex(5)).all()


def test_twisted_data():
    t = twisted_root_data("3D4")
    assert t.twisted.rank == 2 and t.node_orbits == {1: (2,), 2: (1, 3, 4)}
    t = twisted_root_data("2E6")
    assert t.twisted.rank == 4 and t.node_orbits[3] == (3, 5) and t.node_orbits[4] == (1, 6)


def test_dynkin_edges():
    assert dynkin_edges("E6") == [(1, 3), (2, 4), (3, 4), (4, 5), (5, 6)]
    assert len(dynkin_edges("E8")) == 7
