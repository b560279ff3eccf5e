import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_mul, gf_rem

from lierecog.errors import FieldTooLarge, NotPrime, ZeroElement
from lierecog.gf import dlog, field_create, parse_field_spec

FIELDS = [(2, 1), (3, 1), (2, 3), (3, 2), (5, 2), (2, 4), (7, 2), (3, 3)]

# published Conway polynomials, low degree first
CONWAY = {
    (2, 3): (1, 1, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 6): (2, 2, 1, 0, 2, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 3): (4, 0, 6, 1),
}


@pytest.mark.parametrize("pa,mod", CONWAY.items())
def test_conway_moduli(pa, mod):
    assert field_create(*pa).modulus == mod


def _poly_mul(F, x, y):
    """Product through sympy's dense GF(p)[x] arithmetic, high degree first."""
    fx = list(reversed(F.coeffs(x)))
    fy = list(reversed(F.coeffs(y)))
    m = list(reversed(F.modulus))
    r = gf_rem(gf_mul(fx, fy, F.p, ZZ), m, F.p, ZZ)
    return F.elem(list(reversed(r)) + [0] * (F.a - len(r)))


@pytest.mark.parametrize("pa", FIELDS)
def test_multiplication_matches_polynomial_oracle(pa):
    F = field_create(*pa)
    rng = np.random.default_rng(1)
    for _ in range(200):
        x, y = F.random(rng), F.random(rng)
        assert F.mul(x, y) == _poly_mul(F, x, y)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_field_axioms(pa, data):
    F = field_create(*pa)
    el = st.integers(0, F.q - 1)
    x, y, z = data.draw(el), data.draw(el), data.draw(el)
    assert F.add(x, F.neg(x)) == 0
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
    if x:
        assert F.mul(x, F.inv(x)) == 1
        assert F.pow(F.omega, dlog(F, x)) == x
    assert F.frobenius(F.add(x, y)) == F.add(F.frobenius(x), F.frobenius(y))


@pytest.mark.parametrize("pa", FIELDS)
def test_omega_is_primitive(pa):
    F = field_create(*pa)
    seen = {F.pow(F.omega, k) for k in range(F.q - 1)}
    assert len(seen) == F.q - 1 and 0 not in seen


def test_vectorised_arithmetic_agrees_with_scalar():
    F = field_create(3, 2)
    rng = np.random.default_rng(0)
    A, B = F.random(rng, size=(5, 5)), F.random(rng, size=(5, 5))
    M = F.mul(A, B)
    S = F.add(A, B)
    for i in range(5):
        for j in range(5):
            assert M[i, j] == F.mul(int(A[i, j]), int(B[i, j]))
            assert S[i, j] == F.add(int(A[i, j]), int(B[i, j]))


def test_subfield_embedding():
    F = field_create(2, 6)
    assert len(F.subfield_elements(2)) == 4
    assert len(F.subfield_elements(3)) == 8
    assert all(F.in_subfield(x, 3) for x in F.subfield_elements(3))


def test_parse_and_errors():
    assert parse_field_spec("3^2") == (3, 2)
    assert parse_field_spec(8) == (2, 3)
    assert parse_field_spec("9") == (3, 2)
    with pytest.raises((NotPrime, ValueError)):
        parse_field_spec(6)
    with pytest.raises(NotPrime):
        field_create(4, 1)
    with pytest.raises(FieldTooLarge):
        field_create(2, 40)
    with pytest.raises(ZeroElement):
        dlog(field_create(5, 1), 0)


def test_sqrt():
    for pa in [(5, 1), (3, 2), (2, 3)]:
        F = field_create(*pa)
        squares = {F.mul(x, x) for x in range(F.q)}
        for x in range(F.q):
            r = F.sqrt(x)
            if x in squares:
                assert F.mul(r, r) == x
            else:
                assert r is None
