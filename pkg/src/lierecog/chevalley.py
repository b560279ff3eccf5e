"""Adjoint standard copies of the exceptional groups and their twisted forms.

The standard copy is the adjoint representation: x_r(c) = exp(c ad e_r)
on the Chevalley basis {e_r, h_i}.  The twisted groups 3D4(q) and 2E6(q)
are realized inside adjoint D4(q^3) and E6(q^2) by orbit products.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import linalg as la
from .errors import UnsupportedType, ZeroParameter
from .gf import Field
from .rootdata import Root, RootSystem, root_system, twisted_root_data
from .slots import TWIST, SlotSpace, build_slots, normalize_type, slot_space


class MatOps:
    """Group operations on encoded matrices over one field."""

    def __init__(self, F: Field, d: int):
        self.F, self.d = F, d

    def mul(self, x, y):
        return la.matmul(self.F, x, y)

    def inv(self, x):
        return la.inverse(self.F, x)

    def one(self):
        return la.identity(self.F, self.d)


@dataclass
class ToralElement:
    root: Root | None
    word: tuple[int, ...] | None
    lam: int
    mat: np.ndarray


@dataclass
class ChevalleyGroup:
    """A concrete standard copy with its root elements and slot generators."""

    type: str
    q: int
    space: SlotSpace
    carrier: RootSystem           # root system whose adjoint module is used
    _terms: dict = field(default_factory=dict, repr=False)
    _gens: dict | None = field(default=None, repr=False)

    @property
    def F(self) -> Field:
        return self.space.F

    @property
    def p(self) -> int:
        return self.space.p

    @property
    def d(self) -> int:
        return self.carrier.dim

    @property
    def ops(self) -> MatOps:
        return MatOps(self.F, self.d)

    @property
    def rootsys(self) -> RootSystem:
        return self.space.rootsys

    @property
    def twisted(self) -> bool:
        return self.type in TWIST

    # ---------------------------------------------------- carrier root elements
    def _carrier_terms(self, r: Root) -> list[np.ndarray]:
        if r not in self._terms:
            p = self.p
            self._terms[r] = [np.asarray(A % p, dtype=np.int64) for A in self.carrier.exp_terms(r)]
        return self._terms[r]

    def carrier_x(self, r: Root, c: int) -> np.ndarray:
        """exp(c ad e_r) in the carrier adjoint module."""
        F = self.F
        M = la.identity(F, self.d)
        ck = 1
        for A in self._carrier_terms(tuple(r)):
            ck = F.mul(ck, c)
            if ck:
                M = F.add(M, F.mul(A, ck))
        return M

    def x(self, r: Root, c: int) -> np.ndarray:
        """Root element x_r(c).

        For untwisted types any root may be used.  For twisted types r is a
        root of the twisted system and only fundamental roots (and their
        negatives) are built directly; other slots come from the formulas.
        """
        r = tuple(r)
        if not self.twisted:
            return self.carrier_x(r, c)
        td = twisted_root_data(self.type)
        nz = [i for i, v in enumerate(r) if v]
        if len(nz) != 1 or abs(r[nz[0]]) != 1:
            return self.generators_full_x(r, c)
        node = nz[0] + 1
        sign = r[nz[0]]
        M = None
        for j, un_node in enumerate(td.node_orbits[node]):
            ur = list(td.untwisted.simple(un_node))
            ur = tuple(sign * v for v in ur)
            m = self.carrier_x(ur, self.space.frob(c, j))
            M = m if M is None else la.matmul(self.F, M, m)
        return M

    def generators_full_x(self, r: Root, c: int) -> np.ndarray:
        from .slots import x_elem
        gens = self.generators()
        if r not in self.space.bases:
            raise UnsupportedType(f"no slot for twisted root {r}")
        return x_elem(self.ops, self.space, gens, r, c)

    # ---------------------------------------------------------- generators
    def fundamental(self) -> dict:
        out = {}
        for r in self.space.fundamental_roots():
            for i, c in enumerate(self.space.bases[r]):
                out[(r, i)] = self.x(r, c)
        return out

    def generators(self) -> dict:
        """Slot assignment x_r(c_i) for every standard-generator slot."""
        if self._gens is None:
            self._gens = build_slots(self.space, self.fundamental(), self.ops)
        return self._gens

    def generator_list(self) -> list[np.ndarray]:
        f = self.fundamental()
        return [f[s] for s in sorted(f)]

    # ----------------------------------------------------- toral elements
    def n(self, r: Root, c: int = 1) -> np.ndarray:
        """n_r(c) = x_r(c) x_-r(-c^-1) x_r(c)."""
        if c == 0:
            raise ZeroParameter("n_r(0) is undefined")
        F = self.F
        r = tuple(r)
        xr = self.x(r, c)
        xm = self.x(self.rootsys.neg(r), F.neg(F.inv(c)))
        return la.matmul(F, la.matmul(F, xr, xm), xr)

    def h(self, r: Root, lam: int) -> np.ndarray:
        """h_r(lam) = n_r(lam^-1) n_r(1)^-1."""
        if lam == 0:
            raise ZeroParameter("h_r(0) is undefined")
        if lam == 1:
            return la.identity(self.F, self.d)
        F = self.F
        return la.matmul(F, self.n(r, F.inv(lam)), la.inverse(F, self.n(r, 1)))

    def h_word(self, coeffs, lam: int) -> np.ndarray:
        """h_{c_1...c_l}(lam) = prod h_i(lam^{c_i})."""
        F = self.F
        M = la.identity(F, self.d)
        R = self.rootsys
        for i, c in enumerate(coeffs, start=1):
            if c:
                M = la.matmul(F, M, self.h(R.simple(i), F.pow(lam, c)))
        return M

    def random_element(self, rng: np.random.Generator, length: int = 30) -> np.ndarray:
        gens = self.generator_list()
        M = la.identity(self.F, self.d)
        for _ in range(length):
            M = la.matmul(self.F, M, gens[int(rng.integers(len(gens)))])
        return M


@lru_cache(maxsize=None)
def adjoint_group(typ: str, q) -> ChevalleyGroup:
    typ = normalize_type(typ)
    if typ in TWIST:
        raise UnsupportedType(f"{typ} is twisted; use twisted_group")
    sp = slot_space(typ, q)
    return ChevalleyGroup(typ, sp.q, sp, root_system(typ))


@lru_cache(maxsize=None)
def twisted_group(typ: str, q) -> ChevalleyGroup:
    typ = normalize_type(typ)
    if typ not in TWIST:
        raise UnsupportedType(f"{typ} is not twisted")
    sp = slot_space(typ, q)
    td = twisted_root_data(typ)
    return ChevalleyGroup(typ, sp.q, sp, td.untwisted)


def standard_copy(typ: str, q) -> ChevalleyGroup:
    typ = normalize_type(typ)
    return twisted_group(typ, q) if typ in TWIST else adjoint_group(typ, q)


def n_element(G: ChevalleyGroup, r: Root, c: int = 1) -> np.ndarray:
    return G.n(r, c)


def h_element(G: ChevalleyGroup, r: Root, lam: int) -> ToralElement:
    return ToralElement(tuple(r), None, lam, G.h(r, lam))


def center_word(typ: str, q) -> list[tuple[Root, int]] | None:
    """The central h-word as (simple root, parameter) pairs, or None if the center is trivial."""
    typ = normalize_type(typ)
    sp = slot_space(typ, q)
    F, qq = sp.F, sp.q
    R = sp.rootsys
    if typ == "E6" and (qq - 1) % 3 == 0:
        lam = F.pow(F.omega, (F.q - 1) // 3)
        l2 = F.mul(lam, lam)
        return [(R.simple(1), l2), (R.simple(3), lam), (R.simple(5), l2), (R.simple(6), lam)]
    if typ == "E7" and qq % 2 == 1:
        m = F.neg(1)
        return [(R.simple(2), m), (R.simple(5), m), (R.simple(7), m)]
    if typ == "2E6" and (qq + 1) % 3 == 0:
        lam = F.pow(F.omega, (F.q - 1) // 3)
        return [(R.simple(3), lam), (R.simple(4), F.mul(lam, lam))]
    return None


def center_element(typ: str, q) -> np.ndarray:
    """The central h-word evaluated in the standard copy (identity when trivial)."""
    G = standard_copy(typ, q)
    word = center_word(typ, q)
    M = la.identity(G.F, G.d)
    if word is None:
        return M
    for r, lam in word:
        M = la.matmul(G.F, M, G.h(r, lam))
    return M


@dataclass
class ConjugatedGroup:
    """Opaque conjugate of a standard copy: only generators and arithmetic."""

    field: Field
    gens: list[np.ndarray]
    _T: np.ndarray = field(repr=False)
    _Tinv: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return self.gens[0].shape[0]

    def mul(self, x, y):
        return la.matmul(self.field, x, y)

    def inv(self, x):
        return la.inverse(self.field, x)

    def equal(self, x, y) -> bool:
        return bool(np.array_equal(x, y))

    def conjugate_in(self, M: np.ndarray) -> np.ndarray:
        """Image of a standard-copy matrix in this conjugate (test oracle only)."""
        return la.matmul(self.field, la.matmul(self.field, self._Tinv, M), self._T)


def random_invertible(F: Field, d: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        T = F.random(rng, size=(d, d))
        if la.rank(F, T) == d:
            return T


def random_conjugate(G: ChevalleyGroup, seed: int | None, identity_transform: bool = False) -> ConjugatedGroup:
    """Generators T^-1 g T of G for a seeded random T."""
    F = G.F
    if identity_transform:
        T = la.identity(F, G.d)
    else:
        T = random_invertible(F, G.d, np.random.default_rng(seed))
    Ti = la.inverse(F, T)
    gens = [la.matmul(F, la.matmul(F, Ti, g), T) for g in G.generator_list()]
    return ConjugatedGroup(F, gens, T, Ti)
