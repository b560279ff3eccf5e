"""Constructive recognition of SL2 and SL3 at desk scale.

An isomorphism is held as a *frame*: a small matrix representation
``forward`` (2x2 or 3x3 over the matrix field, entries in the parameter
subfield) together with memoized preimages of elementary matrices, from
which ``backward`` rewrites any target matrix by row elimination.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import linalg as la
from .errors import (NoInvertibleSolution, NoNaturalFactor, NotSL2, NotSL3,
                     OracleUnavailable, SearchBudgetExhausted)
from .gf import Field, field_create
from .randgrp import Elem, GroupHandle


# ------------------------------------------------------------- field helpers

def subfield_basis(F: Field, qk: int) -> tuple[int, ...]:
    """Conway-compatible F_p-basis nu^i of GF(qk) inside F."""
    a = _log(F.p, qk)
    if F.a % a:
        raise ValueError(f"GF({qk}) is not a subfield of GF({F.q})")
    nu = F.pow(F.omega, (F.q - 1) // (qk - 1)) if qk < F.q else F.omega
    return tuple(F.pow(nu, i) for i in range(a))


def _log(p: int, q: int) -> int:
    a = 0
    while q > 1:
        q //= p
        a += 1
    return a


def fp_coords(F: Field, basis: Sequence[int], c: int) -> list[int] | None:
    """Coordinates of c over an F_p-linearly independent list, or None."""
    P = field_create(F.p, 1)
    B = np.array([np.atleast_1d(F.digits(int(b))) for b in basis], dtype=np.int64)
    v = np.atleast_1d(F.digits(int(c))).astype(np.int64)
    sol = la.solve_left(P, B, v)
    return None if sol is None else [int(x) for x in sol]


def degree_over_prime(F: Field, x: int) -> int:
    k = 1
    while F.frobenius(int(x), k) != int(x):
        k += 1
    return k


def in_subfield(F: Field, x: int, qk: int) -> bool:
    return F.pow(int(x), qk) == int(x)


# ----------------------------------------------------------- elimination

def elementary_decomposition(F: Field, A: np.ndarray) -> list[tuple[int, int, int]]:
    """(i, j, c) triples with A = prod (I + c E_ij) for A of determinant 1."""
    A = np.asarray(A, dtype=np.int64).copy()
    n = A.shape[0]
    ops: list[tuple[int, int, int]] = []

    def addrow(i, j, c):
        # A <- (I + c E_ij) A : row i += c row j
        if c:
            A[i] = F.add(A[i], F.mul(A[j], c))
            ops.append((i, j, c))

    for j in range(n - 1):
        if A[j, j] == 0:
            i = next(i for i in range(j + 1, n) if A[i, j])
            addrow(j, i, 1)
        if A[j, j] != 1:
            if A[j + 1, j] == 0:
                addrow(j + 1, j, 1)
            addrow(j, j + 1, F.div(F.sub(1, int(A[j, j])), int(A[j + 1, j])))
        for i in range(n):
            if i != j and A[i, j]:
                addrow(i, j, F.neg(int(A[i, j])))
    for i in range(n - 1):
        if A[i, n - 1]:
            addrow(i, n - 1, F.neg(int(A[i, n - 1])))
    if not la.is_identity(A):
        raise ValueError("matrix does not have determinant 1")
    # E_k ... E_1 A = I  =>  A = E_1^-1 ... E_k^-1
    return [(i, j, F.neg(c)) for (i, j, c) in ops]


def elementary(F: Field, n: int, i: int, j: int, c: int) -> np.ndarray:
    M = np.eye(n, dtype=np.int64)
    M[i, j] = c
    return M


def conj_matrix(F: Field, P: np.ndarray, M: np.ndarray) -> np.ndarray:
    """P M P^-1 (change of row basis to the rows of P)."""
    return la.matmul(F, la.matmul(F, P, M), la.inverse(F, P))


# ------------------------------------------------------- natural factors

def find_factor(F: Field, mats: Sequence[np.ndarray], dims: Sequence[int],
                rng: np.random.Generator) -> la.Factor:
    factors = la.chop(F, mats, rng, stop_dims={dims[0]})
    for d in dims:
        for fac in factors:
            if fac.dim == d:
                return fac
    raise NoNaturalFactor(f"no composition factor of dimension {tuple(dims)}; "
                          f"found {sorted(f.dim for f in factors)}")


class _Sym2:
    """Recover +-A in SL2 from its action on a 3-dim module S^2(V) (p odd)."""

    def __init__(self, F: Field, gens: Sequence[np.ndarray], rng: np.random.Generator):
        self.F = F
        pairs = [(la.transpose(la.inverse(F, g)), g) for g in gens]
        try:
            basis, B = la.solve_intertwiner(F, pairs, rng)
        except NoInvertibleSolution:
            raise NotSL2("no invariant form on the 3-dimensional factor") from None
        if len(basis) != 1 or not np.array_equal(B, la.transpose(B)):
            raise NotSL2("3-dimensional factor is not an orthogonal module")
        self.B = B
        w1 = self._isotropic(rng)
        while True:
            w2 = self._isotropic(rng)
            if self.bil(w1, w2):
                break
        perp = la.right_kernel(F, la.matmul(F, np.vstack([w1, w2]), B))
        w3 = perp[0]
        kappa = self.Q(w3)
        if kappa == 0:
            raise NotSL2("degenerate form")
        # S^2 coordinates: e1^2 = w1, e2^2 = w2 / sigma, e1e2 = w3
        sigma = F.div(self.polar(w1, w2), F.mul(F.neg(4 % F.p if F.p != 2 else 0), kappa))
        self.basis = np.vstack([w1, F.mul(w2, F.inv(sigma)), w3])
        self.binv = la.inverse(F, self.basis)

    def bil(self, v, w) -> int:
        F = self.F
        return int(la.matmul(F, la.matmul(F, v, self.B), w))

    def Q(self, v) -> int:
        return self.bil(v, v)

    def polar(self, v, w) -> int:
        return self.F.mul(2, self.bil(v, w))

    def _isotropic(self, rng) -> np.ndarray:
        F = self.F
        for _ in range(500):
            v, w = F.random(rng, size=3), F.random(rng, size=3)
            a, b, c = self.Q(w), self.bil(v, w), self.Q(v)
            # a t^2 + 2 b t + c = 0
            if a == 0:
                if b == 0:
                    continue
                t = F.div(F.neg(c), F.mul(2, b))
            else:
                disc = F.sub(F.mul(b, b), F.mul(a, c))
                r = F.sqrt(disc)
                if r is None:
                    continue
                t = F.div(F.sub(r, b), a)
            x = F.add(v, F.mul(w, t))
            if np.any(x):
                return x
        raise NotSL2("no isotropic vector found")

    def small(self, M3: np.ndarray) -> np.ndarray:
        F = self.F
        M = la.matmul(F, la.matmul(F, self.basis, M3), self.binv)
        a2, b2, ab2 = int(M[0, 0]), int(M[0, 1]), int(M[0, 2])
        two = 2
        if a2:
            a = F.sqrt(a2)
            if a is None:
                raise NotSL2("action is not a symmetric square")
            b = F.div(ab2, F.mul(two, a))
            c = F.div(int(M[2, 0]), a)
            d = F.div(F.sub(int(M[2, 2]), F.mul(b, c)), a)
        else:
            b = F.sqrt(b2)
            if b is None or b == 0:
                raise NotSL2("action is not a symmetric square")
            a = 0
            d = F.div(int(M[2, 1]), b)
            c = F.div(int(M[2, 2]), b)
        A = np.array([[a, b], [c, d]], dtype=np.int64)
        if F.sub(F.mul(a, d), F.mul(b, c)) != 1:
            raise NotSL2("recovered matrix does not have determinant 1")
        return A


# ------------------------------------------------------------- SL2 frames

@dataclass
class SL2Iso:
    """Isomorphism K -> SL2(qk) in a normalized frame."""

    handle: GroupHandle
    qk: int
    small: Callable[[np.ndarray], np.ndarray]    # exact or up to sign
    exact: bool
    P: np.ndarray                                # frame rows in small coordinates
    plus: dict[int, Elem] = field(default_factory=dict)
    minus: dict[int, Elem] = field(default_factory=dict)
    certified: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def F(self) -> Field:
        return self.handle.F

    @property
    def basis(self) -> tuple[int, ...]:
        return subfield_basis(self.F, self.qk)

    def frame(self, M: np.ndarray) -> np.ndarray:
        return conj_matrix(self.F, self.P, self.small(M))

    def forward(self, g: Elem | np.ndarray) -> np.ndarray:
        mat = g.mat if isinstance(g, Elem) else g
        A = self.frame(mat)
        if self.exact:
            return A
        w = self.backward(A)
        if np.array_equal(w.mat, mat):
            return A
        return self.F.neg(A)

    def _root_elem(self, sign: int, c: int) -> Elem:
        h = self.handle
        table = self.plus if sign > 0 else self.minus
        coords = fp_coords(self.F, self.basis, c)
        if coords is None:
            raise ValueError(f"{c} is not in GF({self.qk})")
        out = None
        for i, k in enumerate(coords):
            if k:
                y = h.power(table[i], k)
                out = y if out is None else h.mul(out, y)
        return out if out is not None else h.one()

    def x_plus(self, c: int) -> Elem:
        return self._root_elem(1, c)

    def x_minus(self, c: int) -> Elem:
        return self._root_elem(-1, c)

    def backward(self, A: np.ndarray) -> Elem:
        """Element of K mapping to A (in frame coordinates)."""
        h = self.handle
        out = None
        for i, j, c in elementary_decomposition(self.F, A):
            y = self.x_plus(c) if (i, j) == (0, 1) else self.x_minus(c)
            out = y if out is None else h.mul(out, y)
        return out if out is not None else h.one()

    def backward_in(self, M: np.ndarray, rows: np.ndarray) -> Elem:
        """Preimage of M given in the small basis with the given rows."""
        F = self.F
        T = la.matmul(F, self.P, la.inverse(F, rows))
        return self.backward(conj_matrix(F, T, M))

    def forward_in(self, g, rows: np.ndarray) -> np.ndarray:
        F = self.F
        T = la.matmul(F, rows, la.inverse(F, self.P))
        return conj_matrix(F, T, self.forward(g))


def _unipotent(F: Field, h: GroupHandle, small, budget: int) -> tuple[Elem, np.ndarray]:
    for _ in range(budget):
        g = h.random_element()
        A = small(g.mat)
        tr = F.add(int(A[0, 0]), int(A[1, 1]))
        if tr not in (2 % F.p, F.neg(2 % F.p)):
            continue
        if la.is_scalar(A):
            continue
        n = h.order(g)
        if n % F.p:
            continue
        u = h.power(g, n // F.p)
        U = _sign_unipotent(F, small(u.mat))
        if not la.is_identity(U):
            return u, U
    raise SearchBudgetExhausted("no unipotent element found")


def _sign_unipotent(F: Field, A: np.ndarray) -> np.ndarray:
    if F.p != 2 and F.add(int(A[0, 0]), int(A[1, 1])) != 2:
        return F.neg(A)
    return A


def build_sl2(h: GroupHandle, qk: int, small, exact: bool, rng: np.random.Generator,
              budget: int = 400) -> SL2Iso:
    F = h.F
    p = F.p
    ak = _log(p, qk)
    u, U = _unipotent(F, h, small, budget)
    e1 = la.left_kernel(F, la.minus_identity(F, U))[0]
    for _ in range(budget):
        g = h.random_element()
        e2 = la.matmul(F, e1, small(g.mat))
        if la.rank(F, np.vstack([e1, e2])) == 2:
            break
    else:
        raise SearchBudgetExhausted("no element moving the fixed line")
    up = h.conj(u, g)
    P0 = np.vstack([e1, e2])
    B0 = _sign_unipotent(F, conj_matrix(F, P0, small(up.mat)))
    b = int(B0[0, 1])
    P = np.vstack([e1, F.mul(e2, b)])

    def frame(M):
        return conj_matrix(F, P, small(M))

    Bu = _sign_unipotent(F, frame(u.mat))
    s0 = int(Bu[1, 0])
    # upper root elements x+(alpha^-2j) = up^(g^j) for a Borel element g
    if ak == 1:
        gens_plus = [up]
        params = [1]
    else:
        for _ in range(budget * 4):
            g = h.random_element()
            Bg = frame(g.mat)
            if Bg[1, 0]:
                continue
            al2 = F.mul(int(Bg[0, 0]), int(Bg[0, 0]))
            if degree_over_prime(F, al2) == ak and in_subfield(F, al2, qk):
                break
        else:
            raise SearchBudgetExhausted("no Borel element generating the field")
        gens_plus, params = [], []
        y = up
        inv_al2 = F.inv(al2)
        par = 1
        for j in range(ak):
            gens_plus.append(y)
            params.append(par)
            y = h.conj(y, g)
            par = F.mul(par, inv_al2)
    iso = SL2Iso(h, qk, small, exact, P)
    # memoize x+(c_i) for the subfield basis
    for i, c in enumerate(iso.basis):
        coords = fp_coords(F, params, c)
        out = None
        for y, k in zip(gens_plus, coords):
            if k:
                z = h.power(y, k)
                out = z if out is None else h.mul(out, z)
        iso.plus[i] = out if out is not None else h.one()
    # n0 = x+(t) u x+(t) with t = -1/s0; x-(c) = x+(-c/s0^2)^n0
    t = F.neg(F.inv(s0))
    xt = iso.x_plus(t)
    n0 = h.prod(xt, u, xt)
    s02 = F.mul(s0, s0)
    for i, c in enumerate(iso.basis):
        iso.minus[i] = h.conj(iso.x_plus(F.neg(F.div(c, s02))), n0)
    _certify_sl2(iso, rng)
    return iso


def _certify_sl2(iso: SL2Iso, rng, checks: int = 5) -> None:
    F, h = iso.F, iso.handle
    for i, c in enumerate(iso.basis):
        for sign, tab in ((1, iso.plus), (-1, iso.minus)):
            A = iso.frame(tab[i].mat)
            want = elementary(F, 2, 0, 1, c) if sign > 0 else elementary(F, 2, 1, 0, c)
            if not (np.array_equal(A, want) or (not iso.exact and np.array_equal(F.neg(A), want))):
                raise NotSL2("located root elements have wrong images")
            if not la.is_identity(la.mat_pow(F, tab[i].mat, F.p)):
                raise NotSL2("root element of wrong order")
    for _ in range(checks):
        g = h.random_element()
        A = iso.forward(g)
        for x in A.flat:
            if not in_subfield(F, int(x), iso.qk):
                raise NotSL2("image not defined over the expected field")
        if not np.array_equal(iso.backward(A).mat, g.mat):
            raise NotSL2("round trip failed")
    iso.certified = True


def recognize_sl2(h: GroupHandle, qk: int | None = None, rng: np.random.Generator | None = None,
                  budget: int = 400) -> SL2Iso:
    """Constructive recognition of a group promised to be SL2(qk) or PSL2(qk)."""
    F = h.F
    rng = rng or np.random.default_rng(int(h.rng.integers(1 << 31)))
    qk = qk or F.q
    mats = h.mats()
    if all(la.is_identity(m) for m in mats):
        raise NotSL2("trivial group")
    dims = [2, 3] if F.p != 2 else [2]
    try:
        fac = find_factor(F, mats, dims, rng)
    except NoNaturalFactor as e:
        raise NotSL2(str(e)) from None
    sec = fac.section
    if fac.dim == 2:
        return build_sl2(h, qk, sec.action, True, rng, budget)
    sym = _Sym2(F, list(fac.gens), rng)
    iso = build_sl2(h, qk, lambda M: sym.small(sec.action(M)), False, rng, budget)
    iso.meta["module"] = "adjoint"
    return iso


def sl2_from_action(h: GroupHandle, qk: int, action: Callable[[np.ndarray], np.ndarray],
                    rng: np.random.Generator, budget: int = 400) -> SL2Iso:
    """SL2 frame from a known faithful 2-dimensional action."""
    return build_sl2(h, qk, action, True, rng, budget)


# ------------------------------------------------------------- SL3 frames

def _plane_action(F: Field, rows: np.ndarray):
    """Action on the span of ``rows`` (invariant) in those coordinates."""
    S = la.Subspace.span(F, rows)
    piv = list(S.pivots)
    Rinv_sel = la.inverse(F, rows[:, piv])

    def act(M3):
        img = la.matmul(F, rows, M3)
        return la.matmul(F, img[:, piv], Rinv_sel)
    return act


@dataclass
class SL3Iso:
    """Isomorphism Y -> SL3(q) in the frame (v1, v2, v3)."""

    handle: GroupHandle
    q: int
    section: la.Section
    V: np.ndarray                  # rows v1, v2, v3 in section coordinates
    iso1: SL2Iso                   # K1 on <v1, v2>
    iso3: SL2Iso                   # K3 on <v2, v3>
    rows1: np.ndarray              # plane coordinates of (v1, v2) in iso1's small basis
    rows3: np.ndarray
    certified: bool = False
    _cache: dict = field(default_factory=dict)

    @property
    def F(self) -> Field:
        return self.handle.F

    def forward(self, g: Elem | np.ndarray) -> np.ndarray:
        mat = g.mat if isinstance(g, Elem) else g
        return conj_matrix(self.F, self.V, self.section.action(mat))

    def elementary(self, i: int, j: int, c: int) -> Elem:
        key = (i, j, int(c))
        if key in self._cache:
            return self._cache[key]
        F, h = self.F, self.handle
        if (i, j) == (0, 1):
            y = self.iso1.backward_in(elementary(F, 2, 0, 1, c), self.rows1)
        elif (i, j) == (1, 0):
            y = self.iso1.backward_in(elementary(F, 2, 1, 0, c), self.rows1)
        elif (i, j) == (1, 2):
            y = self.iso3.backward_in(elementary(F, 2, 0, 1, c), self.rows3)
        elif (i, j) == (2, 1):
            y = self.iso3.backward_in(elementary(F, 2, 1, 0, c), self.rows3)
        elif (i, j) == (0, 2):
            y = h.comm(self.elementary(0, 1, c), self.elementary(1, 2, 1))
        else:
            y = h.comm(self.elementary(2, 1, c), self.elementary(1, 0, 1))
        self._cache[key] = y
        return y

    def backward(self, A: np.ndarray) -> Elem:
        h = self.handle
        out = None
        for i, j, c in elementary_decomposition(self.F, A):
            y = self.elementary(i, j, c)
            out = y if out is None else h.mul(out, y)
        return out if out is not None else h.one()


def _rational_transvection(F: Field, iso: SL2Iso, w: np.ndarray) -> Elem:
    """An element of K fixing the line <w> (w in iso small coordinates)."""
    wf = la.matmul(F, w, la.inverse(F, iso.P))
    k = int(np.flatnonzero(wf)[0])
    wf = F.mul(wf, F.inv(int(wf[k])))
    col = np.array([[wf[1]], [F.neg(int(wf[0]))]], dtype=np.int64)
    U = F.add(np.eye(2, dtype=np.int64), F.mul(col, wf[None, :]))
    return iso.backward(U)


def sl3_from_pair(Y: GroupHandle, K1: GroupHandle, K3: GroupHandle, q: int,
                  rng: np.random.Generator, section: la.Section | None = None,
                  budget: int = 400) -> SL3Iso:
    """SL3 frame from two block SL2 subgroups generating Y."""
    F = Y.F
    if section is None:
        fac = find_factor(F, Y.mats(), [3], rng)
        section = fac.section
    act = section.action
    k1 = [act(g.mat) for g in K1.gens]
    k3 = [act(g.mat) for g in K3.gens]
    C1 = la.common_fixed_space(F, k1)
    C3 = la.common_fixed_space(F, k3)
    B1 = la.commutator_space(F, k1)
    B3 = la.commutator_space(F, k3)
    if not (C1.dim == 1 and C3.dim == 1 and B1.dim == 2 and B3.dim == 2):
        raise NotSL3("subgroups do not act as block SL2s")
    L = B1.intersect(B3)
    if L.dim != 1 or not B1.contains(C3.basis[0]) or not B3.contains(C1.basis[0]):
        raise NotSL3("blocks are not in standard position")
    v1, v2, v3 = C3.basis[0], L.basis[0], C1.basis[0]
    # K1 on <v1, v2>, K3 on <v2, v3>
    r1 = np.vstack([v1, v2])
    r3 = np.vstack([v2, v3])
    a1 = _plane_action(F, r1)
    a3 = _plane_action(F, r3)
    iso1 = build_sl2(K1, q, lambda M: a1(act(M)), True, rng, budget)
    iso3 = build_sl2(K3, q, lambda M: a3(act(M)), True, rng, budget)
    # rescale v1 so that a unipotent of K1 fixing v2 sends v1 to v1 + v2
    u1 = _rational_transvection(F, iso1, np.array([0, 1], dtype=np.int64))
    t1 = int(a1(act(u1.mat))[0, 1])
    u3 = _rational_transvection(F, iso3, np.array([1, 0], dtype=np.int64))
    t3 = int(a3(act(u3.mat))[1, 0])
    v1 = F.mul(v1, F.inv(t1))
    v3 = F.mul(v3, F.inv(t3))
    V = np.vstack([v1, v2, v3])
    # plane bases in the (fixed) small coordinates used by iso1/iso3
    rows1 = np.array([[F.inv(t1), 0], [0, 1]], dtype=np.int64)
    rows3 = np.array([[1, 0], [0, F.inv(t3)]], dtype=np.int64)
    iso = SL3Iso(Y, q, section, V, iso1, iso3, rows1, rows3)
    _certify_sl3(iso, rng)
    return iso


def _certify_sl3(iso: SL3Iso, rng, checks: int = 5) -> None:
    F, h = iso.F, iso.handle
    for (i, j) in ((0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)):
        y = iso.elementary(i, j, 1)
        if not np.array_equal(iso.forward(y), elementary(F, 3, i, j, 1)):
            raise NotSL3("elementary preimage has the wrong image")
    for _ in range(checks):
        g = h.random_element()
        A = iso.forward(g)
        for x in A.flat:
            if not in_subfield(F, int(x), iso.q):
                raise NotSL3("image not defined over the expected field")
        if not np.array_equal(iso.backward(A).mat, g.mat):
            raise NotSL3("round trip failed")
    iso.certified = True


def _find_transvection(h: GroupHandle, act, budget: int) -> Elem:
    F = h.F
    for _ in range(budget):
        g = h.random_element()
        n = h.order(g)
        if n % F.p:
            continue
        y = h.power(g, n // F.p)
        A = act(y.mat)
        if la.rank(F, la.minus_identity(F, A)) == 1:
            return y
    raise SearchBudgetExhausted("no transvection found")


def _centre_axis(F: Field, A: np.ndarray) -> tuple[la.Subspace, la.Subspace]:
    N = la.minus_identity(F, A)
    return la.Subspace.span(F, N), la.Subspace.span(F, la.left_kernel(F, N), A.shape[0])


def recognize_sl3(h: GroupHandle, q: int | None = None, rng: np.random.Generator | None = None,
                  K1: GroupHandle | None = None, budget: int = 2000) -> SL3Iso:
    """Constructive recognition of a group promised to be SL3(q) (mod scalars)."""
    F = h.F
    q = q or F.q
    rng = rng or np.random.default_rng(int(h.rng.integers(1 << 31)))
    mats = h.mats()
    if all(la.is_identity(m) for m in mats):
        raise NotSL3("trivial group")
    try:
        fac = find_factor(F, mats, [3], rng)
    except NoNaturalFactor as e:
        raise NotSL3(str(e)) from None
    act = fac.section.action
    if K1 is None:
        t = _find_transvection(h, act, budget)
        T = act(t.mat)
        Ct, At = _centre_axis(F, T)
        block, W, ell = [t], None, None
        for _ in range(budget):
            s = h.conj(t, h.random_element())
            S = act(s.mat)
            Cs, As = _centre_axis(F, S)
            if W is None:
                if not At.contains(Cs.basis[0]) and not As.contains(Ct.basis[0]):
                    W, ell = Ct.sum(Cs), At.intersect(As)
                    block.append(s)
                continue
            if W.contains(Cs.basis[0]) and As.contains(ell.basis[0]):
                block.append(s)
                if len(block) >= 6:
                    break
        if W is None or len(block) < 3:
            raise SearchBudgetExhausted("no block SL2 found")
        K1 = h.subgroup(block)
    k1 = [act(g.mat) for g in K1.gens]
    W = la.commutator_space(F, k1)
    ell = la.common_fixed_space(F, k1)
    if W.dim != 2 or ell.dim != 1:
        raise NotSL3("first block is not an SL2 block")
    for _ in range(budget):
        g = h.random_element()
        G = act(g.mat)
        if W.contains(la.matmul(F, ell.basis[0], G)) and W.image(G).contains(ell.basis[0]):
            K3 = h.subgroup([h.conj(x, g) for x in K1.gens])
            break
    else:
        raise SearchBudgetExhausted("no conjugate block in standard position")
    last = None
    for _ in range(4):
        try:
            return sl3_from_pair(h, K1, K3, q, rng, fac.section)
        except (SearchBudgetExhausted, NotSL2) as e:
            last = e
            K1 = h.subgroup(list(K1.gens) + [h.conj(K1.gens[0], K1.random_element())])
    raise NotSL3(f"could not build an SL3 frame: {last}")


# ------------------------------------------------------------ registry

_REGISTRY: dict[str, Callable] = {"SL2": recognize_sl2, "SL3": recognize_sl3}


def register_oracle(name: str, fn: Callable) -> None:
    _REGISTRY[name] = fn


def oracle(name: str) -> Callable:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise OracleUnavailable(f"no constructive recognition oracle registered for {name}") from None
