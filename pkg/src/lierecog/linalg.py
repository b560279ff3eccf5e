"""Dense exact linear algebra over GF(q).

Matrices are numpy int64 arrays of encoded field elements and act on row
vectors from the right (``v -> v @ g``), so group products compose left to
right.  The field is always passed explicitly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import poly
from .errors import BudgetExceeded, DimensionMismatch, NoInvertibleSolution
from .gf import Field, field_create

_FLOAT_EXACT = 2.0 ** 52


# ----------------------------------------------------------------- products

def matmul(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Product of encoded matrices (or vector @ matrix)."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    p = F.p
    k = A.shape[-1]
    if F.a == 1:
        if k * (p - 1) ** 2 < _FLOAT_EXACT:
            r = A.astype(np.float64) @ B.astype(np.float64)
            return np.remainder(r, p).astype(np.int64)
        return (A @ B) % p
    a = F.a
    DA = F.digits(A).astype(np.float64)
    DB = F.digits(B).astype(np.float64)
    acc = None
    for i in range(a):
        for j in range(a):
            prod = DA[..., i] @ DB[..., j]
            if acc is None:
                acc = np.zeros(prod.shape + (2 * a - 1,), dtype=np.float64)
            acc[..., i + j] += prod
    acc = np.remainder(acc, p).astype(np.int64)
    red = acc @ F._red % p
    return red @ F._pw


def identity(F: Field, d: int) -> np.ndarray:
    return np.eye(d, dtype=np.int64)


def is_identity(M: np.ndarray) -> bool:
    d = M.shape[0]
    return bool(np.array_equal(M, np.eye(d, dtype=np.int64)))


def is_scalar(M: np.ndarray) -> bool:
    c = M[0, 0]
    d = M.shape[0]
    return bool(c != 0 and np.array_equal(M, c * np.eye(d, dtype=np.int64)))


def mat_sub(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return F.sub(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))


def mat_add(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return F.add(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))


def minus_identity(F: Field, g: np.ndarray) -> np.ndarray:
    d = g.shape[0]
    r = g.copy()
    idx = np.arange(d)
    r[idx, idx] = F.sub(r[idx, idx], np.ones(d, dtype=np.int64))
    return r


def mat_pow(F: Field, g: np.ndarray, e: int) -> np.ndarray:
    if e < 0:
        g = inverse(F, g)
        e = -e
    result = identity(F, g.shape[0])
    base = g
    while e:
        if e & 1:
            result = matmul(F, result, base)
        e >>= 1
        if e:
            base = matmul(F, base, base)
    return result


def transpose(M: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(M.T)


def kron(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    out = F.mul(A[:, None, :, None], B[None, :, None, :])
    return out.reshape(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])


def frobenius_matrix(F: Field, M: np.ndarray, i: int = 1) -> np.ndarray:
    return F.frobenius(M, i) if i % F.a else M.copy()


# --------------------------------------------------------------- elimination

def rref(F: Field, M: np.ndarray, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; pivots searched only in the first ``ncols`` columns.

    Returns all rows (zero rows at the bottom) and the pivot columns.
    """
    M = np.array(M, dtype=np.int64, copy=True)
    nrows = M.shape[0]
    ncols = M.shape[1] if ncols is None else ncols
    r = 0
    pivots: list[int] = []
    prime = F.a == 1
    p = F.p
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(M[r:, c])
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        lead = int(M[r, c])
        if lead != 1:
            M[r] = F.mul(M[r], F.inv(lead))
        col = M[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if len(rows):
            if prime:
                M[rows] = (M[rows] - col[rows, None] * M[r][None, :]) % p
            else:
                M[rows] = F.sub(M[rows], F.mul(col[rows, None], M[r][None, :]))
        pivots.append(c)
        r += 1
    return M, pivots


def rank(F: Field, M: np.ndarray) -> int:
    return len(rref(F, M)[1])


def inverse(F: Field, A: np.ndarray) -> np.ndarray:
    d = A.shape[0]
    aug = np.hstack([np.asarray(A, dtype=np.int64), np.eye(d, dtype=np.int64)])
    R, piv = rref(F, aug, ncols=d)
    if len(piv) < d:
        raise ZeroDivisionError("singular matrix")
    return R[:, d:].copy()


def left_kernel(F: Field, M: np.ndarray) -> np.ndarray:
    """Basis (rows, in rref) of {v : v @ M = 0}."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    aug = np.hstack([M, np.eye(n, dtype=np.int64)])
    R, piv = rref(F, aug, ncols=M.shape[1])
    K = R[len(piv):, M.shape[1]:]
    return rref(F, K)[0][: n - len(piv)] if len(K) else np.zeros((0, n), dtype=np.int64)


def right_kernel(F: Field, M: np.ndarray) -> np.ndarray:
    """Basis rows of {x : M @ x = 0}."""
    return left_kernel(F, transpose(np.asarray(M, dtype=np.int64)))


def solve_left(F: Field, A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Some x with x @ A = b, or None."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    aug = np.hstack([A, np.eye(n, dtype=np.int64)])
    R, piv = rref(F, aug, ncols=A.shape[1])
    E, T = R[: len(piv), : A.shape[1]], R[: len(piv), A.shape[1]:]
    coeff = np.asarray(b, dtype=np.int64)[piv]
    resid = F.sub(np.asarray(b, dtype=np.int64), matmul(F, coeff, E))
    if np.any(resid):
        return None
    return matmul(F, coeff, T)


# ----------------------------------------------------------------- subspaces

@dataclass(frozen=True)
class Subspace:
    """Row space held as a canonical reduced echelon basis."""

    field: Field
    basis: np.ndarray
    pivots: tuple[int, ...]
    ambient: int

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @classmethod
    def span(cls, F: Field, rows: np.ndarray, ambient: int | None = None) -> "Subspace":
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim == 1:
            rows = rows[None, :]
        amb = rows.shape[1] if ambient is None else ambient
        if rows.shape[0] == 0:
            return cls(F, np.zeros((0, amb), dtype=np.int64), (), amb)
        R, piv = rref(F, rows)
        return cls(F, R[: len(piv)].copy(), tuple(piv), amb)

    def coordinates(self, v: np.ndarray) -> np.ndarray:
        """Coordinates of vectors in the span (assumes membership)."""
        return np.asarray(v)[..., list(self.pivots)]

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        if self.dim == 0:
            return v.copy()
        return self.field.sub(v, matmul(self.field, v[..., list(self.pivots)], self.basis))

    def contains(self, v: np.ndarray) -> bool:
        return not np.any(self.reduce(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def intersect(self, other: "Subspace") -> "Subspace":
        F = self.field
        if self.dim == 0 or other.dim == 0:
            return Subspace.span(F, np.zeros((0, self.ambient), dtype=np.int64), self.ambient)
        stacked = np.vstack([self.basis, other.basis])
        K = left_kernel(F, stacked)
        vecs = matmul(F, K[:, : self.dim], self.basis) if len(K) else np.zeros((0, self.ambient), dtype=np.int64)
        return Subspace.span(F, vecs, self.ambient)

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.field, np.vstack([self.basis, other.basis]), self.ambient)

    def image(self, g: np.ndarray) -> "Subspace":
        return Subspace.span(self.field, matmul(self.field, self.basis, g), self.ambient)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and np.array_equal(self.basis, other.basis))

    def __hash__(self) -> int:
        return hash((self.ambient, self.basis.tobytes()))


def full_space(F: Field, d: int) -> Subspace:
    return Subspace(F, np.eye(d, dtype=np.int64), tuple(range(d)), d)


def common_fixed_space(F: Field, gens: Sequence[np.ndarray]) -> Subspace:
    """{v : v g = v for all g}."""
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    if not gens:
        raise DimensionMismatch("no generators")
    d = gens[0].shape[0]
    if any(g.shape != (d, d) for g in gens):
        raise DimensionMismatch("generators differ in dimension")
    M = np.hstack([minus_identity(F, g) for g in gens])
    return Subspace.span(F, left_kernel(F, M), d)


def commutator_space(F: Field, gens: Sequence[np.ndarray]) -> Subspace:
    """[V, G] = span of v(g - 1)."""
    d = gens[0].shape[0]
    rows = np.vstack([minus_identity(F, g) for g in gens])
    return Subspace.span(F, rows, d)


def eigenspace(F: Field, g: np.ndarray, lam: int) -> Subspace:
    d = g.shape[0]
    M = g.copy()
    idx = np.arange(d)
    M[idx, idx] = F.sub(M[idx, idx], np.full(d, lam, dtype=np.int64))
    return Subspace.span(F, left_kernel(F, M), d)


def spin(F: Field, v: np.ndarray, gens: Sequence[np.ndarray]) -> Subspace:
    """Smallest subspace containing the rows of v and invariant under gens."""
    v = np.asarray(v, dtype=np.int64)
    if v.ndim == 1:
        v = v[None, :]
    if not np.any(v):
        raise ValueError("cannot spin the zero vector")
    d = v.shape[1]
    S = Subspace.span(F, v, d)
    new = S.basis
    while new.shape[0]:
        images = np.vstack([matmul(F, new, g) for g in gens])
        red = S.reduce(images)
        if not np.any(red):
            break
        R, piv = rref(F, red)
        new = R[: len(piv)]
        S = Subspace.span(F, np.vstack([S.basis, new]), d)
        if S.dim == d:
            break
    return S


# ------------------------------------------------------------- intertwiners

def solve_intertwiner(F: Field, pairs: Sequence[tuple[np.ndarray, np.ndarray]],
                      rng: np.random.Generator | None = None, trials: int = 20,
                      require_invertible: bool = True):
    """Basis of {T : T A_i = B_i T} and an invertible element of it.

    Returns ``(basis, witness)``; raises NoInvertibleSolution when no
    invertible witness turns up within ``trials`` random combinations.
    """
    rng = rng or np.random.default_rng(0)
    d = pairs[0][0].shape[0]
    eye = np.eye(d, dtype=np.int64)
    blocks = []
    for A, B in pairs:
        # vec_row(T A) = vec_row(T) (I kron A);  vec_row(B T) = vec_row(T) (B^T kron I)
        blocks.append(F.sub(kron(F, eye, np.asarray(A, dtype=np.int64)),
                            kron(F, transpose(np.asarray(B, dtype=np.int64)), eye)))
    M = np.hstack(blocks)
    K = left_kernel(F, M)
    basis = [row.reshape(d, d) for row in K]
    witness = None
    if basis:
        for t in range(trials):
            if t == 0 and len(basis) == 1:
                cand = basis[0]
            else:
                coeffs = F.random(rng, size=len(basis))
                cand = np.zeros((d, d), dtype=np.int64)
                for c, b in zip(coeffs, basis):
                    cand = F.add(cand, F.mul(b, int(c)))
            if rank(F, cand) == d:
                witness = cand
                break
    if witness is None and require_invertible:
        raise NoInvertibleSolution("actions are not equivalent")
    return basis, witness


# ---------------------------------------------------- characteristic polynomial

def charpoly(F: Field, A: np.ndarray, rng: np.random.Generator | None = None) -> np.ndarray:
    """Characteristic polynomial via Krylov sequences on successive quotients."""
    rng = rng or np.random.default_rng(12345)
    A = np.asarray(A, dtype=np.int64)
    d = A.shape[0]
    U = Subspace.span(F, np.zeros((0, d), dtype=np.int64), d)
    result = np.array([1], dtype=np.int64)
    unit = 0
    while U.dim < d:
        # deterministic choice first: unit vectors outside U, then random
        v = None
        while unit < d:
            e = np.zeros(d, dtype=np.int64)
            e[unit] = 1
            unit += 1
            if np.any(U.reduce(e)):
                v = e
                break
        if v is None:
            v = F.random(rng, size=d)
        m, vecs = _relative_minpoly(F, A, v, U)
        result = poly.mul(F, result, m)
        U = Subspace.span(F, np.vstack([U.basis, vecs]), d)
    return result


def _relative_minpoly(F: Field, A: np.ndarray, v: np.ndarray, U: Subspace):
    """Monic m of least degree with v m(A) in U (U invariant), plus Krylov vectors."""
    d = A.shape[0]
    w = U.reduce(v)
    E = np.zeros((0, d), dtype=np.int64)
    C = np.zeros((0, 0), dtype=np.int64)
    pivots: list[int] = []
    krylov = []
    while True:
        k = len(krylov)
        # express w in terms of current echelon rows
        if E.shape[0]:
            coeff = w[pivots]
            r = F.sub(w, matmul(F, coeff, E))
        else:
            coeff = np.zeros(0, dtype=np.int64)
            r = w.copy()
        if not np.any(r):
            comb = matmul(F, coeff, C) if len(coeff) else np.zeros(0, dtype=np.int64)
            m = np.zeros(k + 1, dtype=np.int64)
            m[:k] = F.neg(comb)
            m[k] = 1
            return m, np.array(krylov, dtype=np.int64).reshape(k, d)
        krylov.append(w)
        # new row: r = w - coeff E ; in krylov coordinates: e_k - coeff C
        crow = np.zeros(k + 1, dtype=np.int64)
        crow[k] = 1
        if len(coeff):
            crow[:k] = F.neg(matmul(F, coeff, C))
        C = np.hstack([C, np.zeros((C.shape[0], 1), dtype=np.int64)]) if C.size or C.shape[0] else np.zeros((0, k + 1), dtype=np.int64)
        piv = int(np.flatnonzero(r)[0])
        inv = F.inv(int(r[piv]))
        r = F.mul(r, inv)
        crow = F.mul(crow, inv)
        if E.shape[0]:
            col = E[:, piv].copy()
            rows = np.flatnonzero(col)
            if len(rows):
                E[rows] = F.sub(E[rows], F.mul(col[rows, None], r[None, :]))
                C[rows] = F.sub(C[rows], F.mul(col[rows, None], crow[None, :]))
        E = np.vstack([E, r])
        C = np.vstack([C, crow])
        pivots.append(piv)
        w = U.reduce(matmul(F, w, A))


def minpoly_vector(F: Field, A: np.ndarray, v: np.ndarray) -> np.ndarray:
    d = A.shape[0]
    return _relative_minpoly(F, A, np.asarray(v, dtype=np.int64),
                             Subspace.span(F, np.zeros((0, d), dtype=np.int64), d))[0]


def poly_of_matrix(F: Field, f: np.ndarray, A: np.ndarray) -> np.ndarray:
    d = A.shape[0]
    f = poly.trim(f)
    res = np.zeros((d, d), dtype=np.int64)
    idx = np.arange(d)
    for c in f[::-1]:
        res = matmul(F, res, A)
        if c:
            res[idx, idx] = F.add(res[idx, idx], np.full(d, int(c), dtype=np.int64))
    return res


# -------------------------------------------------------------------- sections

@dataclass(frozen=True)
class Section:
    """A subquotient of a module, acting as ``rows @ g @ proj``."""

    field: Field
    rows: np.ndarray   # k x d
    proj: np.ndarray   # d x k

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    def action(self, g: np.ndarray) -> np.ndarray:
        F = self.field
        return matmul(F, matmul(F, self.rows, g), self.proj)

    def compose(self, inner: "Section") -> "Section":
        """Section of a section: inner acts on our k-dimensional space."""
        F = self.field
        return Section(F, matmul(F, inner.rows, self.rows), matmul(F, self.proj, inner.proj))


def identity_section(F: Field, d: int) -> Section:
    return Section(F, np.eye(d, dtype=np.int64), np.eye(d, dtype=np.int64))


def sub_and_quotient(F: Field, S: Subspace) -> tuple[Section, Section]:
    """Sections for an invariant subspace S and for V/S."""
    d = S.ambient
    piv = list(S.pivots)
    sel = np.zeros((d, S.dim), dtype=np.int64)
    sel[piv, np.arange(S.dim)] = 1
    sub = Section(F, S.basis.copy(), sel)
    nonpiv = [j for j in range(d) if j not in set(piv)]
    qrows = np.zeros((len(nonpiv), d), dtype=np.int64)
    qrows[np.arange(len(nonpiv)), nonpiv] = 1
    red = F.sub(np.eye(d, dtype=np.int64), matmul(F, sel, S.basis))
    quo = Section(F, qrows, red[:, nonpiv].copy())
    return sub, quo


# ----------------------------------------------------------------- Meataxe

def _random_algebra_element(F: Field, gens: Sequence[np.ndarray], words: list[np.ndarray],
                            rng: np.random.Generator) -> np.ndarray:
    # grow the word pool by a random product, then take a random combination
    i, j = rng.integers(len(words)), rng.integers(len(words))
    words.append(matmul(F, words[i], words[j]))
    if len(words) > 12:
        words.pop(len(gens))
    d = gens[0].shape[0]
    A = np.zeros((d, d), dtype=np.int64)
    for w in words:
        c = F.random(rng)
        if c:
            A = F.add(A, F.mul(w, c))
    return A


def find_submodule(F: Field, gens: Sequence[np.ndarray], rng: np.random.Generator,
                   max_tries: int = 50) -> Subspace | None:
    """Proper nonzero invariant subspace, or None when the module is irreducible.

    Holt--Rees style: nullspace vectors of f(A) for an irreducible factor f of
    the characteristic polynomial of a random algebra element A are spun; a
    factor with nullity deg(f) whose spins fail both for the module and its
    dual certifies irreducibility (Norton's criterion).
    """
    d = gens[0].shape[0]
    if d == 1:
        return None
    gens_t = [transpose(g) for g in gens]
    words = [g for g in gens]
    fallback = 0
    for _ in range(max_tries):
        A = _random_algebra_element(F, gens, words, rng)
        cp = charpoly(F, A, rng)
        facs = poly.factor(F, cp, rng, max_degree=max(1, min(d, 12)))
        facs.sort(key=lambda t: (poly.deg(t[0]), t[1]))
        for f, mult in facs[:3]:
            fA = poly_of_matrix(F, f, A)
            N = left_kernel(F, fA)
            if N.shape[0] == 0:
                continue
            v = N[rng.integers(N.shape[0])] if N.shape[0] > 1 else N[0]
            S = spin(F, v, gens)
            if S.dim < d:
                return S
            if N.shape[0] == poly.deg(f):
                Nt = left_kernel(F, transpose(fA))
                St = spin(F, Nt[0], gens_t)
                if St.dim < d:
                    return Subspace.span(F, left_kernel(F, transpose(St.basis)), d)
                return None
            # not a good factor: try a couple of random kernel vectors both ways
            for _ in range(2):
                v = matmul(F, F.random(rng, size=N.shape[0]), N)
                if np.any(v):
                    S = spin(F, v, gens)
                    if S.dim < d:
                        return S
            Nt = left_kernel(F, transpose(fA))
            for _ in range(2):
                w = matmul(F, F.random(rng, size=Nt.shape[0]), Nt)
                if np.any(w):
                    St = spin(F, w, gens_t)
                    if St.dim < d:
                        return Subspace.span(F, left_kernel(F, transpose(St.basis)), d)
            fallback += 1
        if fallback >= 25:
            # no factor of nullity deg(f) turned up; the module is irreducible
            # with high probability (not absolutely irreducible)
            return None
    raise BudgetExceeded("chop could not decide irreducibility")


@dataclass(frozen=True)
class Factor:
    section: Section
    gens: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.section.dim


def chop(F: Field, gens: Sequence[np.ndarray], rng: np.random.Generator | None = None,
         stop_dims: Iterable[int] | None = None) -> list[Factor]:
    """Composition factors (bottom first) as sections with induced generator actions.

    With ``stop_dims`` the chop stops early once a factor of one of those
    dimensions has been produced (used when only a natural module is wanted).
    """
    rng = rng or np.random.default_rng(0)
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    d = gens[0].shape[0]
    wanted = set(stop_dims) if stop_dims is not None else None
    out: list[Factor] = []
    stack = [(identity_section(F, d), tuple(gens))]
    while stack:
        sec, gs = stack.pop()
        S = find_submodule(F, gs, rng)
        if S is None:
            out.append(Factor(sec, gs))
            if wanted is not None and sec.dim in wanted:
                return out
            continue
        sub, quo = sub_and_quotient(F, S)
        # push quotient first so the bottom factor is produced first
        for part in (quo, sub):
            newsec = sec.compose(part)
            stack.append((newsec, tuple(part.action(g) for g in gs)))
    return out


# ------------------------------------------------------------- file format

def write_matrices(path, F: Field, mats: Sequence[np.ndarray]) -> None:
    mats = list(mats)
    d = mats[0].shape[0] if mats else 0
    with open(path, "w") as fh:
        fh.write(f"{F.p} {F.a} {d} {len(mats)}\n")
        for M in mats:
            for row in M:
                fh.write(" ".join(str(int(x)) for x in row) + "\n")


def read_matrices(path) -> tuple[Field, list[np.ndarray]]:
    with open(path) as fh:
        header = fh.readline().split()
        p, a, d, n = (int(x) for x in header)
        data = np.loadtxt(fh, dtype=np.int64, ndmin=2) if n and d else np.zeros((0, 0), dtype=np.int64)
    F = field_create(p, a)
    mats = [data[i * d: (i + 1) * d].copy() for i in range(n)]
    return F, mats
