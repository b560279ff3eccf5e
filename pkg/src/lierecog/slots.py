"""Standard-generator slots and the formulas that fill compound slots.

A slot is a pair ``(root, i)`` standing for ``x_root(c_i)`` where ``c_i``
is the i-th F_p-basis element of the root's parameter field.  Parameter
fields are GF(q) except for short roots of the twisted types, which use
GF(q^2) (2E6) or GF(q^3) (3D4).  All parameters live in one ambient
field ``space.F``; GF(q) sits inside it via its Conway-compatible
embedding.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Protocol

import numpy as np

from .errors import UnsupportedType
from .gf import Field, field_create, parse_field_spec
from .rootdata import Root, compound_definitions, generator_roots, root_system

TYPES = ("G2", "F4", "E6", "E7", "E8", "3D4", "2E6")
TWIST = {"3D4": 3, "2E6": 2}
BASE = {"3D4": "G2", "2E6": "F4"}

Slot = tuple[Root, int]


def normalize_type(typ: str) -> str:
    t = typ.upper().replace("^", "")
    if t not in TYPES:
        raise UnsupportedType(f"unsupported type {typ!r}")
    return t


@dataclass
class SlotSpace:
    """Slots of one (type, q) with their parameter bases."""

    type: str
    q: int
    p: int
    a: int
    F: Field                      # ambient field of all parameters
    k: int                        # 1, 2 or 3
    roots: list[Root]
    long: dict[Root, bool]
    bases: dict[Root, tuple[int, ...]]
    _coords: dict[int, dict[int, tuple[int, ...]]] = field(default_factory=dict, repr=False)

    @property
    def rootsys(self):
        return root_system(BASE.get(self.type, self.type))

    def degree(self, r: Root) -> int:
        return len(self.bases[r])

    def is_small_field(self, r: Root) -> bool:
        return self.k == 1 or self.long[r]

    def slots(self) -> list[Slot]:
        return [(r, i) for r in self.roots for i in range(self.degree(r))]

    def fundamental_roots(self) -> list[Root]:
        R = self.rootsys
        pos = [R.simple(i) for i in range(1, R.rank + 1)]
        return pos + [R.neg(r) for r in pos]

    def subfield_basis(self) -> tuple[int, ...]:
        if self.k == 1:
            return self.F.basis
        nu = self.F.pow(self.F.omega, (self.F.q - 1) // (self.q - 1))
        return tuple(self.F.pow(nu, i) for i in range(self.a))

    def coords(self, r: Root, value: int) -> tuple[int, ...]:
        """Coordinates of ``value`` over the basis of r's parameter field."""
        value = int(value)
        if not self.is_small_field(r) or self.k == 1:
            d = self.F.digits(value)
            return tuple(int(x) for x in np.atleast_1d(d))
        table = self._coords.setdefault(0, {})
        if not table:
            basis = self.subfield_basis()
            for idx in range(self.q):
                ks = [(idx // self.p ** i) % self.p for i in range(self.a)]
                v = 0
                for kk, b in zip(ks, basis):
                    v = self.F.add(v, self.F.mul(kk, b))
                table[int(v)] = tuple(ks)
        try:
            return table[value]
        except KeyError:
            raise ValueError(f"{value} is not in GF({self.q})") from None

    def word(self, r: Root, value: int) -> list[tuple[Slot, int]]:
        """x_r(value) as a product of slot powers (linearity convention)."""
        return [((r, i), k) for i, k in enumerate(self.coords(r, value)) if k]

    def frob(self, x: int, j: int) -> int:
        """x^(q^j)."""
        return self.F.frobenius(x, self.a * j)


@lru_cache(maxsize=None)
def slot_space(typ: str, q: int) -> SlotSpace:
    typ = normalize_type(typ)
    p, a = parse_field_spec(q)
    q = p ** a
    k = TWIST.get(typ, 1)
    F = field_create(p, a * k)
    R = root_system(BASE.get(typ, typ))
    roots = generator_roots(typ)
    long = {r: R.is_long(r) for r in roots}
    sp = SlotSpace(typ, q, p, a, F, k, roots, long, {})
    small = sp.subfield_basis()
    for r in roots:
        sp.bases[r] = small if (k == 1 or long[r]) else F.basis
    return sp


class GroupOps(Protocol):
    def mul(self, x, y): ...
    def inv(self, x): ...
    def one(self): ...


def power(ops: GroupOps, x, e: int):
    if e < 0:
        x, e = ops.inv(x), -e
    result = None
    base = x
    while e:
        if e & 1:
            result = base if result is None else ops.mul(result, base)
        e >>= 1
        if e:
            base = ops.mul(base, base)
    return ops.one() if result is None else result


def eval_word(ops: GroupOps, assignment: dict, word, p: int):
    out = None
    for slot, e in word:
        e %= p
        if not e:
            continue
        g = power(ops, assignment[slot], e)
        out = g if out is None else ops.mul(out, g)
    return ops.one() if out is None else out


def x_elem(ops: GroupOps, sp: SlotSpace, assignment: dict, r: Root, value: int):
    return eval_word(ops, assignment, sp.word(r, value), sp.p)


def n_elem(ops: GroupOps, sp: SlotSpace, assignment: dict, r: Root, c: int = 1):
    """n_r(c) = x_r(c) x_-r(-c^-1) x_r(c)."""
    F = sp.F
    R = sp.rootsys
    xr = x_elem(ops, sp, assignment, r, c)
    xm = x_elem(ops, sp, assignment, R.neg(r), F.neg(F.inv(c)))
    return ops.mul(ops.mul(xr, xm), xr)


def h_elem(ops: GroupOps, sp: SlotSpace, assignment: dict, r: Root, lam: int):
    """h_r(lam) = n_r(lam^-1) n_r(1)^-1."""
    F = sp.F
    return ops.mul(n_elem(ops, sp, assignment, r, F.inv(lam)),
                   ops.inv(n_elem(ops, sp, assignment, r, 1)))


def build_slots(sp: SlotSpace, fund: dict, ops: GroupOps) -> dict:
    """Fill every compound slot from the fundamental ones by the standard formulas."""
    defs = compound_definitions(sp.type)
    R = sp.rootsys
    out = dict(fund)
    F = sp.F
    one = 1
    minus_one = F.neg(1)
    ncache = {}

    def n_simple(kk: int):
        if kk not in ncache:
            ncache[kk] = n_elem(ops, sp, out, R.simple(kk), 1)
        return ncache[kk]

    order = sorted(defs, key=lambda r: (abs(sum(r)), sum(r) < 0))
    for root in order:
        d = defs[root]
        for i, c in enumerate(sp.bases[root]):
            if d[0] == "comm":
                _, r, s, e = d
                A = x_elem(ops, sp, out, r, c)
                B = x_elem(ops, sp, out, s, one if e == 1 else minus_one)
                val = ops.mul(ops.mul(ops.inv(A), ops.inv(B)), ops.mul(A, B))
            else:
                _, r, e, kk = d
                cc = c if e == 1 else F.neg(c)
                A = x_elem(ops, sp, out, r, cc)
                n = n_simple(kk)
                val = ops.mul(ops.mul(ops.inv(n), A), n)
            out[(root, i)] = val
    return out
