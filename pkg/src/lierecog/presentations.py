"""Executable rank-2 presentations on the standard-generator slots.

Each relation is a word in slot powers that must evaluate to the
identity.  The rank-2 families are stored as data (root, coefficient,
exponents of c and d); for untwisted types every family is re-derived
from the Chevalley commutator formula and any disagreement is resolved
in favour of the derived form and flagged on the relation.
"""
from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .errors import MissingSlot, UnsupportedType
from .rootdata import Root, dynkin_edges, root_system
from .slots import BASE, TWIST, SlotSpace, normalize_type, slot_space

# ------------------------------------------------------------ family data
# A term (root, coef, i, j) stands for x_root(coef * c^i * d^j).
# Roots in G2 are written as (coefficient of alpha, coefficient of beta).

G2_FAMILIES = {
    1: ((1, 0), (0, 1), [((1, 1), 1, 1, 1), ((1, 2), -1, 1, 2), ((1, 3), 1, 1, 3), ((2, 3), 1, 2, 3)]),
    2: ((1, 0), (-1, -1), [((0, -1), -1, 1, 1), ((-1, -2), 1, 1, 2), ((-2, -3), 1, 1, 3), ((-1, -3), -1, 2, 3)]),
    3: ((1, 3), (0, -1), [((1, 2), -1, 1, 1), ((1, 1), -1, 1, 2), ((1, 0), 1, 1, 3), ((2, 3), -1, 2, 3)]),
    4: ((1, 3), (-1, -2), [((0, 1), 1, 1, 1), ((-1, -1), -1, 1, 2), ((-2, -3), 1, 1, 3), ((-1, 0), 1, 2, 3)]),
    5: ((2, 3), (-1, -1), [((1, 2), -1, 1, 1), ((0, 1), -1, 1, 2), ((-1, 0), -1, 1, 3), ((1, 3), 1, 2, 3)]),
    6: ((2, 3), (-1, -2), [((1, 1), 1, 1, 1), ((0, -1), 1, 1, 2), ((-1, -3), -1, 1, 3), ((1, 0), -1, 2, 3)]),
    7: ((-1, 0), (0, -1), [((-1, -1), -1, 1, 1), ((-1, -2), -1, 1, 2), ((-1, -3), -1, 1, 3), ((-2, -3), 1, 2, 3)]),
    8: ((-1, 0), (1, 1), [((0, 1), 1, 1, 1), ((1, 2), 1, 1, 2), ((2, 3), -1, 1, 3), ((1, 3), -1, 2, 3)]),
    9: ((-1, -3), (0, 1), [((-1, -2), 1, 1, 1), ((-1, -1), 1, 1, 2), ((-1, 0), -1, 1, 3), ((-2, -3), -1, 2, 3)]),
    10: ((-1, -3), (1, 2), [((0, -1), -1, 1, 1), ((1, 1), -1, 1, 2), ((2, 3), -1, 1, 3), ((1, 0), 1, 2, 3)]),
    11: ((-2, -3), (1, 1), [((-1, -2), 1, 1, 1), ((0, -1), -1, 1, 2), ((1, 0), 1, 1, 3), ((-1, -3), 1, 2, 3)]),
    12: ((-2, -3), (1, 2), [((-1, -1), -1, 1, 1), ((0, 1), 1, 1, 2), ((1, 3), 1, 1, 3), ((-1, 0), -1, 2, 3)]),
    13: ((0, 1), (1, 1), [((1, 2), 2, 1, 1), ((1, 3), -3, 2, 1), ((2, 3), -3, 1, 2)]),
    14: ((0, 1), (-1, -2), [((-1, -1), -2, 1, 1), ((-1, 0), 3, 2, 1), ((-2, -3), 3, 1, 2)]),
    15: ((1, 1), (-1, -2), [((0, -1), 2, 1, 1), ((1, 0), -3, 2, 1), ((-1, -3), -3, 1, 2)]),
    16: ((1, 2), (0, -1), [((1, 1), -2, 1, 1), ((2, 2), -3, 2, 1), ((1, 0), -3, 1, 2)]),
    17: ((1, 2), (-1, -1), [((0, 1), 2, 1, 1), ((1, 3), 3, 2, 1), ((-1, 0), 3, 1, 2)]),
    18: ((0, -1), (-1, -1), [((-1, -2), -2, 1, 1), ((-1, -3), -3, 2, 1), ((-2, -3), -3, 1, 2)]),
    19: ((1, 0), (1, 3), [((2, 3), 1, 1, 1)]),
    20: ((1, 0), (-2, -3), [((-1, -3), -1, 1, 1)]),
    21: ((1, 3), (-2, -3), [((-1, 0), 1, 1, 1)]),
    22: ((2, 3), (-1, 0), [((1, 3), -1, 1, 1)]),
    23: ((2, 3), (-1, -3), [((1, 0), 1, 1, 1)]),
    24: ((-1, 0), (-1, -3), [((-2, -3), -1, 1, 1)]),
    25: ((0, 1), (1, 2), [((1, 3), 3, 1, 1)]),
    26: ((0, 1), (-1, -1), [((-1, 0), 3, 1, 1)]),
    27: ((1, 1), (1, 2), [((2, 3), 3, 1, 1)]),
    28: ((1, 1), (0, -1), [((1, 0), 3, 1, 1)]),
    29: ((0, -1), (-1, -2), [((-1, -3), -3, 1, 1)]),
    30: ((-1, -1), (-1, -2), [((-2, -3), -3, 1, 1)]),
}

# F4 roots over the simple roots 1..4; "23" = a2+a3, "233" = a2+2a3
_2, _3 = (0, 1, 0, 0), (0, 0, 1, 0)
_23, _233 = (0, 1, 1, 0), (0, 1, 2, 0)


def _n(r):
    return tuple(-x for x in r)


F4_FAMILIES = {
    1: (_2, _3, [(_23, 1, 1, 1), (_233, 1, 1, 2)]),
    2: (_2, _n(_23), [(_n(_3), -1, 1, 1), (_n(_233), -1, 1, 2)]),
    3: (_n(_2), _23, [(_3, 1, 1, 1), (_233, -1, 1, 2)]),
    4: (_n(_2), _n(_3), [(_n(_23), -1, 1, 1), (_n(_233), 1, 1, 2)]),
    5: (_233, _n(_3), [(_23, 1, 1, 1), (_2, 1, 1, 2)]),
    6: (_233, _n(_23), [(_3, -1, 1, 1), (_n(_2), -1, 1, 2)]),
    7: (_n(_233), _23, [(_n(_3), 1, 1, 1), (_2, -1, 1, 2)]),
    8: (_n(_233), _3, [(_n(_23), -1, 1, 1), (_n(_2), 1, 1, 2)]),
    9: (_23, _3, [(_233, 2, 1, 1)]),
    10: (_n(_23), _n(_3), [(_n(_233), -2, 1, 1)]),
    11: (_23, _n(_3), [(_2, 2, 1, 1)]),
    12: (_3, _n(_23), [(_n(_2), 2, 1, 1)]),
}


def _edge_families(r: Root, s: Root, R, which=(1, 2, 3, 4, 5, 6)):
    rs = R.add(r, s)
    nr, ns, nrs = R.neg(r), R.neg(s), R.neg(rs)
    fam = {
        1: (r, s, [(rs, 1, 1, 1)]),
        2: (nr, ns, [(nrs, -1, 1, 1)]),
        3: (r, nrs, [(ns, -1, 1, 1)]),
        4: (s, nrs, [(nr, 1, 1, 1)]),
        5: (nr, rs, [(s, 1, 1, 1)]),
        6: (ns, rs, [(r, -1, 1, 1)]),
    }
    return {k: fam[k] for k in which}


# ----------------------------------------------------- twisted value rules
# A monomial is (coef, ((var, frobenius power), ...)) with var in "cd";
# a value is a sum of monomials.

def _plain(coef: int, i: int, j: int):
    return [(coef, (("c", 0),) * i + (("d", 0),) * j)]


def _twisted_value(typ: str, family: int, coef: int, i: int, j: int):
    """Value of a stored term once the Frobenius twists of the twisted types are applied."""
    sgn = 1 if coef > 0 else -1
    if typ == "2E6":
        if 1 <= family <= 4:
            if (i, j) == (1, 2):
                return [(sgn, (("c", 0), ("d", 0), ("d", 1)))]
            return _plain(coef, i, j)
        if 5 <= family <= 8:
            if (i, j) == (1, 1):
                return [(coef, (("c", 0), ("d", 1)))]
            if (i, j) == (1, 2):
                return [(sgn, (("c", 0), ("d", 0), ("d", 1)))]
        if family in (9, 10):
            return [(sgn, (("c", 0), ("d", 1))), (sgn, (("c", 1), ("d", 0)))]
        if family in (11, 12):
            return [(sgn, (("c", 0), ("d", 0))), (sgn, (("c", 1), ("d", 1)))]
        return _plain(coef, i, j)
    if typ == "3D4":
        if 1 <= family <= 12:
            if (i, j) == (1, 2):
                return [(sgn, (("c", 0), ("d", 1), ("d", 2)))]
            if (i, j) == (1, 3):
                return [(sgn, (("c", 0), ("d", 0), ("d", 1), ("d", 2)))]
            if (i, j) == (2, 3):
                return [(sgn, (("c", 0), ("c", 0), ("d", 0), ("d", 1), ("d", 2)))]
            return _plain(coef, i, j)
        if 13 <= family <= 18:
            if (i, j) == (1, 1):
                return [(sgn, (("c", 1), ("d", 2))), (sgn, (("c", 2), ("d", 1)))]
            if (i, j) == (2, 1):
                return [(sgn, (("c", 0), ("c", 1), ("d", 2))), (sgn, (("c", 1), ("c", 2), ("d", 0))),
                        (sgn, (("c", 2), ("c", 0), ("d", 1)))]
            if (i, j) == (1, 2):
                return [(sgn, (("c", 0), ("d", 1), ("d", 2))), (sgn, (("c", 1), ("d", 2), ("d", 0))),
                        (sgn, (("c", 2), ("d", 0), ("d", 1)))]
        if 25 <= family <= 30:
            return [(sgn, (("c", 0), ("d", 0))), (sgn, (("c", 1), ("d", 1))), (sgn, (("c", 2), ("d", 2)))]
        return _plain(coef, i, j)
    return _plain(coef, i, j)


def _eval_value(sp: SlotSpace, value, c: int, d: int) -> int:
    F = sp.F
    total = 0
    for coef, factors in value:
        m = F.from_int(coef)
        for var, fr in factors:
            m = F.mul(m, sp.frob(c if var == "c" else d, fr))
        total = F.add(total, m)
    return total


# ------------------------------------------------------------ relation sets

@dataclass
class Relation:
    id: str
    family: str
    word: tuple                    # ((slot, exponent), ...)
    flags: tuple[str, ...] = ()


@dataclass
class RelationSet:
    type: str
    q: int
    space: SlotSpace
    relations: list[Relation]
    families: dict[str, list]      # family -> (lhs roots, terms) after correction
    deviations: list[str] = field(default_factory=list)

    @property
    def slots(self):
        return self.space.slots()

    def serialize(self) -> str:
        def slot_str(s):
            return f"{list(s[0])}:{s[1]}"
        lines = [f"type {self.type} q {self.q}"]
        for rel in self.relations:
            w = " ".join(f"{slot_str(s)}^{e}" for s, e in rel.word)
            fl = (" #" + ",".join(rel.flags)) if rel.flags else ""
            lines.append(f"{rel.id} | {w}{fl}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.serialize().encode()).hexdigest()


def _derive_terms(R, r: Root, s: Root):
    return [(rt, C, i, j) for i, j, rt, C in R.commutator_expansion(r, s)]


def _reconcile(R, label: str, r: Root, s: Root, stored, deviations: list[str]):
    """Compare a stored family with the commutator formula; return terms to use and flags."""
    derived = _derive_terms(R, r, s)
    if sorted(stored) == sorted(derived):
        return stored, ()
    flag = f"corrected: {label}"
    if flag not in deviations:
        deviations.append(flag)
    return derived, (flag,)


def _families(typ: str, deviations: list[str]):
    """List of (label, family number, r, s, terms, flags) for the type."""
    base = BASE.get(typ, typ)
    R = root_system(base)
    out = []
    if typ in ("E6", "E7", "E8"):
        for a, b in dynkin_edges(typ):
            r, s = R.simple(a), R.simple(b)
            for k, (x, y, terms) in _edge_families(r, s, R).items():
                lbl = f"edge{k}[{a}{b}]"
                terms, flags = _reconcile(R, lbl, x, y, terms, deviations)
                out.append((lbl, k, x, y, terms, flags))
    elif base == "F4":
        for a, b in ((1, 2), (3, 4)):
            r, s = R.simple(a), R.simple(b)
            for k, (x, y, terms) in _edge_families(r, s, R, (1, 2, 3, 4)).items():
                lbl = f"edge{k}[{a}{b}]"
                if typ == "F4":
                    terms, flags = _reconcile(R, lbl, x, y, terms, deviations)
                else:
                    flags = ()
                out.append((lbl, 0, x, y, terms, flags))
        for k, (x, y, terms) in F4_FAMILIES.items():
            lbl = f"{typ}.{k}"
            terms, flags = _reconcile(R, f"F4.{k}", x, y, terms, deviations)
            out.append((lbl, k, x, y, terms, flags))
    elif base == "G2":
        for k, (x, y, terms) in G2_FAMILIES.items():
            lbl = f"{typ}.{k}"
            terms, flags = _reconcile(R, f"G2.{k}", x, y, terms, deviations)
            out.append((lbl, k, x, y, terms, flags))
    else:
        raise UnsupportedType(typ)
    return out


def relation_set(typ: str, q) -> RelationSet:
    """All relations of the reduced presentation for (type, q)."""
    typ = normalize_type(typ)
    sp = slot_space(typ, q)
    base = BASE.get(typ, typ)
    R = root_system(base)
    p = sp.p
    rels: list[Relation] = []
    deviations: list[str] = []

    # order p
    for s in sp.slots():
        rels.append(Relation(f"order{list(s[0])}:{s[1]}", "order", ((s, p),)))
    # commuting pairs
    roots = sp.roots
    for ai, r in enumerate(roots):
        for s in roots[ai:]:
            if s == R.neg(r) or R.is_root(R.add(r, s)):
                continue
            for i in range(sp.degree(r)):
                for j in range(sp.degree(s)):
                    if r == s and j <= i:
                        continue
                    a, b = (r, i), (s, j)
                    rels.append(Relation(f"comm{list(r)}:{i},{list(s)}:{j}", "commute",
                                         ((a, -1), (b, -1), (a, 1), (b, 1))))
    fams = {}
    for lbl, k, r, s, terms, flags in _families(typ, deviations):
        fams[lbl] = (r, s, terms)
        for i, c in enumerate(sp.bases[r]):
            for j, d in enumerate(sp.bases[s]):
                word = [((r, i), -1), ((s, j), -1), ((r, i), 1), ((s, j), 1)]
                rhs = []
                for rt, coef, ei, ej in terms:
                    if typ in TWIST and not lbl.startswith("edge"):
                        val = _eval_value(sp, _twisted_value(typ, k, coef, ei, ej), c, d)
                    else:
                        val = _eval_value(sp, _plain(coef, ei, ej), c, d)
                    if val:
                        rhs.extend(sp.word(rt, val))
                # lhs * rhs^-1 = 1
                word.extend((sl, -e) for sl, e in reversed(rhs))
                rels.append(Relation(f"{lbl}[c{i},d{j}]", lbl, tuple(word), flags))
    zr = center_kill_relation(typ, q)
    if zr is not None:
        rels.append(zr)
    return RelationSet(typ, sp.q, sp, rels, fams, deviations)


def center_kill_relation(typ: str, q) -> Relation | None:
    """The relation z = 1 as a slot word, or None when the center is trivial."""
    from .chevalley import center_word
    typ = normalize_type(typ)
    if typ not in ("E6", "E7", "2E6"):
        return None
    word = center_word(typ, q)
    if word is None:
        return None
    sp = slot_space(typ, q)
    F = sp.F
    R = sp.rootsys
    out = []

    def n_word(r, c):
        return sp.word(r, c) + sp.word(R.neg(r), F.neg(F.inv(c))) + sp.word(r, c)

    def inv_word(w):
        return [(s, -e) for s, e in reversed(w)]

    for r, lam in word:
        out += n_word(r, F.inv(lam)) + inv_word(n_word(r, 1))
    return Relation("center", "center", tuple(out))


# ------------------------------------------------------------ evaluation

@dataclass
class VerificationReport:
    type: str
    q: int
    total: int
    failures: list[dict]
    elapsed: float
    deviations: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures

    def family_failures(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for f in self.failures:
            out[f["family"]] = out.get(f["family"], 0) + 1
        return out

    def to_json(self) -> dict:
        return {"version": "v1", "type": self.type, "q": self.q, "total": self.total,
                "pass": self.passed, "failures": self.failures,
                "failures_by_family": self.family_failures(),
                "deviations": self.deviations, "elapsed": round(self.elapsed, 3)}


class _MatOps:
    def __init__(self, F, d):
        self.F, self.d = F, d

    def mul(self, x, y):
        return la.matmul(self.F, x, y)

    def inv(self, x):
        return la.inverse(self.F, x)

    def one(self):
        return la.identity(self.F, self.d)


def evaluate_relations(rs: RelationSet, assignment: dict, stop_on_failure: bool = False,
                       include_center: bool = False) -> VerificationReport:
    """Evaluate every relation on a slot assignment of matrices.

    The central relation is skipped unless ``include_center`` is set, since
    it only holds in the simply connected group modulo the centre.
    """
    t0 = time.time()
    missing = [s for s in rs.slots if s not in assignment]
    if missing:
        raise MissingSlot(f"no matrix for slot {missing[0]}")
    F = rs.space.F
    p = rs.space.p
    some = next(iter(assignment.values()))
    ops = _MatOps(F, some.shape[0])
    pw_cache: dict = {}

    def slot_power(slot, e):
        e %= p
        key = (slot, e)
        if key not in pw_cache:
            if e == 0:
                pw_cache[key] = None
            elif e == 1:
                pw_cache[key] = assignment[slot]
            else:
                prev = slot_power(slot, e - 1)
                pw_cache[key] = ops.mul(prev, assignment[slot])
        return pw_cache[key]

    failures = []
    total = 0
    for rel in rs.relations:
        if rel.family == "center" and not include_center:
            continue
        total += 1
        M = None
        ok = True
        if rel.family == "order":
            (slot, e), = rel.word
            M = ops.mul(slot_power(slot, p - 1), assignment[slot])
        else:
            for slot, e in rel.word:
                g = slot_power(slot, e)
                if g is None:
                    continue
                M = g if M is None else ops.mul(M, g)
        if M is not None and not la.is_identity(M):
            ok = False
        if not ok:
            h = hashlib.sha256(np.ascontiguousarray(la.minus_identity(F, M)).tobytes()).hexdigest()[:16]
            failures.append({"id": rel.id, "family": rel.family, "residual": h})
            if stop_on_failure:
                break
    return VerificationReport(rs.type, rs.q, total, failures, time.time() - t0, list(rs.deviations))
