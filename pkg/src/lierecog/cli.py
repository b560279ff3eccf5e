"""Command line: build, verify, recognize, highweight, estimate, bound.

Matrix files use the linalg format; each comes with a JSON manifest
(``<file>.json``) naming the slot x_r(c_i) held by every matrix.  Reports
are JSON (sorted keys) or plain text; wall-clock time lives under
"timing" so that reruns with one seed differ only there.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import linalg as la
from .chevalley import MatOps, random_conjugate, standard_copy
from .errors import LieRecogError
from .gf import parse_field_spec
from .presentations import evaluate_relations, relation_set
from .probe import SCENARIOS, estimate_probability, fixpoint_table, generation_bound
from .randgrp import evaluate_slp, parse_slp, sample_size, slp_text
from .recog import compute_high_weight, labelled_from_slots, recognize
from .slots import build_slots, normalize_type, slot_space

VERSION = "v1"


class BadArgs(LieRecogError):
    pass


class IOFailure(LieRecogError):
    pass


# ------------------------------------------------------------ manifests

def _slot_json(slot) -> dict:
    r, i = slot
    return {"root": [int(v) for v in r], "index": int(i)}


def _slot_key(d: dict):
    return tuple(d["root"]), d["index"]


def manifest_path(path) -> Path:
    return Path(str(path) + ".json")


def write_slots(path, F, typ: str, q: int, slots: dict, extra: dict | None = None) -> None:
    keys = sorted(slots)
    la.write_matrices(path, F, [slots[s] for s in keys])
    man = {"version": VERSION, "type": typ, "q": q, "d": int(slots[keys[0]].shape[0]),
           "slots": [_slot_json(s) for s in keys]}
    man.update(extra or {})
    manifest_path(path).write_text(json.dumps(man, indent=1, sort_keys=True) + "\n")


def read_slots(path) -> tuple[dict, object, dict]:
    try:
        F, mats = la.read_matrices(path)
        man = json.loads(manifest_path(path).read_text())
    except OSError as exc:
        raise IOFailure(str(exc)) from None
    if len(man["slots"]) != len(mats):
        raise BadArgs(f"{path}: {len(mats)} matrices but {len(man['slots'])} manifest slots")
    return man, F, {_slot_key(s): M for s, M in zip(man["slots"], mats)}


def _read_mats(path):
    try:
        return la.read_matrices(path)
    except OSError as exc:
        raise IOFailure(str(exc)) from None


def _emit(report: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(report, indent=1, sort_keys=True) + "\n"
    else:
        text = "".join(f"{k}: {v}\n" for k, v in sorted(report.items()))
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)


def _q(spec: str) -> int:
    try:
        p, a = parse_field_spec(spec)
    except (ValueError, LieRecogError) as exc:
        raise BadArgs(f"bad field spec {spec!r}: {exc}") from None
    return p ** a


# ------------------------------------------------------------- commands

def cmd_build(args) -> int:
    typ, q = normalize_type(args.type), _q(args.q)
    G = standard_copy(typ, q)
    fund = G.fundamental()
    if args.conjugate:
        C = random_conjugate(G, args.seed)
        la.write_matrices(args.out, G.F, C.gens)
        manifest_path(args.out).write_text(json.dumps(
            {"version": VERSION, "type": typ, "q": q, "d": G.d, "seed": args.seed,
             "slots": None}, indent=1, sort_keys=True) + "\n")
    else:
        write_slots(args.out, G.F, typ, q, fund, {"seed": None})
    _emit({"version": VERSION, "command": "build", "type": typ, "q": q, "d": G.d,
           "out": str(args.out), "generators": len(fund), "seed": args.seed if args.conjugate else None,
           "timing": {}}, args)
    return 0


def cmd_verify(args) -> int:
    man, F, fund = read_slots(args.inp)
    typ = normalize_type(args.type or man["type"])
    q = _q(args.q) if args.q else man["q"]
    sp = slot_space(typ, q)
    d = next(iter(fund.values())).shape[0]
    assignment = fund if set(fund) >= set(sp.slots()) else build_slots(sp, fund, MatOps(F, d))
    rep = evaluate_relations(relation_set(typ, q), assignment)
    out = rep.to_json()
    out["timing"] = {"elapsed": out.pop("elapsed")}
    out["command"] = "verify"
    out["seed"] = None
    _emit(out, args)
    return 0 if rep.passed else 1


def cmd_recognize(args) -> int:
    typ, q = normalize_type(args.type), _q(args.q)
    F, mats = _read_mats(args.inp)
    restarts = args.restarts or sample_size(args.epsilon, 2)
    t0 = time.time()
    res = recognize(mats, typ, q, seed=args.seed, restarts=restarts, F=F, high_weight=not args.no_weight)
    gens = res.generators
    slots = {s: gens.slots[s].mat for s in _fundamental(typ, q)}
    slps = {s: slp_text(gens.handle.slp(gens.slots[s])) for s in sorted(slots)}
    # the SLPs are only worth shipping if they reproduce the matrices
    for s, text in slps.items():
        if not np.array_equal(evaluate_slp(F, parse_slp(text), mats), slots[s]):
            raise LieRecogError(f"SLP for slot {s} does not evaluate to its matrix")
    extra = {"seed": args.seed, "slps": [slps[s] for s in sorted(slots)]}
    if args.out:
        write_slots(args.out, F, typ, q, slots, extra)
    out = {"version": VERSION, "command": "recognize", "type": typ, "q": q, "seed": args.seed,
           "pass": res.report.passed, "relations": res.report.total, "attempts": res.attempts,
           "restarts": restarts, "high_weight": list(res.high_weight) if res.high_weight else None,
           "log": res.log, "out": str(args.out) if args.out else None,
           "timing": {"elapsed": round(time.time() - t0, 3)}}
    _emit(out, args)
    return 0 if res.report.passed else 1


def _fundamental(typ: str, q: int):
    sp = slot_space(typ, q)
    return [(r, i) for r in sp.fundamental_roots() for i in range(sp.degree(r))]


def cmd_highweight(args) -> int:
    man, F, fund = read_slots(args.inp)
    typ = normalize_type(args.type or man["type"])
    q = _q(args.q) if args.q else man["q"]
    need = _fundamental(typ, q)
    missing = [s for s in need if s not in fund]
    if missing:
        raise BadArgs(f"manifest lacks fundamental slot {missing[0]}")
    L = labelled_from_slots(typ, q, F, {s: fund[s] for s in need})
    w = compute_high_weight(F, L, np.random.default_rng(args.seed))
    _emit({"version": VERSION, "command": "highweight", "type": typ, "q": q, "seed": args.seed,
           "high_weight": list(w), "timing": {}}, args)
    return 0


def cmd_estimate(args) -> int:
    t0 = time.time()
    e = estimate_probability(args.scenario, args.q, args.trials, seed=args.seed, jobs=args.jobs)
    out = e.to_json()
    out["command"] = "estimate"
    out["timing"] = {"elapsed": round(time.time() - t0, 3)}
    if args.format == "csv":
        line = f"{e.scenario},{e.q},{e.trials},{e.hits},{e.seed},{e.estimate},{e.low},{e.high}\n"
        text = "scenario,q,trials,hits,seed,estimate,low,high\n" + line
        if args.report:
            Path(args.report).write_text(text)
        else:
            sys.stdout.write(text)
        return 0
    _emit(out, args)
    return 0


def cmd_bound(args) -> int:
    q = _q(args.q)
    b = generation_bound(args.eps, q)
    out = {"version": VERSION, "command": "bound", "eps": args.eps, "q": q,
           "bound": str(b.value), "bound_float": float(b.value), "below_one": b.below_one,
           "seed": None, "timing": {}}
    if args.table:
        out["table"] = [{"label": r.label, "fix": r.fix, "index": r.index, "multiplicity": r.multiplicity,
                         "term": str(Fraction(r.multiplicity * r.fix**2, r.index))}
                        for r in fixpoint_table(args.eps, q).rows]
    _emit(out, args)
    return 0


# --------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lierecog", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--epsilon", type=float, default=1e-2,
                        help="failure probability; sets sample and restart budgets")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("json", "text", "csv"), default="json")
    common.add_argument("--report", help="write the report here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="write a standard copy")
    p.add_argument("--type", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--conjugate", action="store_true", help="write a seeded random conjugate instead")
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("verify", parents=[common], help="evaluate the presentation on slot matrices")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--type")
    p.add_argument("--q")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("recognize", parents=[common], help="find standard generators with SLPs")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--type", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--out")
    p.add_argument("--restarts", type=int)
    p.add_argument("--no-weight", action="store_true")
    p.set_defaults(fn=cmd_recognize)

    p = sub.add_parser("highweight", parents=[common], help="high weight of a labelled module")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--type")
    p.add_argument("--q")
    p.set_defaults(fn=cmd_highweight)

    p = sub.add_parser("estimate", parents=[common], help="Monte Carlo generation probability")
    p.add_argument("--scenario", required=True, choices=sorted(SCENARIOS))
    p.add_argument("--q", required=True)
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(fn=cmd_estimate)

    p = sub.add_parser("bound", parents=[common], help="exact generation bound from the fixed-point table")
    p.add_argument("--eps", choices=("+", "-"), required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--table", action="store_true")
    p.set_defaults(fn=cmd_bound)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not 0 < args.epsilon < 1:
        print("error: --epsilon must lie in (0, 1)", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except LieRecogError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
