"""Command-line front end.

Every subcommand reads JSON (a file path, or inline JSON when the argument
starts with ``{`` or ``[``), runs one operation family and prints a JSON
result.  Exit codes: 0 success, 1 domain error (``{"error": ...}`` on
stdout), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import baryalg, convex, free, smyth
from .errors import BaryvalError
from .exactnum import format_rat, parse_xrat
from .finspace import FinPoset, crescent_partition, generate_lattice
from .valuation import (SimpleValuation, schroder_simpson_split, second_split,
                        stochastic_le)

log = logging.getLogger("baryval")


class UsageError(Exception):
    pass


def load_json(arg: str) -> Any:
    text = arg.strip()
    try:
        if text.startswith(("{", "[")):
            return json.loads(text)
        return json.loads(Path(arg).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {arg!r}: {exc}") from None


def _space(args) -> FinPoset:
    return FinPoset.from_json(load_json(args.space))


def _valuation(arg: str, space: FinPoset) -> SimpleValuation:
    obj = load_json(arg)
    if "masses" not in obj:
        obj = {"masses": obj}
    return SimpleValuation.from_json(obj, space)


def _opens(arg: str | None, space: FinPoset):
    sets = load_json(arg) if arg else []
    return generate_lattice(space, [space.open(s) for s in sets])


def _masses(nu: SimpleValuation) -> dict:
    return {x: format_rat(m) for x, m in nu.masses.items()}


def _transport(tm) -> dict:
    out: dict = {}
    for (i, j), v in tm.entries.items():
        out.setdefault(i, {})[j] = format_rat(v)
    return out


def _label(lab) -> list:
    return sorted(lab)


def _instance(args):
    return baryalg.instance_from_json(load_json(args.instance))


def _weighted(inst, arg: str) -> list:
    """Valuations over algebra elements: {"points": [[w, x], ...]} or, for
    finite carriers, {"masses": {"x": w}}."""
    obj = load_json(arg)
    if isinstance(obj, dict) and "masses" in obj:
        return [(parse_xrat(w), inst.decode(x)) for x, w in obj["masses"].items()]
    pts = obj["points"] if isinstance(obj, dict) else obj
    return [(parse_xrat(w), inst.decode(x)) for w, x in pts]


# ---------------------------------------------------------------------------
# subcommands


def cmd_order(args):
    space = _space(args)
    res = stochastic_le(_valuation(args.mu, space), _valuation(args.nu, space))
    return {"related": res.related,
            "transport": _transport(res.witness) if res.witness else None,
            "violation": res.violation.sorted() if res.violation else None}


def cmd_lattice(args):
    space = _space(args)
    gens = [space.open(s) for s in (load_json(args.opens) if args.opens else [])]
    lattice = generate_lattice(space, gens)
    # crescent labels index the generating opens as given
    return {"lattice": [u.sorted() for u in lattice],
            "crescents": [{"label": _label(c.label), "members": [x for x in space if x in c.members]}
                          for c in crescent_partition(space, gens, include_empty=False)]}


def cmd_split(args):
    space = _space(args)
    lattice = _opens(args.opens, space)
    d = schroder_simpson_split(_valuation(args.mu, space), _valuation(args.nu, space), lattice)
    return {"nu1": _masses(d.first), "nu2": _masses(d.second),
            "lattice": [u.sorted() for u in lattice]}


def cmd_split2(args):
    space = _space(args)
    lattice = _opens(args.opens, space)
    d = second_split(_valuation(args.mu, space), _valuation(args.nu, space),
                     _valuation(args.varpi, space), lattice)
    return {"mu_prime": _masses(d.first), "nu_prime": _masses(d.second),
            "lattice": [u.sorted() for u in lattice]}


def cmd_witness(args):
    space = _space(args)
    lattice = _opens(args.opens, space)
    d = convex.consistency_witness(_valuation(args.mu, space), _valuation(args.nu, space),
                                   _valuation(args.varpi, space), Fraction(args.a),
                                   Fraction(args.c), lattice)
    return {"mu_prime": _masses(d.first), "nu_prime": _masses(d.second),
            "lattice": [u.sorted() for u in lattice]}


def cmd_barycenter(args):
    inst = _instance(args)
    pairs = _weighted(inst, args.valuation)
    point = baryalg.barycenter_sub(inst, pairs) if args.sub else baryalg.barycenter(inst, pairs)
    return {"point": inst.encode(point)}


def cmd_choquet(args):
    inst = _instance(args)
    pairs = _weighted(inst, args.valuation)
    x0 = inst.decode(load_json(args.point) if args.point.strip().startswith(("{", "[")) else args.point)
    return {"barycenter": baryalg.verify_barycenter_choquet(inst, pairs, x0)}


def cmd_axioms(args):
    inst = _instance(args)
    reports = {"axioms": baryalg.check_axioms(inst)}
    if args.entropic:
        reports["entropic"] = baryalg.check_entropic(inst)
    if args.pointed:
        reports["pointed"] = baryalg.check_pointed_laws(inst)
    violations = []
    for rep in reports.values():
        violations.extend(rep.to_json(inst.encode)["violations"])
    return {"pass": not violations, "violations": violations,
            "checked": {k: r.checked for k, r in reports.items()}}


def _conify_elem(inst, arg):
    return free.ConifyElem.from_json(inst, load_json(arg))


def cmd_conify(args):
    inst = _instance(args)
    u = _conify_elem(inst, args.u)
    op = args.op
    if op == "level":
        return {"level": format_rat(free.level(u))}
    if op == "member":
        return {"member": free.conify_le1_member(u)}
    if op == "smul":
        return {"result": free.conify_smul(Fraction(args.a), u).to_json()}
    if args.v is None:
        raise UsageError(f"--v is required for {op}")
    v = _conify_elem(inst, args.v)
    if op == "add":
        return {"result": free.conify_add(u, v).to_json()}
    if op == "mix":
        return {"result": free.conify_le1_mix(u, Fraction(args.a), v).to_json()}
    return {"le": free.conify_le(u, v)}


def cmd_telescope(args):
    inst = _instance(args)
    tele = free.Telescope(inst, Fraction(args.alpha))
    u = tele.from_json(load_json(args.u))
    op = args.op
    if op == "canon":
        return {"result": u.to_json()}
    if op == "smul":
        return {"result": tele.smul(Fraction(args.a), u).to_json()}
    if args.v is None:
        raise UsageError(f"--v is required for {op}")
    v = tele.from_json(load_json(args.v))
    if op == "equiv":
        return {"equiv": u == v}
    if op == "mix":
        return {"result": tele.mix(u, Fraction(args.a), v).to_json()}
    if op == "add":
        return {"result": tele.add(u, v).to_json()}
    return {"le": tele.le(u, v)}


def _map_values(inst, arg) -> dict:
    obj = load_json(arg)
    vals = obj.get("values", obj)
    return {inst.decode(x): parse_xrat(v) for x, v in vals.items()}


def cmd_sandwich(args):
    inst = _instance(args)
    res = convex.sandwich(inst, _map_values(inst, args.q), _map_values(inst, args.p),
                          validate=not args.no_validate)
    if not isinstance(res, dict):
        return {"feasible": False}
    return {"feasible": True, "h": {x: format_rat(v) for x, v in res.items()}}


def _upset(inst, arg):
    return smyth.ConvexUpset.from_json(inst, load_json(arg))


def cmd_smyth(args):
    inst = _instance(args)
    op = args.op
    needed = {"barycenter": ["valuation"], "eta": ["x"], "mix": ["q1", "q2"], "order": ["q1", "q2"]}
    missing = [f"--{n}" for n in needed[op] if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{op} needs {', '.join(missing)}")
    if op == "barycenter":
        res = smyth.smyth_barycenter(inst, _weighted(inst, args.valuation))
        if isinstance(res, smyth.NotPrincipal):
            return res.to_json()
        return {"principal": True, "point": inst.encode(res)}
    if op == "eta":
        return {"upset": smyth.smyth_eta(inst, inst.decode(args.x)).to_json()["members"]}
    q1, q2 = _upset(inst, args.q1), _upset(inst, args.q2)
    if op == "mix":
        return {"upset": smyth.smyth_mix(q1, Fraction(args.a), q2).to_json()["members"]}
    return {"le": smyth.smyth_order(q1, q2)}


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="baryval", description=__doc__.splitlines()[0])
    p.add_argument("--decimal", action="store_true",
                   help="add an approximate decimal rendering (non-authoritative)")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    # accept the global flags after the subcommand too
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--decimal", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    def space_cmd(name, fn, help_, *vals, opens=False):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.add_argument("--space", required=True)
        for v in vals:
            sp.add_argument(f"--{v}", required=True)
        if opens:
            sp.add_argument("--opens", help="JSON list of generating opens")
        sp.set_defaults(fn=fn)
        return sp

    space_cmd("order", cmd_order, "decide the stochastic order", "mu", "nu")
    space_cmd("lattice", cmd_lattice, "generate a lattice of opens and its crescents", opens=True)
    space_cmd("split", cmd_split, "first splitting lemma", "mu", "nu", opens=True)
    space_cmd("split2", cmd_split2, "second splitting lemma", "mu", "nu", "varpi", opens=True)
    w = space_cmd("witness", cmd_witness, "consistency witness", "mu", "nu", "varpi", opens=True)
    w.add_argument("--a", required=True)
    w.add_argument("--c", required=True)

    def inst_cmd(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.add_argument("--instance", required=True)
        sp.set_defaults(fn=fn)
        return sp

    b = inst_cmd("barycenter", cmd_barycenter, "barycenter of a weighted family")
    b.add_argument("--valuation", required=True)
    b.add_argument("--sub", action="store_true", help="pointed barycenter, total mass <= 1")
    cv = inst_cmd("choquet-verify", cmd_choquet, "test a candidate barycenter")
    cv.add_argument("--valuation", required=True)
    cv.add_argument("--point", required=True)
    ax = inst_cmd("axioms", cmd_axioms, "check the barycentric algebra laws")
    ax.add_argument("--entropic", action="store_true")
    ax.add_argument("--pointed", action="store_true")
    co = inst_cmd("conify", cmd_conify, "free cone operations")
    co.add_argument("--op", choices=["add", "smul", "mix", "le", "level", "member"], required=True)
    co.add_argument("--u", required=True)
    co.add_argument("--v")
    co.add_argument("--a", default="1")
    te = inst_cmd("telescope", cmd_telescope, "telescope operations")
    te.add_argument("--op", choices=["canon", "equiv", "mix", "smul", "add", "le"], required=True)
    te.add_argument("--alpha", default="1/2")
    te.add_argument("--u", required=True)
    te.add_argument("--v")
    te.add_argument("--a", default="1")
    sw = inst_cmd("sandwich", cmd_sandwich, "affine map between a concave and a convex map")
    sw.add_argument("--q", required=True)
    sw.add_argument("--p", required=True)
    sw.add_argument("--no-validate", action="store_true")
    sm = inst_cmd("smyth", cmd_smyth, "Smyth poweralgebra operations")
    sm.add_argument("--op", choices=["barycenter", "mix", "eta", "order"], required=True)
    sm.add_argument("--valuation")
    sm.add_argument("--q1")
    sm.add_argument("--q2")
    sm.add_argument("--x")
    sm.add_argument("--a", default="1/2")
    return p


def _approx(obj):
    if isinstance(obj, dict):
        return {k: _approx(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_approx(v) for v in obj]
    if isinstance(obj, str):
        try:
            return f"{float(Fraction(obj)):.6g}"
        except (ValueError, ZeroDivisionError):
            return obj
    return obj


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    log.debug("running %s", args.command)
    try:
        result = args.fn(args)
    except BaryvalError as exc:
        payload = {"error": str(exc), "type": type(exc).__name__}
        witness = getattr(exc, "witness", None)
        if witness is not None:
            payload["witness"] = _jsonable(witness)
        print(json.dumps(payload, sort_keys=True), file=out)
        return 1
    except (UsageError, KeyError, ValueError, TypeError, IndexError) as exc:
        print(f"baryval: error: {exc}", file=sys.stderr)
        return 2
    if args.decimal:
        result["approx_decimal_non_authoritative"] = _approx(result)
    print(json.dumps(result, sort_keys=True), file=out)
    return 0


def _jsonable(obj):
    if hasattr(obj, "sorted"):
        return obj.sorted()
    if isinstance(obj, Fraction):
        return format_rat(obj)
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return repr(obj)


def main() -> None:
    sys.exit(run())
