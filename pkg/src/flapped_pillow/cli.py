"""Command-line front end.

Exit status: 0 on success, 2 on bad input, 1 when an internal check fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from importlib import resources

from . import annuli as _annuli
from . import dynamics, pullback
from .complex import (
    ComplexError,
    SpecError,
    build_pillow,
    julia_type,
    list_edges,
    load_spec,
    orbifold_signature,
)
from .slopes import Peripheral, Slope, format_slope, parse_slope

COMMANDS = (
    "build", "edges", "orbifold", "julia", "pullback", "slope-map", "lambda",
    "obstruction", "eliminate", "annuli", "orbit", "fixed", "scan", "attractor",
    "relation3x3",
)


class InputError(Exception):
    pass


def bundled_specs() -> list:
    root = resources.files("flapped_pillow") / "data"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))


def resolve_spec(path: str):
    """Load a spec file; a bare bundled name such as ``b3.json`` also works."""
    if not os.path.exists(path):
        name = os.path.basename(path)
        if not name.endswith(".json"):
            name += ".json"
        if name in bundled_specs():
            with resources.as_file(resources.files("flapped_pillow") / "data" / name) as p:
                return load_spec(p)
        raise InputError(f"spec file not found: {path}")
    return load_spec(path)


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _rational_slope(text: str) -> Slope:
    x = parse_slope(text)
    if isinstance(x, Peripheral):
        raise InputError("this command needs a rational slope, not the peripheral symbol")
    return x


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise InputError(f"{args.command} needs --{name.replace('_', '-')}")


def _pillow(args):
    return build_pillow(resolve_spec(args.spec))


# ---------------------------------------------------------------- commands
# each returns (text lines, json-able object)

def cmd_build(args):
    p = _pillow(args)
    d = p.to_dict()
    lines = [
        f"spec: {p.spec}",
        f"degree: {p.spec.degree}",
        f"tiles: {len(p.tiles)}",
        f"vertices: {p.num_vertices}",
        f"edges: {p.num_edges}",
        f"euler characteristic: {p.euler_characteristic}",
    ]
    lines += [f"marked {lab}: vertex {v}" for lab, v in sorted(p.marked_vertices.items())]
    return lines, d


def cmd_edges(args):
    _need(args, "n")
    edges = [str(e) for e in list_edges(args.n)]
    return edges, {"n": args.n, "edges": edges}


def cmd_orbifold(args):
    sig = orbifold_signature(_pillow(args))
    nu = {lab: ("inf" if w is None else w) for lab, w in sorted(sig.nu.items())}
    lines = [f"kind: {sig.kind.value}", f"euler characteristic: {_frac(sig.euler_characteristic)}"]
    lines += [f"nu({lab}) = {w}" for lab, w in nu.items()]
    return lines, {"kind": sig.kind.value, "nu": nu, "euler_characteristic": _frac(sig.euler_characteristic)}


def cmd_julia(args):
    jt = julia_type(resolve_spec(args.spec))
    return [jt.value], {"julia": jt.value}


def cmd_pullback(args):
    _need(args, "slope")
    x = _rational_slope(args.slope)
    comps = pullback.pullback_components(_pillow(args), x)
    recs = [c.record() for c in comps]
    lines = [
        f"{r['classification']}\tdegree={r['degree']}\tchords={r['chords']}\tflap_excursions={r['flap_excursions']}"
        for r in recs
    ]
    return lines, {"slope": format_slope(x), "components": recs}


def cmd_slope_map(args):
    _need(args, "slope")
    x = parse_slope(args.slope)
    y = pullback.slope_map(_pillow(args), x)
    return [format_slope(y)], {"slope": format_slope(x), "image": format_slope(y)}


def cmd_lambda(args):
    _need(args, "slope")
    x = _rational_slope(args.slope)
    lam = pullback.thurston_coefficient(_pillow(args), x)
    return [_frac(lam)], {"slope": format_slope(x), "lambda": _frac(lam)}


def cmd_obstruction(args):
    _need(args, "slope")
    x = _rational_slope(args.slope)
    rep = pullback.is_obstruction(_pillow(args), x)
    lam = rep.lam.numerator if rep.lam.denominator == 1 else _frac(rep.lam)
    line = f"obstruction: {'true' if rep.obstruction else 'false'}, lambda = {lam}"
    return [line], {
        "slope": format_slope(x), "obstruction": rep.obstruction, "invariant": rep.invariant,
        "lambda": _frac(rep.lam), "hyperbolic": rep.hyperbolic,
    }


def cmd_eliminate(args):
    _need(args, "slope")
    x = _rational_slope(args.slope)
    spec = pullback.eliminate_obstruction(_pillow(args), x)
    d = spec.to_dict()
    return [json.dumps(d)], d


def cmd_annuli(args):
    _need(args, "slope")
    x = _rational_slope(args.slope)
    ann = _annuli.annulus_components(_pillow(args), x, budget=args.budget)
    recs = [a.record() for a in ann]
    lines = []
    for r in recs:
        ecl = r["essential_circuit_length"]
        lines.append(
            f"annulus {r['annulus']}\t{'essential' if r['essential'] else 'peripheral'}"
            f"\tdegree={r['degree']}\tcircuit={r['circuit_length']}"
            f"\tessential_circuit={'-' if ecl is None else ecl}"
        )
    return lines, {"slope": format_slope(x), "annuli": recs}


def cmd_orbit(args):
    _need(args, "slope")
    x = parse_slope(args.slope)
    rec = dynamics.orbit(_pillow(args), x, max_steps=args.max if args.max is not None else 100)
    return rec.lines(), {
        "start": format_slope(rec.start),
        "states": [format_slope(s) for s in rec.states],
        "terminal": str(rec.terminal),
    }


def cmd_fixed(args):
    _need(args, "bound")
    fixed = [format_slope(s) for s in dynamics.fixed_slopes(_pillow(args), args.bound)]
    return fixed, {"bound": args.bound, "fixed": fixed}


def cmd_scan(args):
    _need(args, "bound")
    p = _pillow(args)
    viol = dynamics.monotonicity_scan(p, args.bound)
    mode = "certified" if dynamics.certified_mode(p) else "observational"
    lines = [f"mode: {mode}", f"violations: {len(viol)}"] + [str(v) for v in viol]
    return lines, {
        "bound": args.bound, "mode": mode,
        "violations": [{"slope": format_slope(v.slope), "image": format_slope(v.image), "kind": v.kind}
                       for v in viol],
    }


def cmd_attractor(args):
    rep = dynamics.attractor(
        _pillow(args),
        max_complexity=args.bound if args.bound is not None else 30,
        sample_bound=args.max if args.max is not None else 20,
        samples=args.samples if args.samples is not None else 100,
    )
    d = rep.to_dict()
    lines = [
        f"certified: {'true' if d['certified'] else 'false'}",
        f"mode: {'certified' if d['certified_mode'] else 'observational'}",
        f"scanned bound: {d['scanned_bound']}",
    ]
    if d["certified_mode"]:
        lines.append("attractor: " + " ".join(d["attractor"]))
        lines += [f"violation: {v}" for v in d["violations"]]
        lines += [f"escaped: {e}" for e in d["escaped"]]
    lines += [f"target {k}: {v}" for k, v in d["orbit_targets"].items()]
    return lines, d


def cmd_relation3x3(args):
    bound = args.bound if args.bound is not None else 40
    try:
        rep = dynamics.relation_check_3x3(_pillow(args), bound)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    bad = [
        {"slope": format_slope(a), "image": format_slope(b), "shifted": format_slope(c),
         "predicted": format_slope(d), "actual": format_slope(e)}
        for a, b, c, d, e in rep.counterexamples
    ]
    lines = [f"pass: {'true' if rep.passed else 'false'}", f"checked: {rep.checked}", f"skipped: {rep.skipped}"]
    lines += [f"{b['slope']} -> {b['image']}; {b['shifted']} -> {b['actual']} (expected {b['predicted']})" for b in bad]
    return lines, {"bound": bound, "pass": rep.passed, "checked": rep.checked,
                   "skipped": rep.skipped, "counterexamples": bad}


HANDLERS = {name: globals()["cmd_" + name.replace("-", "_")] for name in COMMANDS}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flapped-pillow", description="Flapped pillow curve engine.")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name == "edges":
            sp.add_argument("--n", type=int)
        else:
            sp.add_argument("--spec", required=True, metavar="PATH")
        sp.add_argument("--slope")
        sp.add_argument("--bound", type=int)
        sp.add_argument("--max", type=int)
        sp.add_argument("--samples", type=int)
        sp.add_argument("--budget", type=int, default=_annuli.DEFAULT_BUDGET)
        sp.add_argument("--json", action="store_true")
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        lines, obj = HANDLERS[args.command](args)
    except (InputError, SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ComplexError, pullback.PullbackError, _annuli.AnnulusError,
            _annuli.BudgetExceeded, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # anything else is a bug, not bad input
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.json:
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
