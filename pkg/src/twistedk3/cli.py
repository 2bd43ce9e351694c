"""Command-line entry point.

Exit codes: 0 = all checks pass (flagged items do not fail a run),
1 = at least one failing check, 2 = bad input (malformed scenario or
arguments), with the violated invariant named.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .battery import run_battery
from .lattices import gram, represents
from .mukai import picard_generators, twisted_picard
from .lattices import orthogonal_complement, sublattice_span
from .mukai import mukai_gram, mukai_pairing
from .scalars import format_quadext, parse_quadext
from .scenario import (
    TWIST_PRESETS,
    ScenarioError,
    chi_p2,
    load_scenario,
)
from .stability import (
    AlignedChargesError,
    catalogue,
    charge_params,
    destabilizer_scan,
    wall_between,
)


class InputError(ValueError):
    pass


def _parse_vector_spec(spec: str, params) -> "MukaiVectorLike":
    """Catalogue names (J, E0, E1, E0[1]) or coordinates "(a,b,c)" in the
    generator basis of the twisted Picard lattice."""
    spec = spec.strip()
    cat = catalogue(params)
    if spec in cat:
        return cat[spec]
    if spec.startswith("(") and spec.endswith(")"):
        try:
            coords = [int(x) for x in spec[1:-1].split(",")]
        except ValueError as exc:
            raise InputError(f"unparseable vector spec {spec!r}") from exc
        sc = params.scenario
        gens = picard_generators(sc.pic, sc.b)
        if len(coords) != len(gens):
            raise InputError(
                f"vector spec {spec!r} needs {len(gens)} coordinates"
            )
        out = gens[0].scale(coords[0])
        for g, c in zip(gens[1:], coords[1:]):
            out = out + g.scale(c)
        return out
    raise InputError(f"unparseable vector spec {spec!r}")


def _emit(payload: dict, as_json: bool, lines: Sequence[str]) -> None:
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def cmd_verify(args: argparse.Namespace) -> int:
    sc = load_scenario(args.scenario)
    report = run_battery(sc, coeff_bound=args.max_coeff, jobs=args.jobs)
    if args.json:
        print(report.to_json())
    else:
        for entry in report.checks:
            print(entry.line())
        counts = {"pass": 0, "fail": 0, "flagged": 0}
        for entry in report.checks:
            counts[entry.status] += 1
        print(
            f"total: {counts['pass']} pass, {counts['fail']} fail, "
            f"{counts['flagged']} flagged"
        )
    return report.exit_code


def cmd_walls(args: argparse.Namespace) -> int:
    sc = load_scenario(args.scenario)
    params = charge_params(sc)
    v = _parse_vector_spec(args.v, params)
    w = _parse_vector_spec(args.w, params)
    try:
        report = wall_between(params, v, w)
    except AlignedChargesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    roots = [format_quadext(r) for r in report.roots]
    chambers = [
        {
            "lower": format_quadext(c.lower) if c.lower is not None else "0",
            "upper": format_quadext(c.upper) if c.upper is not None else "inf",
            "sample": format_quadext(c.sample),
            "phase_order": c.ordering,
        }
        for c in report.chambers
    ]
    lines = [f"walls: [{', '.join(roots)}]"]
    for c in chambers:
        lines.append(
            f"chamber ({c['lower']}, {c['upper']}): at m = {c['sample']}, "
            f"first argument is {c['phase_order']}"
        )
    _emit({"walls": roots, "chambers": chambers}, args.json, lines)
    return 0


def cmd_scan(args: argparse.Namespace) -> int:
    sc = load_scenario(args.scenario)
    params = charge_params(sc)
    v = _parse_vector_spec(args.v, params)
    m = parse_quadext(args.m)
    report = destabilizer_scan(params, v, m, coeff_bound=args.max_coeff, jobs=args.jobs)
    payload = {
        "m": format_quadext(report.m),
        "coeff_bound": report.coeff_bound,
        "note": report.note,
        "survivors": [
            {
                "coords": list(s.coords),
                "rank": s.rank,
                "im_ratio": s.ratio,
                "self_pairing": s.self_pairing,
                "charge": [format_quadext(s.charge.re), format_quadext(s.charge.im)],
                "phase_vs_reference": str(s.verdict),
            }
            for s in report.survivors
        ],
        "maximal_phase": [
            {
                "coords": list(s.coords),
                "charge": [format_quadext(s.charge.re), format_quadext(s.charge.im)],
            }
            for s in report.phase_one
        ],
    }
    lines = [
        f"scan at m = {payload['m']} (box {report.coeff_bound}); {report.note}",
        f"survivors: {len(report.survivors)}",
    ]
    for s in report.survivors:
        lines.append(
            f"  {s.coords} rank {s.rank} ratio {s.ratio} <w,w> {s.self_pairing} "
            f"charge ({format_quadext(s.charge.re)}, {format_quadext(s.charge.im)}) "
            f"phase {s.verdict}"
        )
    lines.append(f"maximal-phase bucket: {len(report.phase_one)}")
    _emit(payload, args.json, lines)
    return 0


def cmd_picard(args: argparse.Namespace) -> int:
    sc = load_scenario(args.scenario)
    ts = orthogonal_complement(sc.ambient, [list(sc.h)])
    pic_b = twisted_picard(sc.ambient, ts, sc.b)
    gens = picard_generators(sc.pic, sc.b)
    span = sublattice_span(mukai_gram(sc.ambient), [[int(x) for x in v.to_coords()] for v in gens])
    gen_gram = [
        [int(mukai_pairing(v, w, sc.ambient)) for w in gens] for v in gens
    ]
    payload = {
        "generator_gram": gen_gram,
        "discriminant": span.discriminant(),
        "rank": pic_b.rank,
        "matches_computed_complement": all(pic_b.contains(r) for r in span.basis)
        and all(span.contains(r) for r in pic_b.basis),
    }
    lines = [
        f"rank {payload['rank']}",
        f"generator Gram {json.dumps(payload['generator_gram'])}",
        f"disc {payload['discriminant']} (|disc| {abs(payload['discriminant'])})",
        f"equals computed complement: {payload['matches_computed_complement']}",
    ]
    _emit(payload, args.json, lines)
    return 0


def cmd_chi(args: argparse.Namespace) -> int:
    if args.preset is not None:
        twists = TWIST_PRESETS[args.preset]
    elif args.twists is not None:
        try:
            twists = tuple(int(x) for x in args.twists.split(","))
        except ValueError:
            print("error: --twists must be a comma-separated integer list", file=sys.stderr)
            return 2
    else:
        print("error: one of --preset or --twists is required", file=sys.stderr)
        return 2
    value = chi_p2(twists)
    _emit({"twists": list(twists), "chi": value}, args.json, [str(value)])
    return 0


def cmd_represent(args: argparse.Namespace) -> int:
    try:
        entries = [int(x) for x in args.gram.split(",")]
        if len(entries) != 4:
            raise ValueError("need 4 entries")
        g = gram([[entries[0], entries[1]], [entries[2], entries[3]]])
    except ValueError as exc:
        print(f"error: bad --gram: {exc}", file=sys.stderr)
        return 2
    verdict = represents(g, args.target, search_bound=args.bound)
    payload = {
        "gram": [list(r) for r in g.entries],
        "target": args.target,
        "verdict": str(verdict),
    }
    _emit(payload, args.json, [str(verdict)])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistedk3",
        description=(
            "Exact lattice and stability-wall arithmetic for a twisted "
            "degree-2 K3 surface"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, scan_opts: bool = False) -> None:
        p.add_argument("--scenario", default=None, help="scenario JSON file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if scan_opts:
            p.add_argument("--jobs", type=int, default=1, help="parallel scan workers")
            p.add_argument("--max-coeff", type=int, default=8, help="scan box bound")

    p_verify = sub.add_parser("verify", help="run the full verification battery")
    common(p_verify, scan_opts=True)
    p_verify.set_defaults(fn=cmd_verify)

    p_walls = sub.add_parser("walls", help="alignment walls between two classes")
    common(p_walls)
    p_walls.add_argument("--v", required=True, help="J, E0, E1, E0[1], or (a,b,c)")
    p_walls.add_argument("--w", required=True)
    p_walls.set_defaults(fn=cmd_walls)

    p_scan = sub.add_parser("scan", help="charge-level destabilizer scan")
    common(p_scan, scan_opts=True)
    p_scan.add_argument("--v", default="J")
    p_scan.add_argument("--m", required=True, help="parameter, e.g. 13/25 or 1/4*sqrt(5)")
    p_scan.set_defaults(fn=cmd_scan)

    p_picard = sub.add_parser("picard", help="twisted Picard lattice of the scenario")
    common(p_picard)
    p_picard.set_defaults(fn=cmd_picard)

    p_chi = sub.add_parser("chi", help="Euler characteristic of a split plane bundle")
    p_chi.add_argument("--preset", choices=sorted(TWIST_PRESETS))
    p_chi.add_argument("--twists", default=None, help="comma-separated twists")
    p_chi.add_argument("--json", action="store_true")
    p_chi.set_defaults(fn=cmd_chi)

    p_rep = sub.add_parser("represent", help="binary-form representability")
    p_rep.add_argument("--gram", required=True, help="row-major 2x2 entries: p,q,q,r")
    p_rep.add_argument("--target", type=int, required=True)
    p_rep.add_argument("--bound", type=int, default=32)
    p_rep.add_argument("--json", action="store_true")
    p_rep.set_defaults(fn=cmd_represent)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
