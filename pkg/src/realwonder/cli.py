"""Command-line interface.

Subcommands: dcp, moduli, config, hilb2, verify.  Reports go to stdout
as a human table; --machine writes the canonical JSON report.  Exit
codes: 0 success, 2 input error, 3 internal guard (e.g. an unsupported
excess intersection).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .engine import wonderful_run
from .errors import EngineError, InputError, RealWonderError
from .exact import GaussianRational
from .flags import FlagSet
from .hilbert import (
    SmithData,
    consistency,
    deficiency_effective_gm,
    deficiency_general,
)
from .models import (
    SpaceData,
    build_dcp,
    build_fm,
    build_kt,
    build_moduli,
    build_ulyanov,
    parse_sigma,
)
from .report import build_report, from_json, render_text, to_json
from .subspaces import ProjSubspace, rnc_points, span_points
from .verification import run_suite

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: bad JSON: {exc}") from exc


def _parse_generators(data) -> tuple:
    try:
        ambient_dim = int(data["ambient_dim"])
        raw = list(data["generators"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad dcp schema: {exc}") from exc
    generators = []
    for i, g in enumerate(raw):
        name = str(g.get("name", f"g{i}"))
        if "basis" in g:
            rows = [
                tuple(GaussianRational.parse(str(x)) for x in row)
                for row in g["basis"]
            ]
            sub = ProjSubspace.from_basis_rows(ambient_dim, rows)
        elif "rnc_span" in g:
            params = [GaussianRational.parse(str(t)) for t in g["rnc_span"]]
            sub = span_points(rnc_points(ambient_dim, params))
        else:
            raise InputError(f"generator {name}: need 'basis' or 'rnc_span'")
        generators.append((name, sub))
    return ambient_dim, generators


def _apply_seed_flags(arr, path: str):
    from dataclasses import replace

    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError("seed-flags file must map stratum ids to flag objects")
    axioms = list(arr.flag_axioms)
    for sid, flags in sorted(data.items()):
        try:
            fs = FlagSet.from_dict(flags)
        except ValueError as exc:
            raise InputError(f"seed-flags {sid}: {exc}") from exc
        if sid == "ambient":
            arr.ambient = replace(arr.ambient, flags=fs)
        elif sid in arr.strata:
            arr.strata[sid] = replace(arr.strata[sid], flags=fs)
        else:
            raise InputError(f"seed-flags: unknown stratum {sid!r}")
        axioms.append((sid, f"user axiom: {json.dumps(flags, sort_keys=True)}"))
    arr.flag_axioms = tuple(axioms)
    return arr


def _emit(report: dict, args) -> None:
    sys.stdout.write(render_text(report, trace=args.trace))
    if args.machine:
        with open(args.machine, "w", encoding="utf-8") as handle:
            handle.write(to_json(report))


def cmd_dcp(args) -> int:
    ambient_dim, generators = _parse_generators(_load_json(args.file))
    arr = build_dcp(ambient_dim, generators, validate_prefixes=args.validate_prefixes)
    if args.seed_flags:
        arr = _apply_seed_flags(arr, args.seed_flags)
    result = wonderful_run(arr)
    model = {"kind": "dcp", "file": args.file, "ambient_dim": ambient_dim}
    _emit(build_report(model, result), args)
    return EXIT_OK


def cmd_moduli(args) -> int:
    spec = parse_sigma(args.sigma, args.n)
    arr = build_moduli(spec, validate_prefixes=args.validate_prefixes)
    if args.seed_flags:
        arr = _apply_seed_flags(arr, args.seed_flags)
    result = wonderful_run(arr)
    model = {"kind": "moduli", "n": args.n, "sigma": args.sigma}
    _emit(build_report(model, result), args)
    return EXIT_OK


def cmd_config(args) -> int:
    space = SpaceData.from_dict(_load_json(args.space))
    if args.model == "fm":
        arr = build_fm(args.n, space, validate_prefixes=args.validate_prefixes)
    elif args.model == "ulyanov":
        arr = build_ulyanov(args.n, space, validate_prefixes=args.validate_prefixes)
    elif args.model == "kt":
        if not args.building:
            raise InputError("the kt model needs --building (JSON list of partitions)")
        building = _load_json(args.building)
        arr = build_kt(args.n, space, building, validate_prefixes=args.validate_prefixes)
    else:
        raise InputError(f"unknown configuration model {args.model!r}")
    if args.seed_flags:
        arr = _apply_seed_flags(arr, args.seed_flags)
    result = wonderful_run(arr)
    model = {
        "kind": "config",
        "model": args.model,
        "n": args.n,
        "space": space.to_dict(),
    }
    _emit(build_report(model, result), args)
    return EXIT_OK


def cmd_hilb2(args) -> int:
    if args.report:
        try:
            with open(args.report, "r", encoding="utf-8") as handle:
                report = from_json(handle.read())
        except OSError as exc:
            raise InputError(f"cannot read {args.report}: {exc}") from exc
        final = report["final"]
        if final["verdict"] != "ConjugationSpace":
            raise InputError(
                "only ConjugationSpace reports determine Smith data automatically"
            )
        n = report["ambient_dim"]
        data = SmithData(
            n=n,
            beta_total=final["total_c"],
            beta_fixed=final["total_r"],
            beta_odd=0,
            delta=(0,) * (2 * n),
            rank_mu=n * final["total_r"] // 2,
        )
        attest = {"tors2_free": True, "effective_gm": True}
    else:
        payload = _load_json(args.file)
        data = SmithData.from_dict(payload.get("smith", payload))
        attest = payload.get("attest", {})

    problems = consistency(data, effective_gm=bool(attest.get("effective_gm")))
    if problems:
        raise InputError("inconsistent Smith data: " + "; ".join(problems))
    lines = [f"smith data: {json.dumps(data.to_dict(), sort_keys=True)}"]
    out = {"schema_version": 1, "smith": data.to_dict(), "deficiency": {}}
    if data.rank_mu is not None and attest.get("tors2_free"):
        value = deficiency_general(data, attest_tors2_free=True)
        lines.append(f"deficiency of the Hilbert square (general formula): {value}")
        out["deficiency"]["general"] = value
    if attest.get("effective_gm") and attest.get("tors2_free"):
        value = deficiency_effective_gm(
            data, attest_effective_gm=True, attest_tors2_free=True
        )
        lines.append(f"deficiency of the Hilbert square (effective+GM formula): {value}")
        out["deficiency"]["effective_gm"] = value
    if not out["deficiency"]:
        raise InputError(
            "nothing to compute: provide rank_mu and/or attest "
            '{"tors2_free": true, "effective_gm": true}'
        )
    sys.stdout.write("\n".join(lines) + "\n")
    if args.machine:
        with open(args.machine, "w", encoding="utf-8") as handle:
            handle.write(json.dumps(out, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    failures = 0
    for name, ok, detail in run_suite(args.suite):
        status = "pass" if ok else "FAIL"
        sys.stdout.write(f"[{status}] {name}: {detail}\n")
        if not ok:
            failures += 1
    sys.stdout.write(
        f"suite {args.suite}: {'all checks passed' if not failures else f'{failures} failures'}\n"
    )
    return EXIT_OK if failures == 0 else EXIT_INTERNAL


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--trace", action="store_true", help="print per-step tables")
    parser.add_argument("--machine", metavar="PATH", help="write the JSON report")
    parser.add_argument(
        "--seed-flags", metavar="FILE", help="known-space flag axioms to apply"
    )
    parser.add_argument(
        "--validate-prefixes",
        action="store_true",
        help="re-validate the building-set condition for every event prefix",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="realwonder",
        description="Betti data of real wonderful compactifications by "
        "exact iterated blow-up.",
    )
    parser.add_argument("--version", action="version", version=f"realwonder {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("dcp", help="De Concini-Procesi model of linear subspaces")
    p.add_argument("file", help="JSON arrangement description")
    _add_common(p)
    p.set_defaults(func=cmd_dcp)

    p = subs.add_parser("moduli", help="moduli of stable rational curves (Kapranov)")
    p.add_argument("--n", type=int, required=True, help="number of marked points")
    p.add_argument(
        "--sigma", default="id", help='real structure, cycle notation: "id", "(1 2)(3 4)"'
    )
    _add_common(p)
    p.set_defaults(func=cmd_moduli)

    p = subs.add_parser("config", help="configuration-space compactifications")
    p.add_argument("--model", required=True, choices=["fm", "ulyanov", "kt"])
    p.add_argument("--n", type=int, required=True, help="number of points")
    p.add_argument("--space", required=True, help="JSON space data for the factor")
    p.add_argument("--building", help="JSON building set (kt only)")
    _add_common(p)
    p.set_defaults(func=cmd_config)

    p = subs.add_parser("hilb2", help="Smith-Thom deficiency of the Hilbert square")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--file", help="JSON Smith data with attestations")
    src.add_argument("--report", help="machine report of a ConjugationSpace run")
    p.add_argument("--machine", metavar="PATH", help="write the JSON result")
    p.set_defaults(func=cmd_hilb2)

    p = subs.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="core", choices=["core", "full"])
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except EngineError as exc:
        sys.stderr.write(f"engine guard: {exc}\n")
        return EXIT_INTERNAL
    except RealWonderError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
