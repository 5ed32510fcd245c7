"""Command-line front end: run named verification suites and compute
individual quantities from JSON inputs.

Exit codes: 0 when every check passes, 1 on any failing check, 2 for an
unknown suite or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import eta, geometry
from .errors import SchemaViolation
from .groups import build_group, table_to_csv, table_to_json
from .clifford import a_factor, element_factor
from .suites import SUITE_NAMES, RunConfig, run_suite

USAGE_SUITES = ", ".join(SUITE_NAMES + ("all",))


def _load_config(args) -> RunConfig:
    base = {}
    if args.config:
        with open(args.config) as fh:
            base = json.load(fh)
    merged = {
        "tolerance": args.tol if args.tol is not None else base.get("tolerance", 1e-9),
        "degree": args.trunc if args.trunc is not None else base.get("degree", 10),
        "quadrature": args.quad if args.quad is not None else base.get("quadrature", 32),
        "out_dir": args.out if args.out is not None else base.get("out"),
    }
    suites = base.get("suites", ["all"])
    return RunConfig(
        tolerance=float(merged["tolerance"]),
        degree=int(merged["degree"]),
        quadrature=int(merged["quadrature"]),
        out_dir=merged["out_dir"],
        suites=tuple(suites),
    )


def _cmd_verify(args) -> int:
    cfg = _load_config(args)
    names = [args.suite] if args.suite else list(cfg.suites)
    exit_code = 0
    for name in names:
        try:
            report = run_suite(name, cfg)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            print(f"usage: equieta verify {{{USAGE_SUITES}}}", file=sys.stderr)
            return 2
        for check in report.checks:
            status = "PASS" if check.passed else "FAIL"
            print(f"[{status}] {check.name} (distance={check.distance:.3e})")
        print(f"suite {report.suite}: {'PASS' if report.passed else 'FAIL'}")
        if not report.passed:
            exit_code = 1
    return exit_code


def _read_payload(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _group_from_payload(payload):
    spec = payload.get("group", {"family": "cyclic", "k": 1})
    family = spec.get("family", "cyclic")
    k = spec.get("k")
    if family == "product":
        k = tuple(spec.get("orders", ()))
    return build_group(family, k)


def _cmd_compute(args) -> int:
    payload = _read_payload(args.input)
    if args.kind == "xi":
        _, table = _group_from_payload(payload)
        spec = eta.spectrum_from_json(table, payload)
        result = eta.xi_result(spec, payload.get("alpha"))
        print(result.to_json())
    elif args.kind == "index":
        geom = geometry.sphere_from_json(payload)
        vc = geometry.sphere_index_character(geom)
        print(json.dumps({"group": f"cyclic{geom.k}", "coefficients": vc.coeffs.tolist()}))
    elif args.kind == "table":
        _, table = _group_from_payload({"group": payload})
        if args.csv:
            print(table_to_csv(table), end="")
        else:
            print(table_to_json(table))
    elif args.kind == "a-factor":
        if "elements" in payload:
            _, table = _group_from_payload(payload)
            angle_data = [e.get("angles", []) for e in payload["elements"]]
            fixed = [e.get("fixed_dim", 0) for e in payload["elements"]]
            tab = a_factor(table.group, angle_data, fixed)
            print(json.dumps({
                "a": [[z.real, z.imag] for z in tab.a],
                "k": tab.k.tolist(),
                "fixed_dim": tab.fixed_dim.tolist(),
            }))
        else:
            try:
                angles = [float(t) for t in payload["angles"]]
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaViolation(f"field 'angles': {exc}") from exc
            value = element_factor(angles, int(payload.get("sign", 1)))
            print(json.dumps({"a": [value.real, value.imag], "modulus": abs(value)}))
    else:
        print(f"error: unknown kind {args.kind!r}", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="equieta",
        description="Verification suites and computations for equivariant "
        "eta invariants and characteristic forms on model geometries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help=f"run a named suite ({USAGE_SUITES})")
    verify.add_argument("suite", nargs="?", help="suite name; defaults to the config file list")
    verify.add_argument("--tol", type=float, default=None, help="comparison tolerance")
    verify.add_argument("--trunc", type=int, default=None, help="series truncation degree")
    verify.add_argument("--quad", type=int, default=None, help="quadrature resolution")
    verify.add_argument("--out", default=None, help="directory for JSON reports")
    verify.add_argument("--config", default=None, help="JSON config file (flags win)")

    compute = sub.add_parser("compute", help="compute one quantity from a JSON input")
    compute.add_argument("kind", choices=["xi", "index", "table", "a-factor"])
    compute.add_argument("input", help="path to a JSON input file, or - for stdin")
    compute.add_argument("--csv", action="store_true", help="CSV output for tables")

    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_compute(args)
    except SchemaViolation as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
