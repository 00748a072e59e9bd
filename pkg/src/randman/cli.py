"""Command line interface: ``randman <command> ...``.

Exit codes: 0 ok, 2 invalid input, 3 a check failed, 4 undecided.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import charclass as cc
from .cobordism import (
    CobordismWitness,
    RandomOneManifold,
    RandomZeroManifold,
    cobordant0,
    pair_of_pants,
    phi0,
    split_compact_leaves,
    suspension_normal_form,
    verify_witness,
)
from .measure import Automorphism, MeasureSpace, StructureError, ValidationError, format_scalar

EXIT = {"ok": 0, "invalid": 2, "fail": 3, "unknown": 4}


class CommandResult:
    """Status plus a JSON payload; ``rows`` optionally overrides CSV/table output."""

    def __init__(self, status: str, payload: dict, rows: list[list] | None = None, text: str | None = None):
        self.status, self.payload, self.rows, self.text = status, payload, rows, text

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.payload, indent=2, ensure_ascii=False) + "\n"
        rows = self.rows if self.rows is not None else _flatten(self.payload)
        if fmt == "csv":
            buf = io.StringIO()
            csv.writer(buf, lineterminator="\n").writerows(rows)
            return buf.getvalue()
        if self.text is not None:
            return self.text + "\n"
        widths = [max(len(str(r[c])) for r in rows if c < len(r)) for c in range(max(map(len, rows), default=0))]
        return "".join("  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip() + "\n" for r in rows)


def _flatten(payload, prefix: str = "") -> list[list]:
    rows = []
    if isinstance(payload, dict):
        for k, v in payload.items():
            rows += _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(payload, list) and payload and isinstance(payload[0], (dict, list)):
        for i, v in enumerate(payload):
            rows += _flatten(v, f"{prefix}[{i}]")
    elif isinstance(payload, list):
        rows.append([prefix] + [_cell(x) for x in payload])
    else:
        rows.append([prefix, _cell(payload)])
    return rows


def _cell(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return "null"
    return x


def _load(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None


# -- commands -----------------------------------------------------------------


def cmd_phi0(args) -> CommandResult:
    x = RandomZeroManifold.from_json(_load(args.file))
    value = phi0(x)
    null = cobordant0(x, RandomZeroManifold())
    payload = {"phi0": format_scalar(value), "null_cobordant": null}
    text = f"phi0 = {value}, null_cobordant = {'true' if null else 'false'}"
    return CommandResult("ok", payload, [["phi0", format_scalar(value)], ["null_cobordant", _cell(null)]], text)


def cmd_pontryagin_table(args) -> CommandResult:
    if not 0 <= args.n <= args.max_n:
        raise ValidationError("n", f"must be between 0 and {args.max_n}, got {args.n}")
    order, matrix, det = cc.pontryagin_matrix(args.n)
    labels = [cc.format_partition(a) for a in order]
    payload = {
        "n": args.n,
        "order": labels,
        "matrix": [[format_scalar(x) for x in row] for row in matrix],
        "det": format_scalar(det),
    }
    rows = [labels] if labels else []
    rows += [[str(x) for x in row] for row in matrix]
    rows.append(["det", format_scalar(det)])
    if args.format == "table":
        rows = [["M_alpha \\ beta"] + labels] + [[lab] + [str(x) for x in row] for lab, row in zip(labels, matrix)]
        rows.append(["det", str(det)])
    return CommandResult("ok", payload, rows)


def cmd_solve_target(args) -> CommandResult:
    data = _load(args.file)
    if not isinstance(data, dict) or "target" not in data:
        raise ValidationError("input", "expected {'n': int, 'target': {...}}")
    n = data.get("n", args.n)
    if not isinstance(n, int) or n < 0:
        raise ValidationError("n", f"expected a non-negative integer, got {n!r}")
    e = cc.solve_target(n, data["target"])
    order = cc.partitions(n) if n else []
    check = {cc.format_partition(b): format_scalar(cc.expected_pontryagin(e, b)) for b in order}
    payload = {"n": n, "order": [cc.format_partition(b) for b in order], **e.to_json(), "check": check, "verified": True}
    rows = [["manifold", "weight", "orientation"]]
    rows += [[c.manifold.label, format_scalar(c.weight), c.orientation] for c in e.components]
    rows += [["check " + k, v] for k, v in check.items()]
    rows.append(["verified", "true"])
    return CommandResult("ok", payload, rows)


def cmd_suspension(args) -> CommandResult:
    if args.action == "normal-form":
        x = RandomOneManifold.from_json(_load(args.files[0]))
        return CommandResult("ok", {"normal_form": suspension_normal_form(x).to_json()})
    if args.action == "split":
        x = RandomOneManifold.from_json(_load(args.files[0]))
        f, rest = split_compact_leaves(x)
        return CommandResult("ok", {"F": f.to_json(), "X_prime": rest.to_json()})
    if args.action == "pair-of-pants":
        data = _load(args.files[0])
        if not isinstance(data, dict):
            raise ValidationError("input", "expected {'base', 'phi', 'psi'}")
        base = MeasureSpace.from_json(data.get("base", {}), "base")
        phi = Automorphism.from_json(data.get("phi", {}), base, "phi")
        psi = Automorphism.from_json(data.get("psi", {}), base, "psi")
        try:
            w = pair_of_pants(phi, psi)
        except ValueError as exc:
            raise ValidationError("phi/psi", str(exc)) from None
        return CommandResult("ok", w.to_json())
    if args.action == "verify":
        w = CobordismWitness.from_json(_load(args.files[0]))
        report = verify_witness(w)
        return CommandResult(report.status, report.to_json())
    raise ValidationError("suspension", f"unknown action {args.action!r}")


def cmd_chern_weil(args) -> CommandResult:
    from . import chernweil as cw
    from .geometries import builtin, geometry_from_json

    if Path(args.geometry).suffix == ".json" or args.geometry == "-":
        geo = geometry_from_json(_load(args.geometry), args.resolution)
    else:
        geo = builtin(args.geometry, args.resolution)
    dim = geo.grid.dim
    tol = args.tolerance if args.tolerance is not None else (1e-3 if dim == 2 else 0.05)
    polys = {name: poly for name, (poly, _) in geo.expected.items()}
    values = cw.characteristic_integrals(geo.field, geo.grid, polys)
    integrals, ok = [], True
    for name, (poly, expected) in geo.expected.items():
        v = values[name]
        entry = {
            "invariant": name,
            "integral": v,
            "residual_vs_integer": abs(v - round(v)),
        }
        if expected is not None:
            # relative in 4D: the coarse grid is accurate to a few percent
            scale = 1.0 if dim == 2 else max(1.0, abs(expected))
            entry["expected"] = expected
            entry["residual"] = abs(v - expected)
            entry["pass"] = bool(abs(v - expected) <= tol * scale)
            ok &= entry["pass"]
        integrals.append(entry)
    payload = {
        "geometry": geo.name,
        "resolution": geo.grid.resolution,
        "tolerance": tol,
        "normalization": "ch_n = tr((iR/2pi)^n)/n!, p = det(1 + R/2pi) on the realification",
        "integrals": integrals,
    }
    checks = [c for c in (args.checks or "").split(",") if c]
    if "independence" in checks:
        rep = cw.connection_independence_check(geo.field, geo.grid, seed=args.seed, tolerance=args.independence_tolerance)
        payload["connection_independence"] = rep.to_json()
        ok &= rep.passed
    if "whitney" in checks:
        rep = cw.whitney_sum_check(geo.field, geo.field, geo.grid, tolerance=args.whitney_tolerance)
        payload["whitney_sum"] = rep.to_json()
        ok &= rep.passed
    payload["pass"] = bool(ok)
    return CommandResult("ok" if ok else "fail", payload)


def cmd_stokes(args) -> CommandResult:
    from .integration import PrismForm, stokes_check

    f = PrismForm.from_json(_load(args.file))
    rep = stokes_check(f, args.tolerance if args.tolerance is not None else 1e-6)
    return CommandResult("ok" if rep.passed else "fail", rep.to_json())


def cmd_expected_value(args) -> CommandResult:
    from .integration import expected_value

    data = _load(args.file)
    if not isinstance(data, dict) or "observable" not in data:
        raise ValidationError("input", "expected {'ensemble' | 'components', 'observable'}")
    if "ensemble" in data:
        ensemble = cc.EnsembleDescription.from_json(data["ensemble"])
    else:
        ensemble = [(c["id"], c["weight"], c.get("orientation", 1)) for c in data.get("components", [])]
    try:
        value = expected_value(ensemble, data["observable"])
    except KeyError as exc:
        raise ValidationError("observable", exc.args[0]) from None
    return CommandResult("ok", {"expected_value": format_scalar(value)})


# -- entry point --------------------------------------------------------------


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    # shared so the flags work before or after the subcommand
    opts = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    opts.add_argument("--format", choices=("json", "csv", "table"), default=d("json"))
    opts.add_argument("--seed", type=int, default=d(0), help="seed for randomized checks")
    opts.add_argument("--tolerance", type=float, default=d(None), help="override the numeric tolerance")
    return opts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randman", description=__doc__.splitlines()[0], parents=[_global_options(False)]
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_global_options(True)]

    p = sub.add_parser("phi0", parents=common, help="phi0 of a random 0-manifold")
    p.add_argument("file")
    p.set_defaults(func=cmd_phi0)

    p = sub.add_parser("pontryagin-table", parents=common, help="Pontryagin numbers p_beta(M_alpha)")
    p.add_argument("n", type=int)
    p.add_argument("--max-n", type=int, default=5)
    p.set_defaults(func=cmd_pontryagin_table)

    p = sub.add_parser("solve-target", parents=common, help="ensemble with prescribed Pontryagin numbers")
    p.add_argument("file")
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=cmd_solve_target)

    p = sub.add_parser("suspension", parents=common, help="random 1-manifolds and cobordism witnesses")
    p.add_argument("action", choices=("normal-form", "split", "pair-of-pants", "verify"))
    p.add_argument("files", nargs=1)
    p.set_defaults(func=cmd_suspension)

    p = sub.add_parser("chern-weil", parents=common, help="characteristic numbers of a projection field")
    p.add_argument("geometry", help="built-in name or geometry JSON file")
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--checks", default="", help="comma list: independence, whitney")
    p.add_argument("--independence-tolerance", type=float, default=1e-2)
    p.add_argument("--whitney-tolerance", type=float, default=2e-3)
    p.set_defaults(func=cmd_chern_weil)

    p = sub.add_parser("stokes", parents=common, help="Stokes identity on a prism")
    p.add_argument("file")
    p.set_defaults(func=cmd_stokes)

    p = sub.add_parser("expected-value", parents=common, help="measure-weighted observable")
    p.add_argument("file")
    p.set_defaults(func=cmd_expected_value)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except (ValidationError, StructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT["invalid"]
    except (OSError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT["invalid"]
    sys.stdout.write(result.render(args.format))
    return EXIT[result.status]


if __name__ == "__main__":
    sys.exit(main())
