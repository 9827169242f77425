"""Command-line front end.

Usage::

    cosserat convert --to dislocation material.json
    cosserat check material.json
    cosserat energy material.json --strain '[[...]]' --curvature '[[...]]'
    cosserat dispersion material.json --points 50 --out sweep.csv
    cosserat nye-verify --degree 4 --seed 0
    cosserat reproduce --format table

Exit codes: 0 success, 1 failed check, 2 usage or parse error, 3 invalid
physical input.  ``COSSERAT_UNITS`` sets the default unit system of material
documents that do not declare one.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import data, polyfield as pf
from .constitutive import check_conditions, energy
from .errors import CosseratError, SchemaError
from .params import (
    Notation,
    TaggedParams,
    UnitSystem,
    loads,
    technical_block,
    to_dict,
    to_dislocation,
    convert,
)
from .waves import WaveMedium, dispersion_sweep, real_wave_scan

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3
DEFAULT_LC_MM = 1.0
UNITS_ENV = "COSSERAT_UNITS"

_NOTATION_CHOICES = {
    "dislocation": Notation.DISLOCATION,
    "eringen": Notation.ERINGEN,
    "nowacki": Notation.NOWACKI,
    "mindlin": Notation.MINDLIN,
    "lakes": Notation.LAKES,
    "relaxed": Notation.RELAXED,
}


class UsageError(Exception):
    pass


def _num(v):
    """JSON-safe number: infinities as "inf", NaN as null."""
    if v is None:
        return None
    if isinstance(v, float):
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
    return v


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _emit(doc, out=None) -> None:
    out = out or sys.stdout
    json.dump(_clean(doc), out, indent=2, allow_nan=False)
    out.write("\n")


def _fmt6(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "n/a"
    if isinstance(v, float):
        return "inf" if math.isinf(v) else f"{v:.6g}"
    return str(v)


def _default_units(args) -> UnitSystem:
    text = args.units or os.environ.get(UNITS_ENV) or UnitSystem.MPA_MM.value
    try:
        return UnitSystem.parse(text)
    except SchemaError as exc:
        raise UsageError(str(exc)) from exc


def _read_material(args) -> TaggedParams:
    src = args.input
    if src.lstrip().startswith("{"):
        text = src
    elif src == "-":
        text = sys.stdin.read()
    else:
        path = Path(src)
        if not path.is_file():
            raise UsageError(f"no such file: {src}")
        text = path.read_text()
    try:
        return loads(text, _default_units(args))
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    except SchemaError as exc:
        raise UsageError(str(exc)) from exc


def _length(args, p: TaggedParams) -> float | None:
    """Gauge length in the record's own units."""
    if args.lc is not None:
        lc_mm = args.lc
    elif p.L_c is not None or p.notation in (Notation.DISLOCATION, Notation.RELAXED):
        return None
    else:
        lc_mm = DEFAULT_LC_MM
    return lc_mm * 1e-3 if p.unit_system is UnitSystem.SI else lc_mm


def _gauge_block(p: TaggedParams, lc) -> dict:
    try:
        d = to_dislocation(p, lc)
    except CosseratError as exc:
        return {"unavailable": str(exc)}
    p1, p2, p3 = d.gauge_products
    a = d.a_weights
    c = d.curvature_scale
    return {
        "L_c": d.L_c,
        "muLc2_alpha1": p1,
        "muLc2_alpha2": p2,
        "muLc2_alpha3": p3,
        "muLc2_a1": c * a[0],
        "muLc2_a2": c * a[1],
        "muLc2_a3": c * a[2],
    }


def _technical(p: TaggedParams, lc) -> dict:
    try:
        return technical_block(to_dislocation(p, lc))
    except CosseratError as exc:
        return {"unavailable": str(exc)}


def run_convert(args) -> int:
    p = _read_material(args)
    target = _NOTATION_CHOICES[args.to]
    lc = _length(args, p)
    out = convert(p, target, lc)
    doc = {
        "material": to_dict(out),
        "gauge_products": _gauge_block(p, lc),
        "technical_constants": _technical(p, lc),
    }
    if args.format == "table":
        for section, block in doc.items():
            print(f"[{section}]")
            vals = block.get("values", block) if section == "material" else block
            for k, v in vals.items():
                print(f"  {k:<14} {_fmt6(v)}")
    else:
        _emit(doc)
    return EXIT_OK


def run_check(args) -> int:
    p = _read_material(args)
    d = to_dislocation(p, _length(args, p))
    rep = check_conditions(d)
    if args.format == "table":
        for k, v in rep.as_dict().items():
            if k != "violated":
                print(f"{k:<20} {v}")
        for v in rep.violated:
            print(f"violated [{v.condition}] {v.inequality}  margin={_fmt6(v.margin)}")
    else:
        _emit(rep.as_dict())
    return EXIT_OK if rep.well_posed else EXIT_FAIL


def _matrix_arg(text: str | None, name: str) -> np.ndarray:
    if text is None:
        return np.zeros((3, 3))
    try:
        m = np.asarray(json.loads(text), dtype=float)
    except (json.JSONDecodeError, ValueError, TypeError) as exc:
        raise UsageError(f"--{name} must be a JSON 3x3 array") from exc
    if m.shape != (3, 3):
        raise UsageError(f"--{name} must be a JSON 3x3 array")
    return m


def run_energy(args) -> int:
    p = _read_material(args)
    e = _matrix_arg(args.strain, "strain")
    K = _matrix_arg(args.curvature, "curvature")
    if p.notation is Notation.RELAXED:
        raise UsageError("energy evaluation needs a micropolar notation")
    w = energy(p, e, K)
    _emit({"notation": p.notation.value, "units": p.unit_system.value, "energy": w})
    return EXIT_OK


CSV_HEADER = ("k", "branch_label", "omega", "omega_sq", "phase_velocity", "group_velocity", "real_flag")


def _csv_num(v: float) -> str:
    return repr(float(v)) if not math.isfinite(v) else f"{v:.17e}"


def write_dispersion_csv(result, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for k, lab, om, om2, ph, gr, real in result.rows():
        writer.writerow([_csv_num(k), lab, _csv_num(om), _csv_num(om2), _csv_num(ph), _csv_num(gr), str(real).lower()])


def run_dispersion(args) -> int:
    p = _read_material(args)
    w = WaveMedium.from_params(TaggedParams(p.notation, p.payload, p.unit_system, _si_length(args, p)))
    lc = w.d.L_c
    kmin = args.k_min if args.k_min is not None else 1e-3 / lc
    kmax = args.k_max if args.k_max is not None else 1e4 / lc
    if not 0 < kmin < kmax or args.points < 1:
        raise UsageError("need 0 < k-min < k-max and at least one point")
    grid = np.logspace(math.log10(kmin), math.log10(kmax), args.points)
    result = dispersion_sweep(w, grid)
    sidecar = {
        "asymptotic": result.asymptotic,
        "cutoff_frequency": result.cutoff_frequency,
        "real_wave_scan": real_wave_scan(w, grid),
        "closed_form_real_plane_waves": check_conditions(w.d).real_plane_waves,
        "k_min": kmin,
        "k_max": kmax,
        "points": args.points,
    }
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_dispersion_csv(result, fh)
        side = args.sidecar or f"{args.out}.json"
        with open(side, "w") as fh:
            _emit(sidecar, fh)
    else:
        write_dispersion_csv(result, sys.stdout)
        if args.sidecar:
            with open(args.sidecar, "w") as fh:
                _emit(sidecar, fh)
        else:
            _emit(sidecar, sys.stderr)
    return EXIT_OK


def _si_length(args, p: TaggedParams):
    lc = _length(args, p)
    return lc if lc is not None else p.L_c


def run_nye_verify(args) -> int:
    if not 0 <= args.degree <= pf.MAX_DEGREE - 1:
        raise UsageError(f"--degree must be in [0, {pf.MAX_DEGREE - 1}]")
    if args.points < 1:
        raise UsageError("--points must be positive")
    rng = np.random.default_rng(args.seed)
    if args.field == "anti-x":
        field = pf.anti_field(pf.PolyVectorField.position())
    else:
        field = pf.random_skew(rng, args.degree)
    pts = rng.uniform(-1.0, 1.0, size=(args.points, 3))
    per = pf.nye_discrepancies(field, pts)
    worst = max(per.values())
    ok = worst <= 1e-12
    _emit(
        {
            "field": args.field,
            "degree": 1 if args.field == "anti-x" else args.degree,
            "seed": args.seed,
            "points": args.points,
            "discrepancy": worst,
            "identities": per,
            "verdict": "PASS" if ok else "FAIL",
        }
    )
    return EXIT_OK if ok else EXIT_FAIL


def run_reproduce(args) -> int:
    t0 = time.perf_counter()
    cells = data.reproduce_tables()
    ok = data.reproduction_passes(cells)
    elapsed = time.perf_counter() - t0
    if args.format == "table":
        print(f"{'material':<14}{'column':<15}{'published':>14}{'computed':>14}{'rel.dev':>12}  status")
        for c in cells:
            print(
                f"{c.material:<14}{c.column:<15}{_fmt6(c.published):>14}{_fmt6(c.computed):>14}"
                f"{_fmt6(c.deviation):>12}  {c.status}"
            )
        print("PASS" if ok else "FAIL")
    else:
        _emit(
            {
                "dataset_version": data.DATASET_VERSION,
                "tolerance": data.REL_TOL,
                "cells": [c.__dict__ for c in cells],
                "verdict": "PASS" if ok else "FAIL",
                "seconds": elapsed,
            }
        )
    return EXIT_OK if ok else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cosserat", description="Linear isotropic Cosserat elasticity toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def material(sp):
        sp.add_argument("input", help="material JSON file, '-' for stdin, or inline JSON")
        sp.add_argument("--units", choices=[u.value for u in UnitSystem], help="default unit system")
        sp.add_argument("--lc", type=float, help="gauge length L_c in mm (default 1)")

    sp = sub.add_parser("convert", help="convert between parameter notations")
    material(sp)
    sp.add_argument("--to", required=True, choices=sorted(_NOTATION_CHOICES))
    sp.add_argument("--format", choices=("json", "table"), default="json")
    sp.set_defaults(func=run_convert)

    sp = sub.add_parser("check", help="evaluate the constitutive conditions")
    material(sp)
    sp.add_argument("--format", choices=("json", "table"), default="json")
    sp.set_defaults(func=run_check)

    sp = sub.add_parser("energy", help="energy density for given strain and curvature")
    material(sp)
    sp.add_argument("--strain", help="dislocation strain Du - A as a JSON 3x3 array")
    sp.add_argument("--curvature", help="wryness D axl A as a JSON 3x3 array")
    sp.set_defaults(func=run_energy)

    sp = sub.add_parser("dispersion", help="plane-wave dispersion sweep (CSV)")
    material(sp)
    sp.add_argument("--points", type=int, default=50)
    sp.add_argument("--k-min", type=float, help="smallest wavenumber in 1/m")
    sp.add_argument("--k-max", type=float, help="largest wavenumber in 1/m")
    sp.add_argument("--out", help="CSV path (default stdout)")
    sp.add_argument("--sidecar", help="JSON sidecar path")
    sp.set_defaults(func=run_dispersion)

    sp = sub.add_parser("nye-verify", help="check Nye's formula on a polynomial field")
    sp.add_argument("--degree", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--points", type=int, default=1000)
    sp.add_argument("--field", choices=("random", "anti-x"), default="random")
    sp.set_defaults(func=run_nye_verify)

    sp = sub.add_parser("reproduce", help="recompute the published parameter table")
    sp.add_argument("--format", choices=("json", "table"), default="json")
    sp.set_defaults(func=run_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cosserat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CosseratError as exc:
        print(f"cosserat: invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
