"""Command line front end.

    dualgap report   --preset paper-device
    dualgap cv-sweep --design dev.json --vmax 12 --points 121 --out cv.csv
    dualgap release  --preset paper-device --elements 64 --out release.csv
    dualgap profile  --preset paper-device --out profile.csv

Exit codes: 0 success, 2 design-file schema error, 3 physics-domain error,
4 numerical failure (buckling, non-convergence).
"""
import argparse
import datetime as _dt
import hashlib
import json
import sys
import warnings
from pathlib import Path

from . import __version__
from .core import PF, UM, to_pF, to_um
from .designfile import load_design
from .device import evaluate_design, trace_cv_curve
from .errors import DualGapError, SchemaError
from .io import atomic_write_text, csv_text, fmt, resolve_output
from .lumped import tuning_range
from .profile import count_local_maxima
from .study import build_profile, release_study


def _num(value):
    """JSON number with the same 9-significant-digit rendering as the CSVs."""
    return float(fmt(value))


def _dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _input_digest(bundle, args):
    # where files live and how stdout looks do not change results
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "design", "out", "json")}
    h = hashlib.sha256()
    h.update(bundle.digest.encode())
    h.update(json.dumps(flags, sort_keys=True, default=str).encode())
    return h.hexdigest()


def _manifest(command, bundle, args, outputs, extra=None):
    doc = {
        "command": command,
        "design_source": bundle.source,
        "input_digest": _input_digest(bundle, args),
        "toolkit_version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "outputs": [str(p) for p in outputs],
    }
    if extra:
        doc.update(extra)
    return doc


def _write_outputs(files, manifest_path, manifest):
    """Write every output, then the manifest; remove all of them on failure."""
    written = []
    try:
        for path, text in files:
            written.append(atomic_write_text(path, text))
        written.append(atomic_write_text(manifest_path, _dumps(manifest)))
    except BaseException:
        for p in written:
            Path(p).unlink(missing_ok=True)
        raise


def _sibling(path, suffix):
    return path.with_name(path.stem + suffix)


def report_dict(report):
    c0_pF, cmax_pF = to_pF(report.c_zero), to_pF(report.c_max)
    return {
        "c_zero_pF": _num(c0_pF),
        "c_max_pF": _num(cmax_pF),
        "tr_exact_pct": _num(report.tuning_range),
        # the hand calculation rounds both capacitances to 0.01 pF first
        "tr_paper_rounded_pct": _num(tuning_range(round(c0_pF, 2) * PF, round(cmax_pF, 2) * PF)),
        "v_pi_V": _num(report.pull_in_voltage),
        "dimple_contact_voltage_V": _num(report.dimple_contact_voltage),
        "pull_in_margin_um": _num(to_um(report.pull_in_margin)),
    }


def cmd_report(args, bundle):
    doc = report_dict(evaluate_design(bundle.design))
    text = _dumps(doc)
    if args.out:
        out = resolve_output(args.out)
        _write_outputs([(out, text)], _sibling(out, ".manifest.json"),
                       _manifest("report", bundle, args, [out]))
    sys.stdout.write(text)
    return 0


def cmd_cv_sweep(args, bundle):
    if args.vmax is None or args.vmax <= 0:
        raise SchemaError("--vmax must be > 0", field="--vmax")
    points = args.points if args.points is not None else bundle.solver.cv_points
    if points < 2:
        raise SchemaError("--points must be >= 2", field="--points")
    curve = trace_cv_curve(bundle.design, args.vmax, points)
    rows = [(p.voltage, to_um(p.displacement), to_pF(p.capacitance), p.stable, p.dimple_contact)
            for p in curve.points]
    text = csv_text(["voltage_V", "displacement_um", "capacitance_pF", "stable", "dimple_contact"], rows)
    out = resolve_output(args.out or "cv_sweep.csv")
    last = curve.points[-1]
    summary = {
        "rows": len(rows),
        "final_capacitance_pF": _num(to_pF(last.capacitance)),
        "final_dimple_contact": last.dimple_contact,
        "adaptive": curve.sweep_spec["adaptive"],
    }
    _write_outputs([(out, text)], _sibling(out, ".manifest.json"),
                   _manifest("cv-sweep", bundle, args, [out], {"summary": summary}))
    _emit(args, summary, f"wrote {len(rows)} rows to {out}")
    return 0


def _region_dict(stats):
    return {"min_gap_um": _num(to_um(stats.min_gap)), "max_gap_um": _num(to_um(stats.max_gap)),
            "mean_gap_um": _num(to_um(stats.mean_gap))}


def cmd_release(args, bundle):
    n = args.elements if args.elements is not None else bundle.solver.elements
    if n < 8 or n % 2:
        raise SchemaError("--elements must be an even number >= 8", field="--elements")
    study = release_study(bundle, n)
    release = study.release
    x = release.positions
    from .fem import initial_gap_at
    gap = initial_gap_at(study.initial_profile, x, float(x[-1])) + release.nodal_displacement
    rows = zip(x / UM, release.nodal_displacement / UM, gap / UM)
    text = csv_text(["position_um", "deflection_um", "gap_um"], rows)
    summary = {
        "elements": n,
        "center_deflection_um": _num(to_um(study.center_deflection)),
        "calibrated": study.calibrated,
        "stress_gradient_MPa_per_um": _num(study.stress_gradient * UM / 1e6),
        "regions": {name: _region_dict(s) for name, s in study.regions.items()},
        "released_pull_in_voltage_V": _num(study.released_pull_in_voltage),
    }
    out = resolve_output(args.out or "release.csv")
    summary_path = _sibling(out, ".summary.json")
    _write_outputs([(out, text), (summary_path, _dumps(summary))], _sibling(out, ".manifest.json"),
                   _manifest("release", bundle, args, [out, summary_path]))
    _emit(args, summary, f"center deflection {summary['center_deflection_um']} um; wrote {out}")
    return 0


def cmd_profile(args, bundle):
    spec = bundle.profile
    profile = build_profile(spec, bundle.solver.profile_samples)
    maxima = count_local_maxima(profile)
    text = csv_text(["x_um", "h_um"], zip(profile.x / UM, profile.h / UM))
    out = resolve_output(args.out or "profile.csv")
    summary = {"maxima_count": maxima, "mode": spec.mode,
               "max_height_um": _num(to_um(profile.h.max())),
               "center_height_um": _num(to_um(profile.center_height()))}
    _write_outputs([(out, text)], _sibling(out, ".manifest.json"),
                   _manifest("profile", bundle, args, [out], summary))
    _emit(args, summary, f"maxima_count {maxima}; wrote {out}")
    return 0


def _emit(args, summary, line):
    if args.json:
        sys.stdout.write(_dumps(summary))
    else:
        print(line)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--design", help="JSON design file")
    src.add_argument("--preset", choices=["paper-device"], help="built-in design")
    common.add_argument("--out", help="output path (relative paths honor $DUALGAP_OUTPUT_DIR)")
    common.add_argument("--json", action="store_true", help="machine-readable stdout")

    parser = argparse.ArgumentParser(prog="dualgap", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", parents=[common], help="C0, Cmax, tuning range, pull-in")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("cv-sweep", parents=[common], help="quasi-static C-V curve to CSV")
    p.add_argument("--vmax", type=float, required=True)
    p.add_argument("--points", type=int)
    p.set_defaults(func=cmd_cv_sweep)

    p = sub.add_parser("release", parents=[common], help="post-release membrane profile")
    p.add_argument("--elements", type=int)
    p.set_defaults(func=cmd_release)

    p = sub.add_parser("profile", parents=[common], help="sacrificial-layer height profile")
    p.set_defaults(func=cmd_profile)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.design is None and args.preset is None:
            raise SchemaError("one of --design or --preset is required")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            bundle = load_design(args.design, args.preset)
        return args.func(args, bundle)
    except DualGapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if getattr(exc, "critical_axial_force", None) is not None:
            print(f"critical compressive load: {exc.critical_axial_force:.6g} N", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
