"""Command-line front end: spectrum, identity suite, pairing tables, phase sweep.

Reports are JSON (schema "etapt/1") or CSV.  Output is deterministic:
field order is fixed, floats carry 15 significant digits, residual-like
quantities get a scientific-notation companion field, and nothing
time-dependent enters the data section, so identical configurations
produce byte-identical files.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 usage or
configuration error, 3 numerical backend failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from .fock import DimensionError, DimensionMismatchError
from .model import (
    BrokenPhaseError,
    OscillatorParams,
    TruncationLimitError,
    theta_of,
)
from .symm import (
    DegenerateEigenbasisError,
    MetricDecompositionError,
    eta_tilde,
    metric,
)
from .verify import (
    GramReport,
    IllConditionedNormalizationError,
    LevelMatch,
    ResidualReport,
    SpectrumReport,
    SweepPoint,
    SweepReport,
    gram,
    identity_suite,
    matched_eigenpairs,
    phase_sweep,
    spectrum_report,
)

SCHEMA = "etapt/1"

DEFAULTS = {
    "c1_sq": 2.0,
    "c2_sq": 1.0,
    "c3": 0.5,
    "dims": (24, 24),
    "k": 6,
    "bulk_fraction": 0.5,
    "tolerances": {"reality": 1e-8, "convergence": 1e-6, "machine": 1e-13},
    "boundary_tol": 1e-4,
    "sweep_grid": {"c3_min": 0.0, "c3_max": 1.5, "c3_step": 0.05},
    "jobs": 1,
    "format": "json",
}


class UsageError(ValueError):
    """Configuration rejected before any computation started."""


@dataclass(frozen=True)
class RunConfig:
    """Validated per-run configuration shared by all commands."""

    params: OscillatorParams
    dims: tuple[int, int]
    k: int
    bulk_fraction: float
    tolerances: dict
    output: str | None
    fmt: str
    jobs: int

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        if args.k < 1:
            raise UsageError(f"-k must be at least 1, got {args.k}")
        if not 0.0 < args.bulk_fraction <= 1.0:
            raise UsageError(f"--bulk-fraction must lie in (0, 1], got {args.bulk_fraction}")
        tolerances = {
            "reality": args.reality_tol,
            "convergence": args.convergence_tol,
            "machine": args.machine_tol,
        }
        for name, value in tolerances.items():
            if value <= 0:
                raise UsageError(f"{name} tolerance must be positive, got {value}")
        if any(d < 2 for d in args.dims):
            raise UsageError(f"--dims entries must be at least 2, got {args.dims}")
        if args.jobs < 1:
            raise UsageError(f"--jobs must be at least 1, got {args.jobs}")
        try:
            params = OscillatorParams(args.c1sq, args.c2sq, args.c3)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return cls(
            params=params,
            dims=args.dims,
            k=args.k,
            bulk_fraction=args.bulk_fraction,
            tolerances=tolerances,
            output=args.output,
            fmt=args.format,
            jobs=args.jobs,
        )

    def as_table(self) -> dict:
        return {
            "c1_sq": self.params.c1_sq,
            "c2_sq": self.params.c2_sq,
            "c3": self.params.c3,
            "dims": list(self.dims),
            "k": self.k,
            "bulk_fraction": self.bulk_fraction,
            "tolerances": dict(self.tolerances),
        }


def _round15(value: float) -> float:
    return float(f"{value:.15g}")


def _sci(value: float) -> str:
    return f"{value:.3e}"


def _jsonable(obj):
    """Recursively convert report objects to JSON-ready structures."""
    if isinstance(obj, ResidualReport):
        return {
            "name": obj.name,
            "residual": _round15(obj.residual),
            "residual_sci": _sci(obj.residual),
            "bulk_fraction": obj.bulk_fraction,
            "dims": list(obj.dims),
            "tolerance": obj.tolerance,
            "pass": obj.passed,
        }
    if isinstance(obj, LevelMatch):
        return {
            "n1": obj.n1,
            "n2": obj.n2,
            "energy": _round15(obj.energy),
            "value": _jsonable(obj.value),
            "abs_error": _round15(obj.abs_error),
            "abs_error_sci": _sci(obj.abs_error),
        }
    if isinstance(obj, SpectrumReport):
        return {
            "dims": list(obj.dims),
            "k": obj.k,
            "phase": obj.phase,
            "numeric": [_jsonable(v) for v in obj.numeric],
            "matched": [_jsonable(m) for m in obj.matched],
            "unmatched": [_jsonable(m) for m in obj.unmatched],
            "max_imag": _round15(obj.max_imag),
            "max_imag_sci": _sci(obj.max_imag),
            "n_nonreal": obj.n_nonreal,
            "pair_defect": _round15(obj.pair_defect),
            "pair_defect_sci": _sci(obj.pair_defect),
            "tol_convergence": obj.tol_convergence,
            "tol_reality": obj.tol_reality,
            "pass": obj.passed,
        }
    if isinstance(obj, GramReport):
        return {
            "form": obj.form,
            "target": obj.target,
            "signs": [int(s) for s in obj.signs],
            "labels": [list(lab) for lab in obj.labels],
            "matrix": [[_jsonable(complex(v)) for v in row] for row in np.asarray(obj.matrix)],
            "max_deviation": _round15(obj.max_deviation),
            "max_deviation_sci": _sci(obj.max_deviation),
            "tolerance": obj.tolerance,
            "pass": obj.passed,
        }
    if isinstance(obj, SweepPoint):
        return {
            "c3": _round15(obj.c3),
            "max_imag": _round15(obj.max_imag),
            "max_imag_sci": _sci(obj.max_imag),
            "unbroken_analytic": obj.unbroken_analytic,
            "unbroken_numeric": obj.unbroken_numeric,
        }
    if isinstance(obj, SweepReport):
        return {
            "c1_sq": obj.c1_sq,
            "c2_sq": obj.c2_sq,
            "dims": list(obj.dims),
            "k": obj.k,
            "points": [_jsonable(p) for p in obj.points],
            "analytic_boundary": _round15(obj.analytic_boundary),
            "detected_boundary": None
            if obj.detected_boundary is None
            else _round15(obj.detected_boundary),
            "boundary_tol": obj.boundary_tol,
            "reality_tol": obj.reality_tol,
            "within_one_step": obj.within_one_step,
            "warning": obj.warning,
            "pass": obj.passed,
        }
    if isinstance(obj, complex):
        return {"re": _round15(obj.real), "im": _round15(obj.imag)}
    if isinstance(obj, (np.floating, float)):
        return _round15(float(obj))
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {key: _jsonable(val) for key, val in obj.items()}
    return obj


def _envelope(command: str, config: dict, results, passed: bool) -> str:
    payload = {
        "schema": SCHEMA,
        "command": command,
        "config": _jsonable(config),
        "results": _jsonable(results),
        "pass": bool(passed),
    }
    return json.dumps(payload, indent=2) + "\n"


def _csv_text(header, rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _fmt_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.15g}"
    return str(value)


def cmd_spectrum(config: RunConfig, args) -> tuple[str, bool]:
    report = spectrum_report(
        config.params,
        config.dims,
        config.k,
        tol_convergence=config.tolerances["convergence"],
        tol_reality=config.tolerances["reality"],
    )
    if config.fmt == "csv":
        if report.phase == "unbroken":
            header = ["n1", "n2", "energy", "value_re", "value_im", "abs_error"]
            rows = [
                [m.n1, m.n2, _fmt_cell(m.energy), _fmt_cell(m.value.real),
                 _fmt_cell(m.value.imag), _fmt_cell(m.abs_error)]
                for m in report.matched
            ]
        else:
            header = ["value_re", "value_im"]
            rows = [[_fmt_cell(v.real), _fmt_cell(v.imag)] for v in report.numeric]
        return _csv_text(header, rows), report.passed
    return _envelope("spectrum", config.as_table(), report, report.passed), report.passed


def cmd_verify(config: RunConfig, args) -> tuple[str, bool]:
    reports = identity_suite(
        config.params,
        config.dims,
        bulk=config.bulk_fraction,
        tolerance=config.tolerances["reality"],
        machine_tolerance=config.tolerances["machine"],
        theta_override=args.theta_override,
    )
    passed = all(r.passed for r in reports)
    if config.fmt == "csv":
        header = ["name", "residual", "residual_sci", "bulk_fraction", "tolerance", "pass"]
        rows = [
            [r.name, _fmt_cell(r.residual), _sci(r.residual),
             _fmt_cell(r.bulk_fraction), _fmt_cell(r.tolerance), _fmt_cell(r.passed)]
            for r in reports
        ]
        return _csv_text(header, rows), passed
    table = config.as_table()
    table["theta_override"] = args.theta_override
    return _envelope("verify", table, list(reports), passed), passed


def cmd_gram(config: RunConfig, args) -> tuple[str, bool]:
    vectors, labels, _values = matched_eigenpairs(config.params, config.dims, config.k)
    et = eta_tilde(metric(theta_of(config.params), config.dims))
    plain = gram(
        vectors,
        et,
        form="eta-tilde",
        labels=labels,
        tolerance=config.tolerances["convergence"],
        degeneracy_threshold=config.tolerances["reality"],
    )
    corrected = gram(
        vectors,
        et,
        form="c-eta-tilde",
        labels=labels,
        tolerance=config.tolerances["convergence"],
        degeneracy_threshold=config.tolerances["reality"],
    )
    passed = plain.passed and corrected.passed
    if config.fmt == "csv":
        header = ["form", "row", "col", "value_re", "value_im"]
        rows = []
        for rep in (plain, corrected):
            mat = np.asarray(rep.matrix)
            for i in range(mat.shape[0]):
                for j in range(mat.shape[1]):
                    rows.append(
                        [rep.form, i, j,
                         _fmt_cell(float(mat[i, j].real)), _fmt_cell(float(mat[i, j].imag))]
                    )
        return _csv_text(header, rows), passed
    results = {"eta_tilde": plain, "c_eta_tilde": corrected}
    return _envelope("gram", config.as_table(), results, passed), passed


def cmd_sweep(config: RunConfig, args) -> tuple[str, bool]:
    if args.c3_step <= 0:
        raise UsageError(f"--c3-step must be positive, got {args.c3_step}")
    if args.c3_max < args.c3_min:
        raise UsageError(
            f"empty coupling grid: --c3-max {args.c3_max} < --c3-min {args.c3_min}"
        )
    grid = np.arange(args.c3_min, args.c3_max + 0.5 * args.c3_step, args.c3_step)
    if len(grid) == 0:
        raise UsageError("empty coupling grid")
    report = phase_sweep(
        config.params.c1_sq,
        config.params.c2_sq,
        grid,
        config.dims,
        config.k,
        reality_tol=config.tolerances["reality"],
        boundary_tol=args.boundary_tol,
        jobs=config.jobs,
    )
    if config.fmt == "csv":
        header = ["c3", "max_imag", "unbroken_analytic", "unbroken_numeric"]
        rows = [
            [_fmt_cell(p.c3), _fmt_cell(p.max_imag),
             _fmt_cell(p.unbroken_analytic), _fmt_cell(p.unbroken_numeric)]
            for p in report.points
        ]
        return _csv_text(header, rows), report.passed
    table = config.as_table()
    table["c3_grid"] = {
        "c3_min": args.c3_min,
        "c3_max": args.c3_max,
        "c3_step": args.c3_step,
    }
    table["boundary_tol"] = args.boundary_tol
    return _envelope("sweep", table, report, report.passed), report.passed


def _parse_dims(text: str) -> tuple[int, int]:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"dims must look like 24,24 (got {text!r})") from exc
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"dims needs exactly two entries (got {text!r})")
    return parts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="etapt",
        description="Numerical checks for a non-Hermitian coupled-oscillator model "
        "with a metric-generated antilinear symmetry.",
    )
    parser.add_argument(
        "--show-defaults",
        action="store_true",
        help="print the default configuration table as JSON and exit",
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--c1sq", type=float, default=DEFAULTS["c1_sq"],
                        help="squared stiffness of mode 1")
    common.add_argument("--c2sq", type=float, default=DEFAULTS["c2_sq"],
                        help="squared stiffness of mode 2")
    common.add_argument("--c3", type=float, default=DEFAULTS["c3"],
                        help="imaginary-coupling coefficient")
    common.add_argument("--dims", type=_parse_dims, default=DEFAULTS["dims"],
                        metavar="N1,N2", help="levels kept per mode")
    common.add_argument("-k", type=int, default=DEFAULTS["k"],
                        help="number of low-lying levels")
    common.add_argument("--bulk-fraction", type=float, default=DEFAULTS["bulk_fraction"],
                        help="occupation cutoff fraction for bulk-projected residuals")
    common.add_argument("--reality-tol", type=float,
                        default=DEFAULTS["tolerances"]["reality"],
                        help="tolerance on imaginary parts and bulk identities")
    common.add_argument("--convergence-tol", type=float,
                        default=DEFAULTS["tolerances"]["convergence"],
                        help="tolerance on truncation-limited comparisons")
    common.add_argument("--machine-tol", type=float,
                        default=DEFAULTS["tolerances"]["machine"],
                        help="tolerance on structurally exact identities")
    common.add_argument("--output", default=None, help="write the report to this path")
    common.add_argument("--format", choices=("json", "csv"), default=DEFAULTS["format"],
                        help="report format")
    common.add_argument("--jobs", type=int, default=DEFAULTS["jobs"],
                        help="maximum parallel grid points in sweeps")

    sub = parser.add_subparsers(dest="command")
    sub.add_parser("spectrum", parents=[common],
                   help="eigensolve and compare against the analytic ladder")
    p_verify = sub.add_parser("verify", parents=[common],
                              help="run the full identity suite")
    p_verify.add_argument("--theta-override", type=float, default=None,
                          help="deliberately wrong mixing angle (negative control)")
    sub.add_parser("gram", parents=[common],
                   help="bilinear pairing tables in both forms")
    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="scan the coupling and locate the phase boundary")
    p_sweep.add_argument("--c3-min", type=float,
                         default=DEFAULTS["sweep_grid"]["c3_min"])
    p_sweep.add_argument("--c3-max", type=float,
                         default=DEFAULTS["sweep_grid"]["c3_max"])
    p_sweep.add_argument("--c3-step", type=float,
                         default=DEFAULTS["sweep_grid"]["c3_step"])
    p_sweep.add_argument("--boundary-tol", type=float, default=DEFAULTS["boundary_tol"],
                         help="max |Im| level declaring the reality lost")
    return parser


_HANDLERS = {
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "gram": cmd_gram,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.show_defaults:
        payload = {"schema": SCHEMA, "command": "show-defaults", "defaults": DEFAULTS}
        print(json.dumps(_jsonable(payload), indent=2))
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("etapt: error: a command is required (spectrum|verify|gram|sweep)",
              file=sys.stderr)
        return 2

    try:
        config = RunConfig.from_args(args)
        text, passed = _HANDLERS[args.command](config, args)
    except UsageError as exc:
        print(f"etapt: config error: {exc}", file=sys.stderr)
        return 2
    except (
        MetricDecompositionError,
        DegenerateEigenbasisError,
        IllConditionedNormalizationError,
        np.linalg.LinAlgError,
    ) as exc:
        print(f"etapt: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (
        BrokenPhaseError,
        TruncationLimitError,
        DimensionError,
        DimensionMismatchError,
        ValueError,
    ) as exc:
        print(f"etapt: config error: {exc}", file=sys.stderr)
        return 2

    if config.output:
        with open(config.output, "w", encoding="utf-8") as handle:
            handle.write(text)
        status = "pass" if passed else "FAIL"
        print(f"{args.command}: {status}; report written to {config.output}")
    else:
        sys.stdout.write(text)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
