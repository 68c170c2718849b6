"""Command-line entry point: ``discrete-sho {table,orbit,spectrum,figure,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from discrete_sho.closed_orbit import START_P, START_Q, closed_orbit, closure_residual, polygon_action
from discrete_sho.errors import DiscreteOscillatorError
from discrete_sho.phase_dynamics import OscillatorParams
from discrete_sho.quantization import energy_level, spectrum_table
from discrete_sho.verification import run_verification

PRECISION_ENV = "DISCRETE_SHO_PRECISION"
DEFAULT_PRECISION = 12
N_LIMITS = (3, 1_000_000)

TABLE_COLUMNS = ("n", "theta_n", "tau_n_omega", "q_n_reduced", "E_n_over_h_omega", "delta_n", "cycle_ratio")


class UsageError(Exception):
    pass


def parse_n_range(text: str) -> tuple[int, int]:
    """Parse ``"7"`` or ``"3..20"`` into an inclusive ``(lo, hi)`` pair."""
    lo_text, sep, hi_text = text.partition("..")
    try:
        lo = int(lo_text)
        hi = int(hi_text) if sep else lo
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or N..M, got {text!r}") from None
    if lo < N_LIMITS[0]:
        raise argparse.ArgumentTypeError(f"degenerate cycle n={lo}: cycles start at n=3")
    if hi > N_LIMITS[1] or lo > hi:
        raise argparse.ArgumentTypeError(f"n-range {text!r} must lie within [3, 1000000] with lo <= hi")
    return lo, hi


def round_sig(x: float, digits: int) -> float:
    """Round to ``digits`` significant digits; ``repr`` of the result is its shortest decimal."""
    if not math.isfinite(x) or x == 0:
        return x
    return float(f"{x:.{digits}g}")


def _cell(value, digits: int):
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    return round_sig(float(value), digits)


def _csv_text(columns, rows, digits: int, preamble=()) -> str:
    buf = io.StringIO()
    for line in preamble:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([repr(c) if isinstance(c, float) else c for c in (_cell(v, digits) for v in row)])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _records(columns, rows, digits: int) -> list[dict]:
    return [{c: _cell(v, digits) for c, v in zip(columns, row)} for row in rows]


def emit_rows(cfg, columns, rows, meta=None) -> str:
    digits = cfg.precision
    if cfg.format == "json":
        records = _records(columns, rows, digits)
        if meta is None:
            return _json_text(records)
        return _json_text({**{k: _cell(v, digits) for k, v in meta.items()}, "rows": records})
    preamble = [f"{k}={_cell(v, digits)!r}" if isinstance(v, float) else f"{k}={v}" for k, v in (meta or {}).items()]
    return _csv_text(columns, rows, digits, preamble)


def params_from(cfg) -> OscillatorParams:
    if cfg.k is not None:
        return OscillatorParams.from_k(cfg.k, h=cfg.h)
    if cfg.omega is not None:
        return OscillatorParams.from_omega(cfg.omega, h=cfg.h)
    return OscillatorParams(h=cfg.h)


def cmd_table(cfg) -> tuple[str, int]:
    lo, hi = cfg.n
    rows = [
        (r.n, r.theta_n, r.tau_n_omega, r.amplitude_reduced, r.energy_over_h_omega, r.spacing, r.cycle_ratio)
        for r in spectrum_table(lo, hi, params_from(cfg))
    ]
    return emit_rows(cfg, TABLE_COLUMNS, rows), 0


def cmd_spectrum(cfg) -> tuple[str, int]:
    """Quantized spectrum in the configured physical units."""
    params = params_from(cfg)
    lo, hi = cfg.n
    columns = ("n", "tau_n", "E_n", "E_n_tau_n_over_h", "action", "n_h")
    rows = []
    for n in range(lo, hi + 1):
        orbit = closed_orbit(n, params, start=cfg.start)
        energy = energy_level(n, params)
        rows.append((n, orbit.tau_n, energy, energy * orbit.tau_n / params.h, polygon_action(orbit), n * params.h))
    return emit_rows(cfg, columns, rows), 0


def cmd_orbit(cfg) -> tuple[str, int]:
    lo, hi = cfg.n
    if lo != hi:
        raise UsageError("orbit takes a single cycle number, not a range")
    orbit = closed_orbit(lo, params_from(cfg), start=cfg.start)
    meta = {
        "n": orbit.n,
        "theta_n": orbit.theta_n,
        "tau_n": orbit.tau_n,
        "start": orbit.start,
        "closure_residual": closure_residual(orbit),
        "action": polygon_action(orbit),
    }
    rows = [(j, v.q, v.p) for j, v in enumerate(orbit.vertices)]
    return emit_rows(cfg, ("step", "q_reduced", "p_reduced"), rows, meta), 0


def cmd_figure(cfg) -> tuple[str, int]:
    lo, hi = cfg.n
    table = spectrum_table(lo, hi)
    if cfg.id == 4:
        columns = ("n", "theta_n")
        rows = [(r.n, r.theta_n) for r in table]
    elif cfg.id == 5:
        columns = ("n", "n_tau_n_omega", "two_pi")
        rows = [(r.n, r.n * r.tau_n_omega, 2 * math.pi) for r in table]
    else:
        columns = ("n", "delta_n")
        rows = [(r.n, r.spacing) for r in table]
    return emit_rows(cfg, columns, rows), 0


def cmd_verify(cfg) -> tuple[str, int]:
    lo, hi = cfg.n
    report = run_verification(lo, hi, params_from(cfg), theta_shift=cfg.theta_shift)
    digits = cfg.precision
    if cfg.format == "json":
        text = _json_text(
            {
                "passed": report.passed,
                "n_min": report.n_min,
                "n_max": report.n_max,
                "checks": [
                    {
                        "name": c.name,
                        "passed": c.passed,
                        "worst": _cell(c.worst, digits),
                        "tolerance": c.tolerance,
                        "counterexample": c.counterexample,
                    }
                    for c in report.checks
                ],
            }
        )
    else:
        rows = [(c.name, str(c.passed).lower(), c.worst, c.tolerance, c.counterexample or "") for c in report.checks]
        text = _csv_text(("check", "passed", "worst", "tolerance", "counterexample"), rows, digits)
    failure = report.first_failure()
    if failure is not None:
        print(f"verification failed [{failure.name}] {failure.counterexample}", file=sys.stderr)
        return text, 1
    return text, 0


COMMANDS = {
    "table": cmd_table,
    "spectrum": cmd_spectrum,
    "orbit": cmd_orbit,
    "figure": cmd_figure,
    "verify": cmd_verify,
}


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if not raw:
        return DEFAULT_PRECISION
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_PRECISION
    return value if 1 <= value <= 17 else DEFAULT_PRECISION


def _precision(text: str) -> int:
    value = int(text)
    if not 1 <= value <= 17:
        raise argparse.ArgumentTypeError("precision must be between 1 and 17 significant digits")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=parse_n_range, default=None, help="cycle number N or inclusive range N..M")
    units = common.add_mutually_exclusive_group()
    units.add_argument("--k", type=float, default=None, help="spring constant (omega = sqrt(k))")
    units.add_argument("--omega", type=float, default=None, help="angular frequency (k = omega**2)")
    common.add_argument("--h", type=float, default=1.0, help="action quantum (default 1)")
    common.add_argument(
        "--start", choices=(START_Q, START_P), default=START_Q,
        help="initial reduced point: q -> (1, 0), p -> (0, 1)",
    )
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", default=None, help="write to this path instead of stdout")
    common.add_argument(
        "--precision", type=_precision, default=_default_precision(),
        help=f"significant digits (default ${PRECISION_ENV} or {DEFAULT_PRECISION})",
    )

    parser = argparse.ArgumentParser(
        prog="discrete-sho",
        description="Quantized closed orbits of the symplectic-Euler harmonic oscillator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("table", parents=[common], help="dimensionless spectrum table")
    sub.add_parser("spectrum", parents=[common], help="spectrum in physical units with action check")
    sub.add_parser("orbit", parents=[common], help="polygon vertices of one cycle")
    fig = sub.add_parser("figure", parents=[common], help="plot-ready data series")
    fig.add_argument("--id", type=int, choices=(4, 5, 6), required=True,
                     help="4: theta_n, 5: n*tau_n*omega, 6: level spacing")
    ver = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    ver.add_argument("--theta-shift", type=float, default=0.0,
                     help="perturb every solved theta (negative control)")
    return parser


_DEFAULT_N = {"table": (3, 6), "spectrum": (3, 6), "orbit": (3, 3), "figure": (3, 50), "verify": (3, 100)}


def main(argv=None) -> int:
    parser = build_parser()
    cfg = parser.parse_args(argv)
    if cfg.n is None:
        cfg.n = _DEFAULT_N[cfg.command]
    try:
        text, code = COMMANDS[cfg.command](cfg)
    except (UsageError, DiscreteOscillatorError, ValueError) as exc:
        print(f"discrete-sho {cfg.command}: error: {exc}", file=sys.stderr)
        return 2
    if cfg.output:
        with open(cfg.output, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
