"""Invariant suite run by ``discrete-sho verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from discrete_sho.closed_orbit import closed_orbit, shoelace_area, verify_closure
from discrete_sho.phase_dynamics import (
    OscillatorParams,
    PhasePoint,
    StepParams,
    matrix_power_closed,
    matrix_power_iter,
    modified_hamiltonian,
    trajectory,
    transfer_matrix,
)
from discrete_sho.quantization import energy_level

CLOSURE_TOL = 1e-9
AREA_RTOL = 1e-10
EQ7_RTOL = 1e-12
SHADOW_RTOL = 1e-10
ORACLE_TOL = 1e-10

SHADOW_THETAS = (0.5, 1.0, 2.0, 3.0, 3.9)
SHADOW_STEPS = 10_000
ORACLE_THETAS = tuple(round(0.1 * i, 1) for i in range(1, 40))
ORACLE_POWERS = tuple(range(1, 65))


@dataclass
class CheckResult:
    name: str
    tolerance: float
    worst: float = 0.0
    counterexample: str | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def record(self, value: float, where: str) -> None:
        if math.isnan(value) or value > self.worst:
            self.worst = value
        if self.counterexample is None and not value <= self.tolerance:
            self.counterexample = f"{where}: {value:.3e} > {self.tolerance:.0e}"


@dataclass
class VerificationReport:
    n_min: int
    n_max: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> CheckResult | None:
        return next((c for c in self.checks if not c.passed), None)


def run_verification(
    n_min: int = 3,
    n_max: int = 100,
    params: OscillatorParams | None = None,
    theta_shift: float = 0.0,
) -> VerificationReport:
    """Run closure, area, quantization, shadow-conservation and oracle checks.

    ``theta_shift`` perturbs every solved theta; it is a negative control that
    must make the closure check fail.
    """
    params = params or OscillatorParams()
    closure = CheckResult("closure", CLOSURE_TOL)
    area = CheckResult("area_identity", AREA_RTOL)
    action = CheckResult("action_quantization", AREA_RTOL)
    eq7 = CheckResult("energy_time_product", EQ7_RTOL)

    for n in range(n_min, n_max + 1):
        orbit = closed_orbit(n, params, theta_shift=theta_shift)
        report = verify_closure(orbit, CLOSURE_TOL)
        closure.record(
            max(report.matrix_residual, report.return_residual, report.hamiltonian_spread), f"n={n}"
        )
        shoelace = shoelace_area(orbit.raw_vertices())
        expected = 0.5 * n * params.k * orbit.tau_n * orbit.amplitude**2
        area.record(abs(shoelace - expected) / shoelace, f"n={n}")
        action.record(abs(shoelace - n * params.h) / (n * params.h), f"n={n}")
        eq7.record(abs(energy_level(n, params) * orbit.tau_n / params.h - 1.0), f"n={n}")

    shadow = CheckResult("shadow_conservation", SHADOW_RTOL)
    for theta in SHADOW_THETAS:
        sp = StepParams.from_theta(theta, params)
        path = trajectory(PhasePoint(1.0, 0.0), transfer_matrix(sp, params), SHADOW_STEPS)
        values = np.array([modified_hamiltonian(PhasePoint(q, p), sp, params) for q, p in path])
        drift = float(np.max(np.abs(values - values[0])) / abs(values[0]))
        shadow.record(drift, f"theta={theta}")

    oracle = CheckResult("oracle_equivalence", ORACLE_TOL)
    for theta in ORACLE_THETAS:
        sp = StepParams.from_theta(theta, params)
        for n in ORACLE_POWERS:
            diff = matrix_power_closed(sp, params, n).max_abs_diff(matrix_power_iter(sp, params, n))
            oracle.record(diff, f"theta={theta}, n={n}")

    return VerificationReport(n_min, n_max, [closure, area, action, eq7, shadow, oracle])
