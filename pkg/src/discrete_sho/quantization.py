"""Bohr-Sommerfeld quantization of the closed polygon orbits.

The n-cycle encloses ``n*tau_n*E_n`` of phase-space area. Setting that equal to
``n*h`` gives ``E_n*tau_n = h``, i.e. ``E_n = h*omega/sqrt(theta_n)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from discrete_sho.closed_orbit import closed_orbit, polygon_action, solve_theta
from discrete_sho.errors import DegenerateCycleError
from discrete_sho.phase_dynamics import OscillatorParams

__all__ = [
    "SpectrumRow",
    "energy_level",
    "action_check",
    "level_spacing",
    "cycle_time_ratio",
    "spectrum_row",
    "spectrum_table",
]


@dataclass(frozen=True)
class SpectrumRow:
    """Dimensionless summary of one quantized cycle.

    ``spacing`` is ``(E_{n+1} - E_n)`` in units of ``hbar*omega``.
    """

    n: int
    theta_n: float
    tau_n_omega: float
    energy_over_h_omega: float
    amplitude_reduced: float
    spacing: float
    cycle_ratio: float

    def as_dict(self) -> dict:
        return asdict(self)


def _check_n(n: int) -> None:
    if n < 3:
        raise DegenerateCycleError(f"cycle n={n} encloses no area; need n >= 3")


def energy_level(n: int, params: OscillatorParams | None = None) -> float:
    """Quantized energy ``h*omega/sqrt(theta_n)`` of the n-cycle."""
    params = params or OscillatorParams()
    return params.h * params.omega / math.sqrt(solve_theta(n))


def action_check(n: int, params: OscillatorParams | None = None) -> tuple[float, float]:
    """Return ``(polygon area of the quantized orbit, n*h)``; the two should agree."""
    params = params or OscillatorParams()
    return polygon_action(closed_orbit(n, params)), n * params.h


def level_spacing(n: int) -> float:
    """``2*pi*(theta_{n+1}**-0.5 - theta_n**-0.5)``, the level gap in ``hbar*omega``.

    With ``theta_n = 4*sin(pi/n)**2`` the difference is rewritten through a
    sum-to-product identity so it keeps full relative precision for large n,
    where the two terms are each about ``n`` but differ by about 1.
    """
    _check_n(n)
    a = math.pi / n
    b = math.pi / (n + 1)
    half_gap = 0.5 * math.pi / (n * (n + 1))
    return math.pi * 2.0 * math.cos(0.5 * (a + b)) * math.sin(half_gap) / (math.sin(a) * math.sin(b))


def cycle_time_ratio(n: int) -> float:
    """Cycle time over the classical period, ``n*tau_n*omega / (2*pi)``."""
    _check_n(n)
    return n * math.sqrt(solve_theta(n)) / (2 * math.pi)


def spectrum_row(n: int) -> SpectrumRow:
    theta = solve_theta(n)
    root = math.sqrt(theta)
    return SpectrumRow(
        n=n,
        theta_n=theta,
        tau_n_omega=root,
        energy_over_h_omega=1.0 / root,
        amplitude_reduced=theta**-0.25,
        spacing=level_spacing(n),
        cycle_ratio=cycle_time_ratio(n),
    )


def spectrum_table(n_min: int, n_max: int, params: OscillatorParams | None = None) -> list[SpectrumRow]:
    """Rows for every cycle number in ``[n_min, n_max]``, sorted by n.

    All columns are dimensionless, so ``params`` does not change the numbers; it
    is accepted so callers can pass their configuration through unchanged.
    """
    if not (3 <= n_min <= n_max):
        raise ValueError(f"need 3 <= n_min <= n_max, got n_min={n_min}, n_max={n_max}")
    return [spectrum_row(n) for n in range(n_min, n_max + 1)]
