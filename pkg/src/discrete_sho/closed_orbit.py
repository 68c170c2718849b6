"""Closed n-cycles of the discrete oscillator and the polygons they trace.

Requiring ``A**n = I`` forces the rotation angle of the one-step map to be a
rational fraction of a full turn. With one turn per cycle this gives
``theta_n = 4*sin(pi/n)**2``, and the n phase points form a polygon inscribed in
a level set of the modified Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from discrete_sho.errors import DegenerateCycleError, OpenOrbitError
from discrete_sho.phase_dynamics import (
    OscillatorParams,
    PhasePoint,
    StepParams,
    TransferMatrix,
    matrix_power_iter,
    modified_hamiltonian,
    reduced_transfer_matrix,
    trajectory,
    transfer_matrix,
)

__all__ = [
    "START_Q",
    "START_P",
    "ClosedOrbit",
    "ClosureReport",
    "solve_theta",
    "closed_orbit",
    "shoelace_area",
    "polygon_action",
    "closure_residual",
    "verify_closure",
    "exact_closure_residual",
    "ellipse_hausdorff",
]

START_Q = "q"
"""Orbit starts at reduced ``(1, 0)``: all energy in the spring."""
START_P = "p"
"""Orbit starts at reduced ``(0, 1)``: all energy kinetic."""

CLOSURE_TOL = 1e-8


def solve_theta(n: int, m: int = 1) -> float:
    """Step parameter for which the one-step map closes after exactly ``n`` steps.

    Args:
        n: Cycle number, at least 3.
        m: Number of turns around the origin per cycle. The default single turn
            reproduces the tabulated values; ``m`` must be coprime to ``n`` and
            below ``n/2`` so that the cycle is primitive and theta stays in (0, 4).

    Raises:
        DegenerateCycleError: for ``n < 3`` (theta would sit on the window edge).
    """
    if n < 3:
        raise DegenerateCycleError(f"cycle n={n} encloses no area; need n >= 3")
    if not (1 <= m and 2 * m < n) or math.gcd(m, n) != 1:
        raise ValueError(f"winding m={m} must satisfy 1 <= m < n/2 and gcd(m, n) == 1")
    # same as 2*(1 - cos(2*pi*m/n)) without the cancellation at large n
    return 4.0 * math.sin(math.pi * m / n) ** 2


@dataclass(frozen=True)
class ClosedOrbit:
    """An n-cycle of the discrete map, fixed by the quantization of its action.

    ``vertices`` are in reduced coordinates, so ``vertices[0]`` is ``(1, 0)`` for a
    spring start and ``(0, 1)`` for a kinetic start. ``q_scale``/``p_scale``
    convert back: ``q = q_scale*q'``, ``p = p_scale*p'``.
    """

    n: int
    theta_n: float
    tau_n: float
    amplitude: float
    energy: float
    vertices: tuple[PhasePoint, ...]
    action: float
    params: OscillatorParams
    start: str = START_Q
    q_scale: float = 1.0
    p_scale: float = 1.0
    _raw: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def step_params(self) -> StepParams:
        return StepParams(tau=self.tau_n, theta=self.theta_n)

    def one_step(self) -> TransferMatrix:
        return transfer_matrix(self.step_params, self.params)

    def raw_vertices(self) -> np.ndarray:
        """Vertices in physical ``(q, p)`` units, shape ``(n, 2)``."""
        if self._raw is not None:
            return self._raw.copy()
        red = np.array([[v.q, v.p] for v in self.vertices])
        return red * np.array([self.q_scale, self.p_scale])

    def to_reduced_array(self, raw: np.ndarray) -> np.ndarray:
        return np.asarray(raw) / np.array([self.q_scale, self.p_scale])


def closed_orbit(
    n: int,
    params: OscillatorParams | None = None,
    *,
    start: str = START_Q,
    m: int = 1,
    theta_shift: float = 0.0,
) -> ClosedOrbit:
    """Build the quantized n-cycle.

    Args:
        n: Cycle number (>= 3).
        params: Oscillator constants; natural units when omitted.
        start: :data:`START_Q` or :data:`START_P`.
        m: Winding per cycle, see :func:`solve_theta`.
        theta_shift: Added to the solved theta. Non-zero values break closure
            and exist so that the verification path can be exercised on a bad orbit.
    """
    params = params or OscillatorParams()
    theta = solve_theta(n, m) + theta_shift
    sp = StepParams.from_theta(theta, params)
    amplitude = math.sqrt(2.0 * params.h / params.omega) * theta ** -0.25
    energy = 0.5 * params.k * amplitude**2

    if start == START_Q:
        q_scale, p_scale = amplitude, params.k * sp.tau * amplitude
        x0 = PhasePoint(amplitude, 0.0)
    elif start == START_P:
        momentum = math.sqrt(2.0 * energy)
        q_scale, p_scale = sp.tau * momentum, momentum
        x0 = PhasePoint(0.0, momentum)
    else:
        raise ValueError(f"start must be {START_Q!r} or {START_P!r}, got {start!r}")

    raw = trajectory(x0, transfer_matrix(sp, params), n - 1)
    reduced = raw / np.array([q_scale, p_scale])
    vertices = tuple(PhasePoint(float(q), float(p)) for q, p in reduced)
    return ClosedOrbit(
        n=n,
        theta_n=sp.theta,
        tau_n=sp.tau,
        amplitude=amplitude,
        energy=energy,
        vertices=vertices,
        action=shoelace_area(raw),
        params=params,
        start=start,
        q_scale=q_scale,
        p_scale=p_scale,
        _raw=raw,
    )


def shoelace_area(points) -> float:
    """Absolute area of the polygon through ``points`` (shape ``(n, 2)``)."""
    pts = np.asarray(points, dtype=float)
    if len(pts) < 3:
        return 0.0
    q, p = pts[:, 0], pts[:, 1]
    q_next, p_next = np.roll(q, -1), np.roll(p, -1)
    return 0.5 * abs(float(np.sum(q * p_next - q_next * p)))


def closure_residual(orbit: ClosedOrbit) -> float:
    """Reduced-coordinate distance between the last vertex stepped once and the first."""
    m = orbit.one_step()
    last = orbit.raw_vertices()[-1]
    nxt = np.array([m.a11 * last[0] + m.a12 * last[1], m.a21 * last[0] + m.a22 * last[1]])
    red = orbit.to_reduced_array(nxt)
    first = np.array([orbit.vertices[0].q, orbit.vertices[0].p])
    return float(np.max(np.abs(red - first)))


def polygon_action(orbit: ClosedOrbit, tol: float = CLOSURE_TOL) -> float:
    """Enclosed phase-space area of the orbit polygon, in physical units.

    Raises:
        OpenOrbitError: if the vertices do not close within ``tol``.
    """
    if orbit.n < 3:
        raise DegenerateCycleError(f"cycle n={orbit.n} encloses no area")
    residual = closure_residual(orbit)
    if not residual <= tol:
        raise OpenOrbitError(f"orbit n={orbit.n} does not close: residual {residual:.3e} > {tol:.1e}")
    return shoelace_area(orbit.raw_vertices())


@dataclass(frozen=True)
class ClosureReport:
    matrix_residual: float
    return_residual: float
    hamiltonian_spread: float
    tol: float

    @property
    def passed(self) -> bool:
        return all(v <= self.tol for v in (self.matrix_residual, self.return_residual, self.hamiltonian_spread))


def verify_closure(orbit: ClosedOrbit, tol: float = 1e-9) -> ClosureReport:
    """Numerical certificate that the orbit is a closed n-cycle.

    Reports the max entrywise ``|A**n - I|``, the worst reduced-coordinate
    distance between each vertex and its image after n steps, and the relative
    spread of the modified Hamiltonian over the vertices.
    """
    sp = orbit.step_params
    power = matrix_power_iter(sp, orbit.params, orbit.n)
    matrix_residual = power.max_abs_diff(TransferMatrix.identity())

    raw = orbit.raw_vertices()
    x0 = PhasePoint(float(raw[0, 0]), float(raw[0, 1]))
    path = orbit.to_reduced_array(trajectory(x0, orbit.one_step(), 2 * orbit.n - 1))
    return_residual = float(np.max(np.abs(path[orbit.n :] - path[: orbit.n])))

    energies = np.array([modified_hamiltonian(PhasePoint(q, p), sp, orbit.params) for q, p in raw])
    spread = float((energies.max() - energies.min()) / abs(energies.mean()))
    return ClosureReport(matrix_residual, return_residual, spread, tol)


def exact_closure_residual(theta, n: int):
    """Max entrywise ``|A'**n - I|`` for the reduced one-step map in the arithmetic of ``theta``.

    Pass a :class:`fractions.Fraction` to get an exact answer; for ``theta = 3``
    and ``n = 3`` it is exactly zero.
    """
    if isinstance(theta, int):
        theta = Fraction(theta)
    m = reduced_transfer_matrix(theta)
    power = m
    for _ in range(n - 1):
        power = power @ m
    return power.max_abs_diff(TransferMatrix.identity(theta - theta + 1))


def _ellipse_points(orbit: ClosedOrbit, samples: int) -> tuple[np.ndarray, float]:
    k, tau = orbit.params.k, orbit.tau_n
    # p**2 + k*q**2 + k*tau*p*q = level, as x^T S x with x = (q, p)
    form = np.array([[k, 0.5 * k * tau], [0.5 * k * tau, 1.0]])
    raw = orbit.raw_vertices()
    level = float(raw[0] @ form @ raw[0])
    evals, evecs = np.linalg.eigh(form)
    t = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    unit = np.stack([np.cos(t), np.sin(t)], axis=1)
    pts = (unit * np.sqrt(level / evals)) @ evecs.T
    return pts, math.sqrt(level / evals.min())


def _segment_distances(points: np.ndarray, poly: np.ndarray) -> np.ndarray:
    a = poly
    b = np.roll(poly, -1, axis=0)
    ab = b - a
    ap = points[:, None, :] - a[None, :, :]
    t = np.clip(np.einsum("ijk,jk->ij", ap, ab) / np.einsum("jk,jk->j", ab, ab), 0.0, 1.0)
    closest = a[None] + t[..., None] * ab[None]
    return np.linalg.norm(points[:, None, :] - closest, axis=2).min(axis=1)


def ellipse_hausdorff(orbit: ClosedOrbit, samples: int = 1 << 15, per_edge: int = 64) -> float:
    """Hausdorff distance between the orbit polygon and its modified-Hamiltonian ellipse.

    Returned relative to the ellipse semi-major axis. Both curves are sampled,
    so the value is accurate to roughly the sampling spacing squared.
    """
    ellipse, semi_major = _ellipse_points(orbit, samples)
    poly = orbit.raw_vertices()
    to_poly = _segment_distances(ellipse, poly).max()

    s = np.linspace(0.0, 1.0, per_edge, endpoint=False)[:, None, None]
    edge_pts = (poly[None] + s * (np.roll(poly, -1, axis=0) - poly)[None]).reshape(-1, 2)
    to_ellipse = cKDTree(ellipse).query(edge_pts)[0].max()
    return float(max(to_poly, to_ellipse) / semi_major)
