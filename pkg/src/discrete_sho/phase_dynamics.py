"""Linear-map machinery for the symplectic-Euler harmonic oscillator.

One step of symplectic Euler applied to ``H = p**2/2 + k*q**2/2`` (unit mass) is
the linear map

    q' = q + tau*p
    p' = p - k*tau*q'

whose matrix depends on the step only through ``theta = k*tau**2``. Everything
here is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

import numpy as np

from discrete_sho.errors import StabilityWindowError

__all__ = [
    "OscillatorParams",
    "PhasePoint",
    "StepParams",
    "TransferMatrix",
    "check_window",
    "transfer_matrix",
    "reduced_transfer_matrix",
    "step",
    "trajectory",
    "matrix_power_iter",
    "matrix_power_closed",
    "rotation_angle",
    "shadow_factor",
    "hamiltonian",
    "modified_hamiltonian",
    "to_reduced",
    "from_reduced",
]

_CONSISTENCY_RTOL = 1e-12


def check_window(theta) -> None:
    """Raise :class:`StabilityWindowError` unless ``0 < theta < 4``."""
    if not (0 < theta < 4):
        raise StabilityWindowError(f"theta={theta!r} outside the stability window (0, 4)")


@dataclass(frozen=True)
class OscillatorParams:
    """Physical constants of a unit-mass oscillator.

    Attributes:
        k: Spring constant.
        omega: Angular frequency, ``omega**2 == k``.
        h: Action quantum.
    """

    k: float = 1.0
    omega: float = 1.0
    h: float = 1.0

    def __post_init__(self):
        for name in ("k", "omega", "h"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if not math.isclose(self.omega**2, self.k, rel_tol=_CONSISTENCY_RTOL):
            raise ValueError(
                f"inconsistent parameters: omega**2={self.omega**2!r} != k={self.k!r}"
            )

    @classmethod
    def from_k(cls, k: float, h: float = 1.0) -> OscillatorParams:
        return cls(k=k, omega=math.sqrt(k), h=h)

    @classmethod
    def from_omega(cls, omega: float, h: float = 1.0) -> OscillatorParams:
        return cls(k=omega * omega, omega=omega, h=h)

    @property
    def hbar(self) -> float:
        return self.h / (2 * math.pi)


@dataclass(frozen=True)
class PhasePoint:
    """A single ``(q, p)`` state."""

    q: float
    p: float

    def as_array(self) -> np.ndarray:
        return np.array([self.q, self.p], dtype=float)


@dataclass(frozen=True)
class StepParams:
    """Time step ``tau`` together with its dimensionless form ``theta = k*tau**2``."""

    tau: float
    theta: float

    def __post_init__(self):
        if not self.tau > 0:
            raise StabilityWindowError(f"tau must be positive, got {self.tau!r}")
        check_window(self.theta)

    @classmethod
    def from_theta(cls, theta: float, params: OscillatorParams) -> StepParams:
        check_window(theta)
        return cls(tau=math.sqrt(theta) / params.omega, theta=theta)

    @classmethod
    def from_tau(cls, tau: float, params: OscillatorParams) -> StepParams:
        return cls(tau=tau, theta=params.k * tau * tau)


@dataclass(frozen=True)
class TransferMatrix:
    """Real 2x2 matrix ``[[a11, a12], [a21, a22]]`` acting on phase points.

    Entries may be any numeric type supporting ``+`` and ``*`` (floats, or
    :class:`fractions.Fraction` for exact checks).
    """

    a11: Real
    a12: Real
    a21: Real
    a22: Real

    @classmethod
    def identity(cls, one=1.0) -> TransferMatrix:
        zero = one - one
        return cls(one, zero, zero, one)

    def __matmul__(self, other):
        if isinstance(other, TransferMatrix):
            return TransferMatrix(
                self.a11 * other.a11 + self.a12 * other.a21,
                self.a11 * other.a12 + self.a12 * other.a22,
                self.a21 * other.a11 + self.a22 * other.a21,
                self.a21 * other.a12 + self.a22 * other.a22,
            )
        if isinstance(other, PhasePoint):
            return PhasePoint(
                self.a11 * other.q + self.a12 * other.p,
                self.a21 * other.q + self.a22 * other.p,
            )
        return NotImplemented

    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def trace(self):
        return self.a11 + self.a22

    def entries(self) -> tuple:
        return (self.a11, self.a12, self.a21, self.a22)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]], dtype=float)

    def max_abs_diff(self, other: TransferMatrix):
        """Largest entrywise ``|self - other|``."""
        return max(abs(a - b) for a, b in zip(self.entries(), other.entries()))


def transfer_matrix(sp: StepParams, params: OscillatorParams) -> TransferMatrix:
    """One-step matrix ``[[1, tau], [-k*tau, 1 - k*tau**2]]``.

    Raises:
        StabilityWindowError: if ``sp.theta`` is not in (0, 4).
        ValueError: if ``sp.theta`` disagrees with ``params.k * sp.tau**2``.
    """
    check_window(sp.theta)
    if not math.isclose(params.k * sp.tau**2, sp.theta, rel_tol=_CONSISTENCY_RTOL):
        raise ValueError(f"step {sp!r} inconsistent with k={params.k!r}")
    ktau = params.k * sp.tau
    return TransferMatrix(1.0, sp.tau, -ktau, 1.0 - sp.theta)


def reduced_transfer_matrix(theta) -> TransferMatrix:
    """One-step matrix in the dimensionless coordinates ``(q/a, p/(k*tau*a))``.

    Conjugating the physical map by the scaling gives ``[[1, theta], [-1, 1 - theta]]``,
    which depends on theta alone. With a rational theta the entries stay rational.
    """
    check_window(theta)
    one = theta - theta + 1
    return TransferMatrix(one, theta, -one, one - theta)


def step(x: PhasePoint, m: TransferMatrix) -> PhasePoint:
    return m @ x


def trajectory(x0: PhasePoint, m: TransferMatrix, steps: int) -> np.ndarray:
    """Iterate ``m`` from ``x0``; returns an array of shape ``(steps + 1, 2)``.

    Row ``j`` is the state after ``j`` applications of the map.
    """
    a11, a12, a21, a22 = (float(v) for v in m.entries())
    q, p = float(x0.q), float(x0.p)
    out = np.empty((steps + 1, 2))
    out[0] = q, p
    for j in range(1, steps + 1):
        q, p = a11 * q + a12 * p, a21 * q + a22 * p
        out[j, 0] = q
        out[j, 1] = p
    if not np.isfinite(out).all():
        raise FloatingPointError("trajectory left the finite range")
    return out


def _binary_power(m: TransferMatrix, n: int) -> TransferMatrix:
    result = None
    base = m
    while n:
        if n & 1:
            result = base if result is None else result @ base
        n >>= 1
        if n:
            base = base @ base
    return result


def matrix_power_iter(sp: StepParams, params: OscillatorParams, n: int) -> TransferMatrix:
    """``A**n`` by repeated squaring of the one-step matrix."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return _binary_power(transfer_matrix(sp, params), n)


def rotation_angle(theta: float) -> float:
    """Angle ``phi`` in (0, pi) with ``cos(phi) = 1 - theta/2``.

    The one-step matrix has eigenvalues ``exp(+-1j*phi)``. Computed as
    ``2*asin(sqrt(theta)/2)`` to keep full precision as theta -> 0.
    """
    check_window(theta)
    return 2.0 * math.asin(math.sqrt(theta) / 2.0)


def matrix_power_closed(sp: StepParams, params: OscillatorParams, n: int) -> TransferMatrix:
    """``A**n`` in closed form.

    Cayley-Hamilton gives ``A**n = cos(n*phi)*I + sin(n*phi)/sin(phi) * (A - cos(phi)*I)``
    with ``phi = rotation_angle(theta)``; this is the real form of the
    eigen-decomposition, so no complex intermediates appear.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    a = transfer_matrix(sp, params)
    phi = rotation_angle(sp.theta)
    c = math.cos(n * phi)
    s = math.sin(n * phi) / math.sin(phi)
    half = 0.5 * sp.theta
    return TransferMatrix(c + s * half, s * a.a12, s * a.a21, c - s * half)


def shadow_factor(theta: float) -> float:
    """Prefactor ``phi / (2*sin(phi))`` of the modified Hamiltonian; tends to 1/2 as theta -> 0."""
    phi = rotation_angle(theta)
    return phi / (2.0 * math.sin(phi))


def hamiltonian(x: PhasePoint, params: OscillatorParams) -> float:
    return 0.5 * x.p * x.p + 0.5 * params.k * x.q * x.q


def modified_hamiltonian(x: PhasePoint, sp: StepParams, params: OscillatorParams) -> float:
    """Shadow Hamiltonian ``f(theta) * (p**2 + k*q**2 + k*tau*p*q)``.

    Exactly invariant under :func:`step` with the matching transfer matrix.
    """
    f = shadow_factor(sp.theta)
    k = params.k
    return f * (x.p * x.p + k * x.q * x.q + k * sp.tau * x.p * x.q)


def to_reduced(x: PhasePoint, amplitude: float, sp: StepParams, params: OscillatorParams) -> PhasePoint:
    """Map to ``(q/amplitude, p/(k*tau*amplitude))``."""
    return PhasePoint(x.q / amplitude, x.p / (params.k * sp.tau * amplitude))


def from_reduced(x: PhasePoint, amplitude: float, sp: StepParams, params: OscillatorParams) -> PhasePoint:
    return PhasePoint(x.q * amplitude, x.p * params.k * sp.tau * amplitude)
