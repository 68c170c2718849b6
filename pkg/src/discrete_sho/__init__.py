"""Quantized closed orbits of the symplectic-Euler harmonic oscillator."""

from discrete_sho.closed_orbit import (
    ClosedOrbit,
    closed_orbit,
    polygon_action,
    solve_theta,
    verify_closure,
)
from discrete_sho.errors import (
    DegenerateCycleError,
    DiscreteOscillatorError,
    OpenOrbitError,
    StabilityWindowError,
)
from discrete_sho.phase_dynamics import (
    OscillatorParams,
    PhasePoint,
    StepParams,
    TransferMatrix,
    hamiltonian,
    matrix_power_closed,
    matrix_power_iter,
    modified_hamiltonian,
    rotation_angle,
    step,
    transfer_matrix,
)
from discrete_sho.quantization import (
    SpectrumRow,
    action_check,
    cycle_time_ratio,
    energy_level,
    level_spacing,
    spectrum_table,
)

__version__ = "0.1.0"
