"""Exception types raised by the discrete oscillator machinery."""


class DiscreteOscillatorError(ValueError):
    """Base class for domain errors in this package."""


class StabilityWindowError(DiscreteOscillatorError):
    """Step parameter theta lies outside the open stability window (0, 4)."""


class DegenerateCycleError(DiscreteOscillatorError):
    """Cycle number too small to enclose a non-zero action (n < 3)."""


class OpenOrbitError(DiscreteOscillatorError):
    """Vertex list does not close back on its starting point."""
