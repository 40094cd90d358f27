"""Density-operator numerics for the exotic Landau problem.

Modules
-------
model        parameters, effective mass, chiral frequencies, spectrum
fock         truncated Fock kernels and coherent-state amplitudes
quadrature   d^2z/pi phase-space quadrature
phase_dist   thermal Husimi / P distributions, Wehrl entropy
magnetics    Landau diamagnetism and finite-difference checks
kms          Hilbert-Schmidt space, Wigner transform, KMS coherent states
cli          command-line driver
"""

from .errors import (
    CriticalRegime, CutoffTooSmall, DegenerateTemperature, DeltaLimit, DimMismatch,
    DomainGuard, EmptySpectrum, InvalidDensity, InvalidParameter, LandauError,
    NumericalError, OverflowGuard, QuadratureDivergence, ThresholdBreach, ValidationError,
)
from .model import DerivedModel, ModelParams, derive, energy, enumerate_levels

__version__ = "0.1.0"
