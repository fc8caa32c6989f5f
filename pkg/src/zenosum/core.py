"""Shared value types and the two primitive propagator amplitudes.

Natural units throughout (hbar = 1): energies and times are plain
dimensionless floats, probability amplitudes are plain Python ``complex``
values. The one house rule is that no NaN or Inf ever escapes an
operation; anything that would overflow raises ``OverflowError`` instead.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "POLE_TOLERANCE",
    "ensure_finite",
    "InteractionSpec",
    "SpectralKind",
    "SpectralClassification",
    "free_propagator",
    "point_correlator",
]

# Absolute tolerance on |omega - epsilon| for pole/boundary classification;
# well below any omega sweep step used in practice.
POLE_TOLERANCE = 1e-9


def ensure_finite(value: complex, context: str = "amplitude") -> complex:
    """Return ``value`` unchanged, or raise ``OverflowError`` if non-finite."""
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise OverflowError(f"{context} is not finite: {value!r}")
    return value


def _require_finite_float(value: float, name: str) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class InteractionSpec:
    """Parameters of one repeated-interaction setup.

    potential     matrix element V of the interaction, a probability
                  amplitude constrained to [0, 1]
    energy        level energy epsilon carried by the propagating state
    delta_t       total time interval t - t0 over which the n repetitions
                  are squeezed (>= 0)
    reps          repetition count n (>= 1)
    energy_chain  optional ordered level list for exchange-type chains
    delta         positive regularization infinitesimal used by the
                  frequency-domain transforms
    """

    potential: float
    energy: float
    delta_t: float
    reps: int
    energy_chain: tuple[float, ...] = ()
    delta: float = 1e-6

    def __post_init__(self) -> None:
        _require_finite_float(self.potential, "potential")
        _require_finite_float(self.energy, "energy")
        _require_finite_float(self.delta_t, "delta_t")
        _require_finite_float(self.delta, "delta")
        if not 0.0 <= self.potential <= 1.0:
            raise ValueError(
                f"potential must lie in [0, 1], got {self.potential!r}"
            )
        if self.delta_t < 0:
            raise ValueError(f"delta_t must be >= 0, got {self.delta_t!r}")
        if not isinstance(self.reps, int) or self.reps < 1:
            raise ValueError(f"reps must be a positive integer, got {self.reps!r}")
        if self.delta <= 0:
            raise ValueError(f"delta must be > 0, got {self.delta!r}")
        for level in self.energy_chain:
            _require_finite_float(level, "energy_chain level")


class SpectralKind(str, Enum):
    """Where a frequency sits relative to the repeated-propagator cut."""

    POLE = "pole"
    INSIDE_CUT = "inside_cut"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class SpectralClassification:
    """One classified frequency:  omega, its region, and the growth rate.

    ``growth_exponent`` is log|G0(omega)| per repetition: positive inside
    the cut (the repeated transform blows up with n), negative outside
    (it dies), infinite exactly on the pole.
    """

    omega: float
    kind: SpectralKind
    growth_exponent: float


def free_propagator(epsilon: float, dt: float) -> complex:
    """Bare propagator for undisturbed evolution over ``dt``.

    Equals ``-i exp(-i epsilon dt)`` for dt > 0 and 0 for dt <= 0; the
    step function is pinned to 0 at dt = 0 (some texts use 1/2 there).
    Unit modulus for every dt > 0.
    """
    if dt <= 0:
        return 0j
    return ensure_finite(-1j * cmath.exp(-1j * epsilon * dt), "free_propagator")


def point_correlator() -> complex:
    """Equal-time hole creation/annihilation amplitude.

    Normalized so that ``-1j * point_correlator() == 1``, equivalently
    ``1j * point_correlator() == -1``, which is the convention every
    amplitude in this package absorbs.
    """
    return 1j
