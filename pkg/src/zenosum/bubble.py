"""Forward-scattering loop ("bubble") amplitudes and their Zeno limits.

Covers the vacuum-amplitude side (n identical unlinked loops squeezed
into a fixed interval, resummed into an exponential), the connected
variant where free propagators join consecutive loops, the pure free
chain, and the ground-state energy read off the resummed vacuum
amplitude.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core import InteractionSpec, ensure_finite
from .expsum import chain_integral, evaluate

__all__ = [
    "VacuumAmplitudeResult",
    "vacuum_bubble_order_n",
    "vacuum_zeno_amplitude",
    "connected_bubble_ln",
    "connected_bubble_ln_power_variant",
    "free_chain",
    "linked_cluster_energy",
]

# Switch factorials to log space beyond this order to dodge overflow.
_LOG_SPACE_THRESHOLD = 20

# Stop tabulating outer-series partial sums once the next term is this
# small relative to the running sum.
_SERIES_RELATIVE_CUTOFF = 1e-16

_UNIT_IMAG_POWERS = (1 + 0j, -1j, -1 + 0j, 1j)  # (-i)^n by n mod 4


@dataclass(frozen=True)
class VacuumAmplitudeResult:
    """Outcome of resumming all orders of the n-times-repeated loop.

    ``order_terms`` are the partial sums of the outer exponential
    series, ``resummed`` its closed form exp((V dt)^n / n!), and
    ``probability`` = |resummed|^2.
    """

    order_terms: tuple[complex, ...]
    resummed: complex
    probability: float


def _power_over_factorial(base: float, n: int) -> float:
    """(base^n) / n! for base >= 0, stable for large n via log space."""
    if n == 0:
        return 1.0
    if base == 0.0:
        return 0.0
    if n <= _LOG_SPACE_THRESHOLD:
        return base**n / math.factorial(n)
    log_value = n * math.log(base) - math.lgamma(n + 1)
    return math.exp(log_value)


def vacuum_bubble_order_n(spec: InteractionSpec, order: int | None = None) -> complex:
    """Amplitude of one n-times-repeated loop: (V dt)^n / n!.

    ``order`` overrides ``spec.reps`` and may be 0, in which case the
    no-interaction term has amplitude exactly 1.
    """
    n = spec.reps if order is None else order
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    return complex(_power_over_factorial(spec.potential * spec.delta_t, n))


def vacuum_zeno_amplitude(spec: InteractionSpec, orders: int = 30) -> VacuumAmplitudeResult:
    """Sum all orders of the repeated loop in the vacuum amplitude.

    With x = (V dt)^n / n!, the orders form the series 1 + x + x^2/2! + ...
    whose closed form is exp(x). As n grows at fixed V dt, x -> 0 and the
    amplitude pins to 1: the state is frozen by the dense repetition.
    """
    if orders < 1:
        raise ValueError(f"orders must be >= 1, got {orders}")
    x = _power_over_factorial(spec.potential * spec.delta_t, spec.reps)
    term = 1.0
    total = 1.0
    partials = [complex(total)]
    for k in range(1, orders):
        term *= x / k
        total += term
        partials.append(complex(total))
        if abs(term) <= _SERIES_RELATIVE_CUTOFF * abs(total):
            break
    resummed = ensure_finite(complex(math.exp(x)), "vacuum amplitude")
    return VacuumAmplitudeResult(tuple(partials), resummed, abs(resummed) ** 2)


def connected_bubble_ln(spec: InteractionSpec) -> complex:
    """n-times-repeated loop joined by free propagators, exactly.

    The chained propagator phases telescope to a single oscillation of
    the innermost time, so the amplitude is V^n times the nested chain
    integral with frequencies (epsilon, 0, ..., 0), innermost first.
    Shrinks to zero as n grows at fixed V, epsilon, dt.
    """
    n = spec.reps
    freqs = [spec.energy] + [0.0] * (n - 1)
    value = spec.potential**n * evaluate(chain_integral(freqs, n), spec.delta_t)
    return ensure_finite(value, "connected bubble amplitude")


def connected_bubble_ln_power_variant(spec: InteractionSpec) -> complex:
    """Difference-minus-tail closed form with the alternative power count.

    A commonly quoted closed form for the same chained loop carries one
    power of (-i epsilon) more than the exact integral; it is kept here
    solely so the verification suite can report the gap between the two
    bookkeepings. Requires epsilon != 0.
    """
    if spec.energy == 0:
        raise ValueError("power-variant form is singular at epsilon = 0")
    n = spec.reps
    mu = -1j * spec.energy
    dt = spec.delta_t
    tail = sum(dt**m / (math.factorial(m) * mu ** (n - 1 - m)) for m in range(n))
    value = spec.potential**n * (cmath.exp(-1j * spec.energy * dt) / mu ** (n - 1) - tail)
    return ensure_finite(value, "power-variant bubble amplitude")


def free_chain(spec: InteractionSpec) -> complex:
    """n repetitions of the bare propagator, each over dt/n.

    ((-i) e^{-i eps dt / n})^n = (-i)^n e^{-i eps dt}; unit modulus for
    every n, energy and interval, which is the Zeno-limit probability 1.
    """
    phase = cmath.exp(-1j * spec.energy * spec.delta_t)
    return _UNIT_IMAG_POWERS[spec.reps % 4] * phase


def linked_cluster_energy(spec: InteractionSpec, w0: float) -> complex:
    """Ground-state energy from the log-derivative of the vacuum amplitude.

    E = w0 + i d/dt ln R(t) with R = exp((V (t - t0))^n / n!), evaluated
    analytically: E = w0 + i V (V dt)^{n-1} / (n-1)!. The correction
    vanishes in the dense-repetition limit, returning exactly w0.
    """
    if spec.delta_t <= 0:
        raise ValueError("delta_t must be > 0 for the time derivative")
    slope = spec.potential * _power_over_factorial(
        spec.potential * spec.delta_t, spec.reps - 1
    )
    return complex(w0, slope)
