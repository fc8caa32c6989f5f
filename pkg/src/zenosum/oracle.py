"""Brute-force quadrature oracle for the closed-form amplitudes.

Everything in this module is deliberately independent of the exact
exponential-sum algebra in :mod:`zenosum.expsum`: integrals are done the
slow way, by adaptive one-dimensional Gauss-Kronrod panels, nested one
level per time variable. The reported ``error_bound`` is an honest
estimate (sum of per-panel Kronrod-minus-Gauss gaps, propagated through
the nesting), so callers can assert ``|closed_form - value| <= error_bound``.

Conventions:

* ``nested_simplex_quadrature`` integrates over the ordered region
  ``dt >= t_1 >= t_2 >= ... >= t_n >= 0`` with ``t_1`` the outermost
  (latest) time. The integrand is called as ``integrand(t_1, ..., t_n)``.
* ``damped_halfline_quadrature`` computes ``int_0^inf e^{i f tau}
  e^{-delta tau} d tau``, truncated where the envelope ``e^{-delta tau}``
  falls below 1e-9; the truncation tail is folded into the error bound.
* Real and imaginary parts are converged independently.
"""

from __future__ import annotations

import cmath
import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

__all__ = [
    "QuadratureResult",
    "NotConverged",
    "EVALUATION_BUDGET",
    "ENVELOPE_CUTOFF",
    "nested_simplex_quadrature",
    "damped_halfline_quadrature",
    "time_ordered_hypercube_quadrature",
]

# Hard ceiling on integrand evaluations for a single top-level call.
EVALUATION_BUDGET = 100_000_000

# Half-line integrals are truncated where e^{-delta tau} drops below this.
ENVELOPE_CUTOFF = 1e-9

MAX_SIMPLEX_DEPTH = 4


class NotConverged(RuntimeError):
    """Requested tolerance could not be met within the evaluation budget."""


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_bound: float
    evaluations: int


# 10-point Gauss / 21-point Kronrod pair (standard QUADPACK abscissae).
# Odd-indexed Kronrod nodes are the embedded Gauss-Legendre nodes.
_XGK = (
    0.9956571630258081,
    0.9739065285171717,
    0.9301574913557082,
    0.8650633666889845,
    0.7808177265864169,
    0.6794095682990244,
    0.5627571346686047,
    0.4333953941292472,
    0.2943928627014602,
    0.1488743389816312,
    0.0,
)
_WGK = (
    0.0116946388673719,
    0.0325581623079647,
    0.0547558965743520,
    0.0750396748109199,
    0.0931254545836976,
    0.1093871588022976,
    0.1234919762620659,
    0.1347092173114733,
    0.1427759385770601,
    0.1477391049013385,
    0.1494455540029169,
)
_WG = (
    0.0666713443086881,
    0.1494513491505806,
    0.2190863625159820,
    0.2692667193099963,
    0.2955242247147529,
)


class _Budget:
    """Shared evaluation counter; trips ``NotConverged`` when exhausted."""

    __slots__ = ("count", "limit")

    def __init__(self, limit: int = EVALUATION_BUDGET) -> None:
        self.count = 0
        self.limit = limit

    def spend(self, n: int) -> None:
        self.count += n
        if self.count > self.limit:
            raise NotConverged(
                f"evaluation budget of {self.limit} exhausted "
                f"({self.count} evaluations)"
            )


def _gk_panel(
    f: Callable[[float], complex], a: float, b: float, budget: _Budget
) -> tuple[complex, float, float]:
    """One Gauss-Kronrod pass on [a, b]: (kronrod value, err_re, err_im)."""
    budget.spend(21)
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = complex(f(center))
    kron = _WGK[10] * fc
    gauss = 0j
    for i in range(10):
        x = half * _XGK[i]
        fsum = complex(f(center - x)) + complex(f(center + x))
        kron += _WGK[i] * fsum
        if i % 2 == 1:
            gauss += _WG[i // 2] * fsum
    kron *= half
    gauss *= half
    return kron, abs(kron.real - gauss.real), abs(kron.imag - gauss.imag)


def _adaptive_line(
    f: Callable[[float], complex],
    a: float,
    b: float,
    tol: float,
    budget: _Budget,
    seeds: Sequence[float] = (),
) -> tuple[complex, float, float]:
    """Globally adaptive GK21 on [a, b] to absolute tolerance ``tol``.

    ``seeds`` are interior breakpoints used for the initial subdivision
    (oscillation pacing, known kinks). Returns (value, err_re, err_im)
    where each error component is the summed panel estimate.
    """
    if b <= a:
        return 0j, 0.0, 0.0
    points = sorted({a, b, *(s for s in seeds if a < s < b)})
    heap: list[list] = []
    serial = 0
    total = 0j
    err_re = 0.0
    err_im = 0.0
    for lo, hi in zip(points, points[1:]):
        val, ere, eim = _gk_panel(f, lo, hi, budget)
        total += val
        err_re += ere
        err_im += eim
        serial += 1
        heapq.heappush(heap, [-max(ere, eim), serial, lo, hi, val, ere, eim])
    min_width = 1e-14 * (b - a)
    while err_re > tol or err_im > tol:
        _, _, lo, hi, val, ere, eim = heapq.heappop(heap)
        if hi - lo < min_width:
            raise NotConverged(
                f"panel below resolution limit at [{lo}, {hi}] "
                f"with residual ({err_re:.3e}, {err_im:.3e}) > {tol:.3e}"
            )
        mid = 0.5 * (lo + hi)
        total -= val
        err_re -= ere
        err_im -= eim
        for x0, x1 in ((lo, mid), (mid, hi)):
            val2, ere2, eim2 = _gk_panel(f, x0, x1, budget)
            total += val2
            err_re += ere2
            err_im += eim2
            serial += 1
            heapq.heappush(
                heap, [-max(ere2, eim2), serial, x0, x1, val2, ere2, eim2]
            )
    # Recompute the value with compensated summation; the incremental
    # running total above accumulates rounding over many splits.
    value = complex(
        math.fsum(entry[4].real for entry in heap),
        math.fsum(entry[4].imag for entry in heap),
    )
    return value, err_re, err_im


def nested_simplex_quadrature(
    integrand: Callable[..., complex],
    n: int,
    dt: float,
    tol: float,
) -> QuadratureResult:
    """Integrate over the ordered simplex 0 <= t_n <= ... <= t_1 <= dt.

    The n-fold integral is done as nested adaptive one-dimensional
    quadratures; inner integration errors are propagated outward scaled
    by the outer interval length, so ``error_bound`` covers the whole
    nest.
    """
    if not 1 <= n <= MAX_SIMPLEX_DEPTH:
        raise ValueError(f"nesting depth must be 1..{MAX_SIMPLEX_DEPTH}, got {n}")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if dt < 0:
        raise ValueError("dt must be non-negative")
    if dt == 0:
        return QuadratureResult(0j, 0.0, 0)

    budget = _Budget()
    scale = max(1.0, dt)
    # Per-level absolute tolerance shares; the sum of propagated shares
    # stays below tol (see module docstring on error propagation).
    level_tol = [tol / (2.0 * n * scale**j) for j in range(n)]

    def integrate(level: int, prefix: tuple[float, ...], upper: float):
        if upper <= 0.0:
            return 0j, 0.0
        inner_worst = 0.0

        if level == n:
            g = lambda t: integrand(*prefix, t)  # noqa: E731
        else:

            def g(t: float) -> complex:
                nonlocal inner_worst
                val, err = integrate(level + 1, prefix + (t,), t)
                if err > inner_worst:
                    inner_worst = err
                return val

        line_tol = level_tol[level - 1] * (upper / dt)
        val, ere, eim = _adaptive_line(g, 0.0, upper, line_tol, budget)
        return val, math.hypot(ere, eim) + upper * inner_worst

    value, bound = integrate(1, (), dt)
    return QuadratureResult(value, bound, budget.count)


def damped_halfline_quadrature(
    freq: float, delta: float, tol: float
) -> QuadratureResult:
    """Compute ``int_0^inf e^{i freq tau} e^{-delta tau} d tau``.

    Truncated at the point where the damping envelope reaches
    ``ENVELOPE_CUTOFF``; the analytic bound on the discarded tail is
    added to ``error_bound``. Raises ``NotConverged`` if the tail alone
    already exceeds the requested tolerance.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    horizon = math.log(1.0 / ENVELOPE_CUTOFF) / delta
    tail = ENVELOPE_CUTOFF / math.hypot(delta, freq)
    if tail >= tol:
        raise NotConverged(
            f"truncation tail {tail:.3e} at the fixed envelope cutoff "
            f"exceeds the requested tolerance {tol:.3e}"
        )
    budget = _Budget()
    rate = complex(-delta, freq)

    def f(tau: float) -> complex:
        return cmath.exp(rate * tau)

    # Seed panels paced by the faster of oscillation and decay so the
    # first pass already resolves every cycle.
    pace = max(abs(freq), delta)
    n_seed = min(4096, max(8, int(horizon * pace / 1.5)))
    step = horizon / n_seed
    seeds = [step * k for k in range(1, n_seed)]
    value, ere, eim = _adaptive_line(f, 0.0, horizon, tol - tail, budget, seeds)
    return QuadratureResult(value, math.hypot(ere, eim) + tail, budget.count)


def time_ordered_hypercube_quadrature(
    freqs: Sequence[float], n: int, dt: float, tol: float
) -> QuadratureResult:
    """Integrate the time-ordered exponential product over [0, dt]^n.

    The integrand sorts its arguments descending and attaches
    ``freqs[j]`` to the j-th largest time, which is the scalar
    time-ordered product of the exponential factors. Sorting makes the
    integrand only piecewise smooth, so each nested level seeds panel
    breakpoints at the already-fixed outer times.
    """
    if n not in (2, 3):
        raise ValueError(f"hypercube check supports n in {{2, 3}}, got {n}")
    if len(freqs) != n:
        raise ValueError("need one frequency per dimension")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if dt <= 0:
        raise ValueError("dt must be positive")

    budget = _Budget()
    scale = max(1.0, dt)
    level_tol = [tol / (2.0 * n * scale**j) for j in range(n)]

    def integrand(*ts: float) -> complex:
        ordered = sorted(ts, reverse=True)
        phase = -1j * math.fsum(f * t for f, t in zip(freqs, ordered))
        return cmath.exp(phase)

    def integrate(level: int, prefix: tuple[float, ...]):
        inner_worst = 0.0

        if level == n:
            g = lambda t: integrand(*prefix, t)  # noqa: E731
        else:

            def g(t: float) -> complex:
                nonlocal inner_worst
                val, err = integrate(level + 1, prefix + (t,))
                if err > inner_worst:
                    inner_worst = err
                return val

        val, ere, eim = _adaptive_line(
            g, 0.0, dt, level_tol[level - 1], budget, seeds=prefix
        )
        return val, math.hypot(ere, eim) + dt * inner_worst

    value, bound = integrate(1, ())
    return QuadratureResult(value, bound, budget.count)
