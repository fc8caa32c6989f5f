"""Exact algebra of finite sums ``c * tau^d * exp(-i alpha tau)``.

This term class is closed under the one operation the nested
time-ordered chain integrals need:

    g(tau) = int_0^tau exp(-i w s) f(s) ds

Integrating a term ``c s^d e^{-i a s}`` against the weight ``e^{-i w s}``
either raises the polynomial degree (when ``a + w`` cancels, the
confluent case) or produces the usual integration-by-parts ladder with
``1/(a + w)`` denominators. Repeating the step once per nesting level
evaluates the whole chain in closed form, with the confluent branch
taking over exactly where the naive energy-difference-denominator
formula is numerically unusable.

Canonical form: terms are sorted by (degree, frequency), no two terms
share a (degree, frequency) slot, zero coefficients are pruned.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import ensure_finite

__all__ = [
    "CONFLUENCE_TOLERANCE",
    "COEFFICIENT_LIMIT",
    "ExpPolyTerm",
    "ExpPolySum",
    "integrate_step",
    "chain_integral",
    "evaluate",
]

# Combined frequencies within this of zero are treated as exactly
# confluent (degree-raising branch) instead of being divided by.
CONFLUENCE_TOLERANCE = 1e-12

# Frequencies closer than this are merged during canonicalization.
FREQUENCY_MERGE_TOLERANCE = 1e-12

# Hard error above this coefficient magnitude, instead of a silent Inf.
COEFFICIENT_LIMIT = 1e300


@dataclass(frozen=True)
class ExpPolyTerm:
    """One term ``coeff * tau^degree * exp(-i freq tau)``."""

    coeff: complex
    degree: int
    freq: float

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise ValueError(f"degree must be >= 0, got {self.degree}")


@dataclass(frozen=True)
class ExpPolySum:
    """Canonical finite sum of :class:`ExpPolyTerm`."""

    terms: tuple[ExpPolyTerm, ...]

    def evaluate(self, dt: float) -> complex:
        return evaluate(self, dt)

    @staticmethod
    def constant(value: complex) -> "ExpPolySum":
        return _canonical([ExpPolyTerm(complex(value), 0, 0.0)])

    @staticmethod
    def unit() -> "ExpPolySum":
        return ExpPolySum.constant(1.0)


def _check_coefficient(coeff: complex) -> complex:
    if not (math.isfinite(coeff.real) and math.isfinite(coeff.imag)):
        raise OverflowError(f"term coefficient is not finite: {coeff!r}")
    if abs(coeff.real) > COEFFICIENT_LIMIT or abs(coeff.imag) > COEFFICIENT_LIMIT:
        raise OverflowError(
            f"term coefficient magnitude beyond {COEFFICIENT_LIMIT:g}: {coeff!r}"
        )
    return coeff


def _canonical(terms: Iterable[ExpPolyTerm]) -> ExpPolySum:
    ordered = sorted(
        (t for t in terms if t.coeff != 0),
        key=lambda t: (t.degree, t.freq),
    )
    merged: list[ExpPolyTerm] = []
    for term in ordered:
        if (
            merged
            and merged[-1].degree == term.degree
            and abs(merged[-1].freq - term.freq) <= FREQUENCY_MERGE_TOLERANCE
        ):
            coeff = merged[-1].coeff + term.coeff
            if coeff == 0:
                merged.pop()
            else:
                merged[-1] = ExpPolyTerm(coeff, term.degree, merged[-1].freq)
        else:
            merged.append(term)
    for term in merged:
        _check_coefficient(term.coeff)
    return ExpPolySum(tuple(merged))


def integrate_step(f: ExpPolySum, weight_freq: float) -> ExpPolySum:
    """Return ``g(tau) = int_0^tau exp(-i weight_freq s) f(s) ds``.

    Term by term with ``gamma = term.freq + weight_freq``:

    * ``|gamma| <= CONFLUENCE_TOLERANCE``: the oscillation cancels and the
      integral is the pure monomial ``c tau^{d+1} / (d+1)``.
    * otherwise integration by parts gives oscillating terms of degrees
      d..0 at frequency gamma plus one constant that makes the definite
      integral vanish at tau = 0. That constant is stored as the exact
      negation of the degree-0 oscillating coefficient, so a single
      step evaluates to exactly zero at tau = 0.
    """
    out: list[ExpPolyTerm] = []
    for term in f.terms:
        gamma = term.freq + weight_freq
        if abs(gamma) <= CONFLUENCE_TOLERANCE:
            out.append(
                ExpPolyTerm(term.coeff / (term.degree + 1), term.degree + 1, 0.0)
            )
            continue
        mu = -1j * gamma
        coeff = term.coeff / mu
        out.append(ExpPolyTerm(_check_coefficient(coeff), term.degree, gamma))
        for j in range(term.degree - 1, -1, -1):
            coeff = -coeff * (j + 1) / mu
            out.append(ExpPolyTerm(_check_coefficient(coeff), j, gamma))
        out.append(ExpPolyTerm(-coeff, 0, 0.0))
    return _canonical(out)


def chain_integral(freqs: Sequence[float], n: int) -> ExpPolySum:
    """Exact n-fold nested time-ordered integral of an exponential chain.

    ``freqs`` lists the per-level oscillation frequencies innermost
    first: the result is

        int_0^dt ds_1 e^{-i freqs[n-1] s_1} int_0^{s_1} ds_2 ...
            int_0^{s_{n-1}} ds_n e^{-i freqs[0] s_n}

    as an :class:`ExpPolySum` in dt. With every frequency zero this is
    the ordered-simplex volume ``dt^n / n!``; with distinct cumulative
    frequencies it is the n-group difference-of-exponentials form; any
    confluent subset switches to the polynomial branch exactly.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if len(freqs) != n:
        raise ValueError(f"expected {n} frequencies, got {len(freqs)}")
    for f in freqs:
        if not math.isfinite(f):
            raise ValueError(f"frequencies must be finite, got {f!r}")
    result = ExpPolySum.unit()
    for f in freqs:
        result = integrate_step(result, f)
    return result


def evaluate(f: ExpPolySum, dt: float) -> complex:
    """Numerical value of ``f`` at ``tau = dt`` (compensated summation)."""
    if not math.isfinite(dt) or dt < 0:
        raise ValueError(f"dt must be finite and >= 0, got {dt!r}")
    parts = [
        term.coeff * dt**term.degree * cmath.exp(-1j * term.freq * dt)
        for term in f.terms
    ]
    value = complex(
        math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts)
    )
    return ensure_finite(value, "ExpPolySum evaluation")
