"""Double-exponential quadrature on the half line (0, inf).

The exp-sinh map x = exp((pi/2) sinh t) turns the trapezoidal rule into a
quadrature whose error decays like exp(-c/h) for integrands analytic on
(0, inf) with at worst integrable endpoint behaviour.  Levels halve the
mesh and reuse previous nodes, so the sequence of level sums provides the
error estimate for free.

Divergent integrands announce themselves here: the transformed node
contributions toward an endpoint then grow (or blow past the double range)
instead of dying off double-exponentially.  The node march reports that as
``DivergenceError`` -- a finding, consumed by the finiteness audits -- and
reserves ``NonConvergenceError`` for tails that decay but outlast the
budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from ..errors import DivergenceError, NonConvergenceError

_HALF_PI = 0.5 * math.pi
# |(pi/2) sinh t| <= ~700 keeps x = exp(...) inside normal double range.
_T_MAX = 6.7
_BASE_STEP = 0.5
_MAX_LEVELS = 10
# A node contribution this far (relative) below the running peak, twice in a
# row, ends the march.
_TAIL_CUTOFF = 1e-22
# Catastrophic scale for a single transformed contribution.
_BLOWUP = 1e100


@dataclass(frozen=True)
class QuadratureResult:
    """Converged integral value with an absolute error estimate."""

    value: float | complex
    err_estimate: float
    evaluations: int

    def __post_init__(self) -> None:
        if self.err_estimate < 0.0:
            raise ValueError("err_estimate must be non-negative")
        if self.evaluations < 1:
            raise ValueError("evaluations must be at least 1")


def _node(t: float) -> tuple[float, float]:
    """Abscissa and weight (without the step factor h) at parameter t."""
    sh = math.sinh(t)
    x = math.exp(_HALF_PI * sh)
    w = _HALF_PI * math.cosh(t) * x
    return x, w


class _March:
    """Walks nodes away from t = 0 in one direction until the tail dies."""

    def __init__(self, f: Callable[[float], float], label: str):
        self.f = f
        self.label = label
        self.evaluations = 0

    def sum_terms(self, start: float, stride: float) -> float | complex:
        total = 0.0
        peak = 0.0
        small_run = 0
        mags: list[float] = []
        t = start
        while abs(t) <= _T_MAX:
            x, w = _node(t)
            term = w * self.f(x)
            self.evaluations += 1
            mag = abs(term)
            if not math.isfinite(mag) or mag > _BLOWUP:
                raise DivergenceError(
                    f"integrand not integrable toward {self.label} "
                    f"(contribution ~{mag:.3e} at x={x:.3e})"
                )
            total = total + term
            peak = max(peak, mag)
            mags.append(mag)
            if peak > 0.0 and mag <= _TAIL_CUTOFF * peak:
                small_run += 1
                if small_run >= 2:
                    return total
            else:
                small_run = 0
            t += stride
        # Parameter cap reached with the tail still alive.
        last = mags[-1] if mags else 0.0
        if peak > 0.0 and last > 1e-8 * peak:
            growing = len(mags) >= 3 and mags[-1] >= mags[-2] >= mags[-3]
            if growing or last > 1e-2 * peak:
                raise DivergenceError(
                    f"integrand not integrable toward {self.label} "
                    f"(contributions still ~{last / peak:.1e} of peak at the "
                    f"parameter cap)"
                )
            raise NonConvergenceError(
                f"integrand tail toward {self.label} decays too slowly for "
                f"the double-exponential parameter range"
            )
        return total


def integrate_semiinfinite(
    f: Callable[[float], float],
    tol: float,
    max_levels: int = _MAX_LEVELS,
) -> QuadratureResult:
    """Integrate f over (0, inf) to relative tolerance ``tol``.

    The returned ``err_estimate`` is absolute; success means
    err_estimate <= tol * |value| (with a roundoff floor).

    Raises:
        DivergenceError: when partial sums grow without bound.
        NonConvergenceError: when the level budget is exhausted first.
    """
    if not (tol > 0.0):
        raise ValueError("tol must be positive")

    h = _BASE_STEP
    x0, w0 = _node(0.0)
    center = w0 * f(x0)
    evaluations = 1

    right = _March(f, "infinity")
    left = _March(f, "zero")
    total = center + right.sum_terms(h, h) + left.sum_terms(-h, -h)
    evaluations += right.evaluations + left.evaluations
    level_sum = h * total

    prev = level_sum
    for _ in range(max_levels):
        prev = level_sum
        h *= 0.5
        right = _March(f, "infinity")   # odd multiples of the new h
        left = _March(f, "zero")
        odd = right.sum_terms(h, 2.0 * h) + left.sum_terms(-h, -2.0 * h)
        evaluations += right.evaluations + left.evaluations
        level_sum = 0.5 * prev + h * odd

        diff = abs(level_sum - prev)
        floor = 5e-16 * abs(level_sum)
        err = max(0.5 * diff, floor)
        if diff <= tol * abs(level_sum) or diff <= floor:
            return QuadratureResult(level_sum, err, evaluations)

    raise NonConvergenceError(
        f"integrate_semiinfinite: level budget exhausted "
        f"(last change {abs(level_sum - prev):.3e}, tol {tol:g})"
    )
