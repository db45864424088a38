"""Modified Bessel function K of real and purely imaginary order.

One integral representation serves both branches:

    K_nu(x)    = int_0^inf exp(-x cosh t) cosh(nu t) dt      (real nu)
    K_{i mu}(x) = int_0^inf exp(-x cosh t) cos(mu t)  dt      (imaginary)

evaluated by the trapezoidal rule in t, which is spectrally accurate here
because the integrand already decays double-exponentially.  The real-order
integrand is positive, so that path is accurate at machine level across the
whole working box.

The imaginary-order integrand oscillates, and for small x the integral is
exponentially smaller than its terms; there the ascending series

    K_{i mu}(x) = -pi * Im I_{i mu}(x) / sinh(pi mu)

takes over (the sinh division is exact, so the small scale e^{-pi mu / 2}
costs no cancellation).  Between the two paths there remains a corner
(mu large, x moderate) where double precision cannot reach 1e-10 relative
accuracy; the error estimate reports the achievable level honestly and
``bessel_k`` raises when a requested tolerance cannot be met.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from ..errors import AccuracyError, DomainError, NonConvergenceError
from .gamma import gamma

_EPS = 2.220446049250313e-16
# Switch point between the series and the integral on the imaginary branch.
_SERIES_X_MAX = 12.0
_SERIES_TERM_CAP = 500
_TRAP_BASE_STEP = 0.25
_TRAP_LEVEL_CAP = 9
# exp(-x) underflows doubles past this; K_nu(x) <= sqrt(pi/2x) e^{-x}.
_X_UNDERFLOW = 745.0


class OrderKind(enum.Enum):
    REAL = "real"
    IMAGINARY = "imaginary"


@dataclass(frozen=True)
class BesselOrder:
    """Order of K: nu (real kind) or mu with nu = i*mu (imaginary kind)."""

    kind: OrderKind
    magnitude: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.magnitude):
            raise DomainError("BesselOrder magnitude must be finite")
        if self.magnitude < 0.0:
            raise DomainError("BesselOrder magnitude must be non-negative")

    @classmethod
    def real_order(cls, nu: float) -> "BesselOrder":
        # K_{-nu} = K_nu: the representation depends on nu only through
        # cosh(nu t), so the sign is dropped at construction.
        return cls(OrderKind.REAL, abs(float(nu)))

    @classmethod
    def imaginary_order(cls, mu: float) -> "BesselOrder":
        return cls(OrderKind.IMAGINARY, abs(float(mu)))

    @classmethod
    def from_value(cls, nu: float | complex) -> "BesselOrder":
        nu = complex(nu)
        if nu.imag == 0.0:
            return cls.real_order(nu.real)
        if nu.real == 0.0:
            return cls.imaginary_order(nu.imag)
        raise DomainError(
            f"BesselOrder must be purely real or purely imaginary, got {nu!r}"
        )

    @property
    def as_complex(self) -> complex:
        if self.kind is OrderKind.REAL:
            return complex(self.magnitude, 0.0)
        return complex(0.0, self.magnitude)

    @property
    def is_closed_form_pole(self) -> bool:
        """True when this is a positive integer real order.

        The closed form of the norm integral has poles there.
        """
        return (
            self.kind is OrderKind.REAL
            and self.magnitude >= 0.5
            and abs(self.magnitude - round(self.magnitude)) < 1e-12
        )


def _log_cosh(u: np.ndarray) -> np.ndarray:
    a = np.abs(u)
    return a + np.log1p(np.exp(-2.0 * a)) - math.log(2.0)


def _trap_nodes(h: float, t_upper: float, level: int) -> np.ndarray:
    """Trapezoid abscissas: the full grid at level 0, odd refinements after."""
    if level == 0:
        return np.arange(0.0, t_upper + h, h)
    return np.arange(h, t_upper + h, 2.0 * h)


def _k_real(nu: float, x: float) -> tuple[float, float]:
    """(value, relative error estimate) for real order."""
    t_star = math.asinh(nu / x) if nu > 0.0 else 0.0

    def ln_g(t: float) -> float:
        lc = 0.0
        if nu > 0.0:
            u = nu * t
            lc = u + math.log1p(math.exp(-2.0 * u)) - math.log(2.0)
        return -x * math.cosh(t) + lc

    ln_peak = ln_g(t_star)
    if ln_peak > 690.0:
        raise AccuracyError(
            f"bessel_k: K_{nu:g}({x:g}) ~ exp({ln_peak:.0f}) exceeds double range"
        )
    # For tiny x the integrand stays flat out to t ~ log(2/x); the node range
    # must clear that knee, not just the peak.
    t_up = t_star + 1.0
    while ln_g(t_up) > ln_peak - 46.0 and t_up < 1500.0:
        t_up += 0.5

    def level_nodes(h: float, level: int) -> float:
        t = _trap_nodes(h, t_up, level)
        ln_vals = -x * np.cosh(t)
        if nu > 0.0:
            ln_vals = ln_vals + _log_cosh(nu * t)
        vals = np.exp(ln_vals)
        if level == 0:
            vals[0] *= 0.5
        return float(np.sum(vals))

    h = _TRAP_BASE_STEP
    total = h * level_nodes(h, 0)
    for _ in range(_TRAP_LEVEL_CAP):
        h *= 0.5
        new_total = 0.5 * total + h * level_nodes(h, 1)
        diff = abs(new_total - total)
        total = new_total
        if diff <= 1e-14 * abs(total):
            return total, max(diff / max(abs(total), 5e-324), 2.0 * _EPS)
    raise NonConvergenceError(
        f"bessel_k: trapezoid not converged for real order {nu:g}, x={x:g}"
    )


def _k_imag_series(mu: float, x: float) -> tuple[float, float]:
    """Ascending-series path: accurate for x <~ 12 at any desk-scale mu."""
    recip = 1.0 / gamma(complex(1.0, mu))   # 1 / Gamma(1 + i mu)
    coeff = 1.0                              # (x^2/4)^k / k!
    q = 0.25 * x * x
    series = recip
    peak = abs(recip)
    for k in range(1, _SERIES_TERM_CAP + 1):
        coeff *= q / k
        recip = recip / complex(k, mu)
        term = coeff * recip
        series += term
        mag = abs(term)
        peak = max(peak, mag)
        if mag <= 1e-18 * (abs(series) + peak):
            break
    else:
        raise NonConvergenceError(
            f"bessel_k: series not converged for imaginary order {mu:g}, x={x:g}"
        )
    im_part = (cmath.exp(complex(0.0, mu * math.log(0.5 * x))) * series).imag
    sinh_pi_mu = math.sinh(math.pi * mu)
    value = -math.pi * im_part / sinh_pi_mu
    abs_floor = 4.0 * _EPS * (peak + abs(series))
    rel = abs_floor / max(abs(im_part), 5e-324)
    return value, max(rel, 2.0 * _EPS)


def _k_imag_trapezoid(mu: float, x: float) -> tuple[float, float]:
    """Oscillatory integral path: accurate when x is not small against mu^2."""
    t_up = math.acosh(1.0 + 50.0 / x) + 0.25

    def level_values(h: float, level: int) -> tuple[float, float]:
        t = _trap_nodes(h, t_up, level)
        vals = np.exp(-x * np.cosh(t)) * np.cos(mu * t)
        if level == 0:
            vals[0] *= 0.5
        return float(np.sum(vals)), float(np.sum(np.abs(vals)))

    h = _TRAP_BASE_STEP
    s, a = level_values(h, 0)
    total, abs_total = h * s, h * a
    for _ in range(_TRAP_LEVEL_CAP):
        h *= 0.5
        s, a = level_values(h, 1)
        new_total = 0.5 * total + h * s
        abs_total = 0.5 * abs_total + h * a
        diff = abs(new_total - total)
        total = new_total
        # Roundoff floor of the level sums; level-to-level jitter of a
        # cancelled sum sits a small factor above eps * sum(|terms|).
        noise = 2e-15 * abs_total
        if diff <= max(1e-14 * abs(total), noise):
            rel = (0.5 * diff + noise) / max(abs(total), 5e-324)
            return total, max(rel, 2.0 * _EPS)
    raise NonConvergenceError(
        f"bessel_k: trapezoid not converged for imaginary order {mu:g}, x={x:g}"
    )


def bessel_k_with_error(order: BesselOrder, x: float) -> tuple[float, float]:
    """K at the given order and x > 0, with a relative error estimate.

    The estimate is honest about oscillatory cancellation: in the
    imaginary-order regime where double precision cannot deliver the value
    (mu large, x moderate) it grows toward and beyond 1.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"bessel_k: x must be positive and finite, got {x!r}")
    if x > _X_UNDERFLOW:
        return 0.0, 0.0
    if order.kind is OrderKind.REAL or order.magnitude == 0.0:
        return _k_real(order.magnitude, x)
    mu = order.magnitude
    if math.pi * mu > 700.0:
        raise AccuracyError(
            f"bessel_k: imaginary order {mu:g} beyond sinh(pi mu) double range"
        )
    if x <= _SERIES_X_MAX:
        return _k_imag_series(mu, x)
    return _k_imag_trapezoid(mu, x)


def bessel_k(order: BesselOrder, x: float, tol: float | None = None) -> float:
    """Modified Bessel K; real-valued on both order branches.

    Args:
        order: real or purely imaginary order.
        x: argument, must be positive.
        tol: optional relative tolerance; when given, an estimate above it
            raises instead of returning a degraded value.

    Raises:
        DomainError: for x <= 0.
        AccuracyError: when ``tol`` is given and cannot be met.
    """
    value, err = bessel_k_with_error(order, x)
    if tol is not None and err > tol:
        raise AccuracyError(
            f"bessel_k: relative error estimate {err:.3e} exceeds tol {tol:g} "
            f"at order {order.kind.value}:{order.magnitude:g}, x={x:g}"
        )
    return value
