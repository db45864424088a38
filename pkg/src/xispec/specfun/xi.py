"""Completed xi function and its critical-line restriction.

The normalization is

    xi(s) = 1/2 * s(s-1) * pi^(-s/2) * Gamma(s/2) * zeta(s),

evaluated as (s-1) * pi^(-s/2) * Gamma(s/2 + 1) * zeta(s) so the factor
s * Gamma(s/2) never meets the Gamma pole at s = 0; the zeta pole at s = 1
is cancelled analytically by treating (s-1)*zeta(s) as a unit.  With this
normalization xi(0) = xi(1) = 1/2, xi is entire, symmetric under s <-> 1-s
and real on the critical line.

``hardy_z`` is the classically rescaled real sign-carrier

    Z(t) = e^{i theta(t)} zeta(1/2 + it),
    theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi,

which shares the critical-line zeros of xi but stays O(1), so sign-change
scanning keeps working where |Xi(t)| ~ e^{-pi t / 4} underflows doubles.
"""

from __future__ import annotations

import cmath
import math

from ..errors import RealnessError
from .gamma import gamma, log_gamma
from .zeta import zeta

_QUARTER_LOG_PI = 0.25 * math.log(math.pi)

# Xi(t) = -(t^2 + 1/4)/2 * pi^(-1/4) * |Gamma(1/4 + it/2)| * Z(t), so the
# bracket-to-Xi sign map used by the zero finder is a fixed flip.
XI_SIGN_FROM_Z = -1.0


def xi(s: complex, depth: int = 1) -> complex:
    """Completed xi function; entire, with xi(0) = xi(1) = 1/2."""
    s = complex(s)
    if s == 1.0:
        pole_unit = complex(1.0)  # lim (s-1) zeta(s)
    else:
        pole_unit = (s - 1.0) * zeta(s, depth)
    return cmath.exp(-0.5 * s * math.log(math.pi)) * gamma(0.5 * s + 1.0) * pole_unit


def xi_critical(t: float, depth: int = 1) -> float:
    """Xi(t) = xi(1/2 + it): real by the functional equation.

    The imaginary residue of the computed complex value must stay below
    1e-10 * (1 + |Xi(t)|); a violation signals an upstream accuracy bug.

    Raises:
        RealnessError: when the imaginary residue exceeds the bound.
    """
    value = xi(complex(0.5, float(t)), depth)
    bound = 1e-10 * (1.0 + abs(value))
    if abs(value.imag) > bound:
        raise RealnessError(
            f"xi_critical({t!r}): imaginary residue {value.imag:.3e} "
            f"exceeds bound {bound:.3e}"
        )
    return value.real


def riemann_siegel_theta(t: float) -> float:
    """theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi, continuous in t."""
    t = float(t)
    return log_gamma(complex(0.25, 0.5 * t)).imag - 0.5 * t * math.log(math.pi)


def hardy_z(t: float, depth: int = 1) -> float:
    """Hardy's Z(t): real, O(1), with the same critical-line zeros as Xi.

    sign(Xi(t)) = XI_SIGN_FROM_Z * sign(Z(t)).

    Raises:
        RealnessError: when the rotated zeta value fails to be real.
    """
    t = float(t)
    value = cmath.exp(1j * riemann_siegel_theta(t)) * zeta(complex(0.5, t), depth)
    bound = 1e-8 * (1.0 + abs(value))
    if abs(value.imag) > bound:
        raise RealnessError(
            f"hardy_z({t!r}): imaginary residue {value.imag:.3e} "
            f"exceeds bound {bound:.3e}"
        )
    return value.real


def log_abs_xi_critical(t: float) -> float:
    """log |Xi(t)|, computable far past the underflow range of xi itself."""
    t = float(t)
    z = abs(hardy_z(t))
    if z == 0.0:
        return -math.inf
    return (
        math.log(0.5 * (t * t + 0.25))
        - _QUARTER_LOG_PI
        + log_gamma(complex(0.25, 0.5 * t)).real
        + math.log(z)
    )
