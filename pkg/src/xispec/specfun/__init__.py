"""Complex special functions and quadrature engines.

Everything here is pure and reentrant: no shared mutable state beyond
read-mostly caches that are rebuilt atomically, so concurrent callers are
safe.
"""

from .besselk import BesselOrder, OrderKind, bessel_k, bessel_k_with_error
from .gamma import gamma, log_gamma
from .quadrature import QuadratureResult, integrate_semiinfinite
from .xi import (
    XI_SIGN_FROM_Z,
    hardy_z,
    log_abs_xi_critical,
    riemann_siegel_theta,
    xi,
    xi_critical,
)
from .zeta import EM_ORDER_CAP, EM_TERMS_CAP, em_truncation, zeta

__all__ = [
    "BesselOrder",
    "OrderKind",
    "QuadratureResult",
    "EM_ORDER_CAP",
    "EM_TERMS_CAP",
    "XI_SIGN_FROM_Z",
    "bessel_k",
    "bessel_k_with_error",
    "em_truncation",
    "gamma",
    "hardy_z",
    "integrate_semiinfinite",
    "log_abs_xi_critical",
    "log_gamma",
    "riemann_siegel_theta",
    "xi",
    "xi_critical",
    "zeta",
]
