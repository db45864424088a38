"""Riemann zeta for complex arguments via Euler-Maclaurin summation.

The Euler-Maclaurin tail is applied on Re s >= 1/2, where the partial sums
carry no catastrophic cancellation; the left half-plane is reached through
the reflection formula

    zeta(s) = chi(s) zeta(1-s),
    chi(s)  = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s),

with chi evaluated in log space so large |Im s| cannot overflow the sine.

Truncation point and correction order adapt to |s|; the hard caps are
exported as ``EM_TERMS_CAP`` / ``EM_ORDER_CAP`` so batch reports can record
them.  A ``depth`` multiplier scales the truncation point and is the
"doubled precision" knob used by the zero finder's oracle re-runs.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np

from ..errors import NonConvergenceError, PoleError
from .gamma import _log_sin_pi, log_gamma

EM_ORDER_CAP = 30       # number of B_{2k}/(2k)! correction terms kept
EM_TERMS_CAP = 200_000  # hard cap on the truncation point N


def _bernoulli_over_factorial(count: int) -> tuple[float, ...]:
    """B_{2k}/(2k)! for k = 1..count, computed exactly then rounded once."""
    n_max = 2 * count
    bern = [Fraction(0)] * (n_max + 1)
    bern[0] = Fraction(1)
    for m in range(1, n_max + 1):
        acc = Fraction(0)
        binom = 1  # C(m+1, j), updated after each use
        for j in range(m):
            acc += binom * bern[j]
            binom = binom * (m + 1 - j) // (j + 1)
        bern[m] = -acc / (m + 1)
    out = []
    fact = Fraction(1)
    for n in range(1, n_max + 1):
        fact *= n
        if n % 2 == 0:
            out.append(float(bern[n] / fact))
    return tuple(out)


_B2K_OVER_FACT = _bernoulli_over_factorial(EM_ORDER_CAP)

# Cached log(n) table, grown on demand; read-mostly and rebuilt atomically,
# so concurrent readers always see a consistent array.
_LOG_TABLE = np.log(np.arange(1, 257, dtype=np.float64))


def _logs_up_to(n: int) -> np.ndarray:
    global _LOG_TABLE
    if n > _LOG_TABLE.size:
        size = 1 << max(8, (n - 1).bit_length())
        _LOG_TABLE = np.log(np.arange(1, size + 1, dtype=np.float64))
    return _LOG_TABLE[:n]


def em_truncation(s: complex, depth: int = 1) -> int:
    """Truncation point N used by the Euler-Maclaurin sum at s."""
    n = depth * (24 + int(math.ceil(0.6 * abs(s))))
    return min(n, EM_TERMS_CAP)


def _zeta_euler_maclaurin(s: complex, depth: int) -> complex:
    n = em_truncation(s, depth)
    logs = _logs_up_to(n - 1)
    # sum_{k=1}^{N-1} k^{-s}
    head = complex(np.sum(np.exp(-s * logs)))

    log_n = math.log(n)
    n_minus_s = cmath.exp(-s * log_n)
    total = head + n_minus_s * (0.5 + float(n) / (s - 1.0))

    # Correction terms: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{1-s-2k}
    rising = s               # s(s+1)...(s+2k-2), updated incrementally
    n_pow = n_minus_s / n    # N^{-s-2k+1}
    scale = abs(total)
    for k in range(1, EM_ORDER_CAP + 1):
        term = _B2K_OVER_FACT[k - 1] * rising * n_pow
        total += term
        if abs(term) <= 1e-18 * max(scale, abs(total)):
            return total
        rising *= (s + (2 * k - 1)) * (s + 2 * k)
        n_pow /= float(n) * float(n)
    raise NonConvergenceError(
        f"zeta: Euler-Maclaurin corrections not converged at s={s!r} "
        f"(N={n}, order cap {EM_ORDER_CAP})"
    )


def _log_chi(s: complex) -> complex:
    return (
        s * math.log(2.0)
        + (s - 1.0) * math.log(math.pi)
        + _log_sin_pi(0.5 * s)
        + log_gamma(1.0 - s)
    )


def zeta(s: complex, depth: int = 1) -> complex:
    """Riemann zeta, analytically continued to the whole plane minus s = 1.

    ``depth`` multiplies the Euler-Maclaurin truncation point (depth=2 is
    the doubled-precision oracle mode).

    Raises:
        PoleError: at s = 1.
    """
    s = complex(s)
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise PoleError(f"zeta: non-finite argument {s!r}")
    if s == 1.0:
        raise PoleError("zeta: pole at s = 1")
    if s.real >= 0.0:
        # Euler-Maclaurin partial sums stay cancellation-free down to the
        # imaginary axis; this branch also covers s = 0, which reflection
        # would map onto the pole.
        return _zeta_euler_maclaurin(s, depth)
    # Trivial zeros: sin(pi s / 2) vanishes at negative even integers and
    # the reflected factors are finite there, so return an exact zero.
    if s.imag == 0.0 and s.real == 2.0 * math.floor(s.real / 2.0):
        return complex(0.0)
    return cmath.exp(_log_chi(s)) * _zeta_euler_maclaurin(1.0 - s, depth)
