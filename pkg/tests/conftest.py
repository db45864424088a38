"""Shared fixtures: session-scoped zero tables and the high-precision oracle.

mpmath (at 30 significant digits) is the independent test-time oracle for
special-function values; it is never imported by the package itself.
"""

from __future__ import annotations

import mpmath as mp
import pytest

from xispec.zeros import CriticalZero, scan_zeros

mp.mp.dps = 30

#: First ten critical-line ordinates, frozen from the package's own scanner
#: and cross-checked against mp.zetazero in test_zeros.
KNOWN_ZEROS_10 = (
    14.134725141734693,
    21.022039638771555,
    25.010857580145688,
    30.424876125859513,
    32.935061587739190,
    37.586178158825671,
    40.918719012147495,
    43.327073280914999,
    48.005150881167159,
    49.773832477672302,
)


def mp_gamma(z: complex) -> complex:
    return complex(mp.gamma(mp.mpc(z.real, z.imag)))


def mp_zeta(s: complex) -> complex:
    return complex(mp.zeta(mp.mpc(s.real, s.imag)))


def mp_besselk(order: complex, x: float) -> float:
    return complex(mp.besselk(mp.mpc(order.real, order.imag), mp.mpf(x))).real


def rel_err(value: complex, reference: complex) -> float:
    reference = complex(reference)
    scale = abs(reference)
    if scale == 0.0:
        return abs(complex(value))
    return abs(complex(value) - reference) / scale


@pytest.fixture(scope="session")
def zeros_to_100() -> list[CriticalZero]:
    return scan_zeros(100.0, 1e-8)


@pytest.fixture(scope="session")
def zeros_for_products() -> list[CriticalZero]:
    """At least 800 zeros, for the product-truncation studies."""
    t_max = 1190.0
    zeros = scan_zeros(t_max, 1e-8)
    while len(zeros) < 800:
        t_max *= 1.1
        zeros = scan_zeros(t_max, 1e-8)
    return zeros
