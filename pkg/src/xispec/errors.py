"""Exception taxonomy shared by every xispec module.

Numerical failures are signalled, never papered over: a value that cannot be
computed to its contract raises instead of returning garbage.  Audits that
*use* a failure mode (e.g. the divergence of a norm integral at excluded
orders) catch the specific exception.
"""


class XispecError(Exception):
    """Base class for all xispec-specific errors."""


class PoleError(XispecError, ValueError):
    """Evaluation requested exactly at a pole (gamma at -n, zeta at 1, ...)."""


class DomainError(XispecError, ValueError):
    """Argument outside the operation's domain (e.g. x <= 0 for K_nu)."""


class GammaOverflowError(XispecError, OverflowError):
    """Gamma result exceeds the double-precision representable range."""


class RealnessError(XispecError, ArithmeticError):
    """A value that must be real carries an imaginary residue above bound.

    This signals an accuracy bug upstream, not a property of the input.
    """


class AccuracyError(XispecError, ArithmeticError):
    """The achievable error estimate exceeds the requested tolerance."""


class NonConvergenceError(XispecError, ArithmeticError):
    """Iteration budget exhausted before the error estimate met tolerance."""


class DivergenceError(XispecError, ArithmeticError):
    """Partial sums of an integral grow without bound.

    Deliberately distinct from NonConvergenceError: divergence is a
    *finding* consumed by the finiteness audits, not a numerical accident.
    """


class BracketError(XispecError, ValueError):
    """Root bracket endpoints do not straddle a sign change."""


class SingularFitError(XispecError, ValueError):
    """Least-squares fit has a singular design matrix (degenerate samples)."""


class CacheCorruptionError(XispecError):
    """Persistent zero cache failed checksum or structural validation."""


class ConfigError(XispecError, ValueError):
    """Run configuration rejected (unknown key, non-positive override...)."""
