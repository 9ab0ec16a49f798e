"""Exception hierarchy.

Every exception carries the process exit code the CLI reports for it.
"""


class HaloError(Exception):
    exit_code = 1


class InputError(HaloError, ValueError):
    """Malformed or out-of-range input."""

    exit_code = 4


class DomainError(InputError):
    """Argument outside the domain of an operation (non-unit, g not in Gamma, ...)."""


class PrecisionError(HaloError):
    """Requested precision exceeds what the inputs carry."""

    exit_code = 2


class IndeterminateAtPrecision(PrecisionError):
    """A quantity cannot be certified at the available (p, w)-adic precision."""


class KeyCollisionError(PrecisionError):
    """Group keys are not known to be separated at the working precision."""


class UnsupportedLevel(HaloError):
    exit_code = 3


class RamifiedConstantUnsupported(UnsupportedLevel):
    """A local trace-formula factor at a prime dividing both N and the discriminant."""

    def __init__(self, ell, p, s, j):
        self.ell, self.p, self.s, self.j = ell, p, s, j
        super().__init__(
            f"local factor c(s,f) at ell={ell} dividing Delta(s={s}, j={j}) = {s * s - 4 * p**j} "
            "is not available; pass a ramified-factor hook"
        )


class NonIntegralDivision(HaloError, ArithmeticError):
    """Division by an integer left a non-integral result.

    Coefficients divided in this package are integral a priori, so this
    always indicates an arithmetic bug upstream.
    """
