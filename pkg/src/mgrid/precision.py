"""Working-precision plumbing shared by every numerical routine.

All multiprecision arithmetic goes through mpmath.  A PrecisionContext fixes
the binary mantissa size and the absolute tolerance that series truncations
must certify.  Complex results are mpmath ``mpc`` values; callers that want
machine floats can apply ``complex()``.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

__all__ = [
    "PrecisionContext",
    "DEFAULT_CONTEXT",
    "compensated_sum",
    "ensure_finite",
    "mpc_from",
    "exp2pi",
]

# Series loops abort after ITER_CAP_FACTOR * mantissa_bits terms.
ITER_CAP_FACTOR = 10


class ConvergenceError(ArithmeticError):
    """A certified series/recurrence failed to converge within its cap."""


@dataclass(frozen=True)
class PrecisionContext:
    """Binary precision plus the absolute tolerance series must reach.

    mantissa_bits: working mantissa size in bits, at least 53.
    target_tol:    absolute truncation tolerance for series remainders.
    """

    mantissa_bits: int = 113
    target_tol: float = 1e-25

    def __post_init__(self):
        if self.mantissa_bits < 53:
            raise ValueError("mantissa_bits must be >= 53")
        if not self.target_tol > 0:
            raise ValueError("target_tol must be positive")

    @property
    def iteration_cap(self) -> int:
        return ITER_CAP_FACTOR * self.mantissa_bits

    @contextmanager
    def working(self, extra_bits: int = 0):
        """mpmath working precision with a small guard on top of the context."""
        with mpmath.workprec(self.mantissa_bits + 20 + max(0, extra_bits)):
            yield


DEFAULT_CONTEXT = PrecisionContext()


def mpc_from(z) -> mpmath.mpc:
    """Coerce a number (complex, Fraction, mpf/mpc) to mpc at current precision."""
    if isinstance(z, Fraction):
        return mpmath.mpc(mpmath.mpf(z.numerator) / z.denominator)
    return mpmath.mpc(z)


def ensure_finite(z):
    """Reject NaN/Inf; results entering the public API must be finite."""
    zz = mpmath.mpc(z)
    if not (mpmath.isfinite(zz.real) and mpmath.isfinite(zz.imag)):
        raise ArithmeticError(f"non-finite value {z!r}")
    return z


def exp2pi(x) -> mpmath.mpc:
    """e^{2 pi i x} with x given exactly (Fraction) or as a real number.

    Fractions are reduced mod 1 before evaluation so unit phases stay exact
    to working precision regardless of the size of the exponent.
    """
    if isinstance(x, Fraction):
        x = x - Fraction(int(x))  # reduce mod 1 exactly
        arg = 2 * mp.pi * mpmath.mpf(x.numerator) / x.denominator
    else:
        arg = 2 * mp.pi * mpmath.mpf(x)
    return mpmath.mpc(mpmath.cos(arg), mpmath.sin(arg))


def _neumaier(values):
    s = values[0] * 0
    comp = s
    for v in values:
        t = s + v
        if abs(s) >= abs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
    return s + comp


def compensated_sum(terms):
    """Error-compensated sum of an ordered finite sequence of complex terms.

    Neumaier accumulation, applied to real and imaginary parts separately.
    The result depends only on the term order, never on internal chunking.
    Accepts floats, complex, mpf and mpc values (mixed input is coerced to
    mpc at the current working precision).  An empty sequence sums to 0.
    """
    terms = list(terms)
    if not terms:
        return mpmath.mpc(0)
    if all(isinstance(t, (int, float)) for t in terms):
        return _neumaier([float(t) for t in terms])
    if all(isinstance(t, complex) or isinstance(t, (int, float)) for t in terms):
        xs = [complex(t) for t in terms]
        return complex(_neumaier([x.real for x in xs]), _neumaier([x.imag for x in xs]))
    xs = [mpc_from(t) for t in terms]
    return mpmath.mpc(_neumaier([x.real for x in xs]), _neumaier([x.imag for x in xs]))
