"""The complex oscillator potential family and its auxiliary functions.

The potential is built from g(x) = a*Erf(x)^2 + b*Erf(x) + c through the
envelope alpha(x) = exp(x^2/2) sqrt(g(x)):

    V(x) = x^2 - 2 - 2 d/dx[ (b + 2a Erf(x) - i sqrt(pi) lam) / (sqrt(pi) alpha(x)^2) ]

Validation guarantees g > 0 on the closed range of Erf, so alpha is real and
never vanishes.  The derivative is expanded analytically (quotient rule); no
numerical differentiation is involved.

The eigenstate construction downstream is exactly solvable only on the
parameter manifold pi*lam^2 = 4ac - b^2 (the envelope solves the underlying
Ermakov equation only there).  ``consistent_lambda`` returns the matching
imaginary-strength for given (a, b, c) and ``solvability_defect`` measures
the departure from that manifold; evaluating the potential itself is well
defined for any real ``lam``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterDomainError
from .specfun import erf

__all__ = [
    "PotentialParams", "validate", "alpha", "alpha_log_derivative",
    "potential_value", "consistent_lambda", "solvability_defect",
]

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class PotentialParams:
    """Real quadruple (a, b, c, lam) defining one member of the family."""

    a: float
    b: float
    c: float
    lam: float

    def __post_init__(self):
        for name in ("a", "b", "c", "lam"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterDomainError(f"parameter {name} must be finite")


def validate(params):
    """Return ``params`` unchanged if g(s) = a s^2 + b s + c > 0 on [-1, 1].

    Raises :class:`ParameterDomainError` naming the violated inequality:

    * a > 0 requires c > b^2 / (4a) (positive discriminant margin),
    * a = 0, b > 0 requires c > b,
    * a = b = 0 requires c > 0,

    and a, b must be nonnegative.
    """
    a, b, c = params.a, params.b, params.c
    if a < 0:
        raise ParameterDomainError("requires a >= 0")
    if b < 0:
        raise ParameterDomainError("requires b >= 0")
    if a > 0:
        if c <= b * b / (4.0 * a):
            raise ParameterDomainError("requires c > b^2/(4a) when a > 0")
    elif b > 0:
        if c <= b:
            raise ParameterDomainError("requires c > b when a = 0, b > 0")
    elif c <= 0:
        raise ParameterDomainError("requires c > 0 when a = b = 0")
    return params


def consistent_lambda(a, b, c):
    """Imaginary strength on the exactly solvable manifold: sqrt((4ac - b^2)/pi).

    Raises :class:`ParameterDomainError` when 4ac < b^2 (no real solution).
    """
    disc = 4.0 * a * c - b * b
    if disc < 0:
        raise ParameterDomainError("requires 4ac >= b^2 for a real consistent lambda")
    return math.sqrt(disc / math.pi)


def solvability_defect(params):
    """lam^2 - (4ac - b^2)/pi; zero iff the eigenstate formulas are exact."""
    return params.lam ** 2 - (4.0 * params.a * params.c - params.b ** 2) / math.pi


def _g(params, e):
    return params.a * e * e + params.b * e + params.c


def alpha(params, x):
    """Envelope exp(x^2/2) sqrt(g(Erf(x))); strictly positive for valid params."""
    x = np.asarray(x, dtype=float)
    return np.exp(0.5 * x * x) * np.sqrt(_g(params, erf(x)))


def alpha_log_derivative(params, x):
    """alpha'(x)/alpha(x) = x + g'(x) / (2 g(x))."""
    x = np.asarray(x, dtype=float)
    e = erf(x)
    e_prime = 2.0 / _SQRT_PI * np.exp(-x * x)
    g = _g(params, e)
    g_prime = (2.0 * params.a * e + params.b) * e_prime
    return x + g_prime / (2.0 * g)


def potential_value(params, x):
    """Complex potential V(x), evaluated in closed form.

    With u = (b + 2a Erf - i sqrt(pi) lam)/sqrt(pi) and w = alpha^2, the
    bracket derivative is (u' w - u w')/w^2 = [u' - u (2x + g'/g)] exp(-x^2)/g,
    so

        V = x^2 - 2 - 2 [u' - u (2x + g'/g)] exp(-x^2) / g.

    The right-hand form never forms exp(+x^2), so it stays finite on the
    whole line.  In the oscillator limit a = b = lam = 0 the bracket
    vanishes identically and V = x^2 - 2 exactly; for lam = 0 the result
    has zero imaginary part.
    """
    x = np.asarray(x, dtype=float)
    e = erf(x)
    e_prime = 2.0 / _SQRT_PI * np.exp(-x * x)
    g = _g(params, e)
    g_prime = (2.0 * params.a * e + params.b) * e_prime

    u = (params.b + 2.0 * params.a * e - 1j * _SQRT_PI * params.lam) / _SQRT_PI
    u_prime = 2.0 * params.a * e_prime / _SQRT_PI
    inv_w = np.exp(-x * x) / g

    return x * x - 2.0 - 2.0 * inv_w * (u_prime - u * (2.0 * x + g_prime / g))
