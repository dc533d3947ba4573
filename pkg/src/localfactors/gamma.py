"""Principal-branch complex log-gamma.

Arguments are shifted to ``Re z >= 15`` by the recurrence, where the Stirling
series with ten Bernoulli terms is accurate to well below 1e-15.  For
``Re z < 0`` the modulus comes from the reflection formula; the imaginary part
is always assembled from argument sums so the result lies on the branch that is
continuous on the complement of the non-positive real axis.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

from .errors import PoleAtSample

SHIFT_TARGET = 15.0
STIRLING_TERMS = 10
HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n with the convention B_1 = -1/2."""
    table = [Fraction(1)]
    for m in range(1, n + 1):
        table.append(-sum(math.comb(m + 1, k) * table[k] for k in range(m)) / (m + 1))
    return table[n]


@lru_cache(maxsize=None)
def _stirling_coefficients() -> tuple[float, ...]:
    return tuple(float(bernoulli(2 * k) / (2 * k * (2 * k - 1))) for k in range(1, STIRLING_TERMS + 1))


def _stirling(z: complex) -> complex:
    out = (z - 0.5) * cmath.log(z) - z + HALF_LOG_2PI
    inv = 1 / z
    inv2 = inv * inv
    term = inv
    for c in _stirling_coefficients():
        out += c * term
        term *= inv2
    return out


def _is_pole(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def log_gamma(z: complex) -> complex:
    z = complex(z)
    if _is_pole(z):
        raise PoleAtSample(f"gamma has a pole at {z}")
    n = max(0, math.ceil(SHIFT_TARGET - z.real))
    shifted = _stirling(z + n)
    log_prod = sum(cmath.log(z + k) for k in range(n))  # principal logs: continuous off (-inf, 0]
    value = shifted - log_prod
    if z.real < 0:
        # reflection gives the modulus without the cancellation of a long shift
        s = cmath.sin(math.pi * z)
        if s == 0:
            raise PoleAtSample(f"gamma has a pole at {z}")
        modulus = math.log(math.pi) - math.log(abs(s)) - log_gamma(1 - z).real
        value = complex(modulus, value.imag)
    return value


def gamma(z: complex) -> complex:
    return cmath.exp(log_gamma(z))


def log_gamma_sum(args, signs=None) -> complex:
    """``sum_i sign_i log_gamma(arg_i)`` after sorting the arguments canonically.

    Sorting makes the result bitwise invariant under permutations of equal
    multisets of arguments.
    """
    pairs = [(complex(a), 1 if signs is None else signs[i]) for i, a in enumerate(args)]
    pairs.sort(key=lambda p: (p[1], p[0].real, p[0].imag))
    return sum((sg * log_gamma(a) for a, sg in pairs), 0j)
