"""Exact exponent bookkeeping for the depth-aspect bound.

Everything except :func:`optimal_H` is an exact rational.  The admissible range
for ``delta0`` is the open interval (11/18, 1); its endpoints are accepted so
that limits can be reported, but a :class:`NonAdmissibleWarning` is issued.
"""
from __future__ import annotations

import warnings
from fractions import Fraction

from .errors import NonAdmissibleWarning

DELTA0_MIN = Fraction(11, 18)
DELTA0_MAX = Fraction(1)


def as_fraction(v) -> Fraction:
    """Exact rational from an int, Fraction, string like ``"7/10"``, or float literal."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return Fraction(repr(v))
    return Fraction(v)


def _check_delta0(delta0) -> Fraction:
    d = as_fraction(delta0)
    if d < DELTA0_MIN or d > DELTA0_MAX:
        raise ValueError(f"delta0 = {d} outside [{DELTA0_MIN}, {DELTA0_MAX}]")
    if d == DELTA0_MIN or d == DELTA0_MAX:
        warnings.warn(f"delta0 = {d} is a boundary value, reported as a limit only", NonAdmissibleWarning,
                      stacklevel=3)
    return d


def _check_degree(d: int) -> int:
    if int(d) != d or d < 1:
        raise ValueError("degree must be a positive integer")
    return int(d)


def convexity_exponent(d: int) -> Fraction:
    return Fraction(_check_degree(d), 2)


def theta(delta0) -> Fraction:
    """``(2 delta0 + 1) / 3``."""
    return (2 * _check_delta0(delta0) + 1) / 3


def subconvex_exponent(d: int, delta0) -> Fraction:
    """``(d - 1 + theta) / 2``."""
    return (_check_degree(d) - 1 + theta(delta0)) / 2


def savings(d: int, delta0) -> Fraction:
    """Gap to convexity, ``(1 - theta) / 2``."""
    return convexity_exponent(d) - subconvex_exponent(d, delta0)


def beta_prime_choice(d: int, eps) -> Fraction:
    """``1 + eps / (2d - 2)``; undefined (and rejected) for d = 1."""
    d = _check_degree(d)
    if d == 1:
        raise ValueError("beta' = 1 + eps/(2d-2) is undefined for d = 1")
    e = as_fraction(eps)
    if e <= 0:
        raise ValueError("eps must be positive")
    return 1 + e / (2 * d - 2)


def chain_exponent(d: int, delta0, eps) -> Fraction:
    """``(d - 1) beta' + theta``: the exponent of x after the smoothing step."""
    return (_check_degree(d) - 1) * beta_prime_choice(d, eps) + theta(delta0)


def optimal_H(x: float, delta0) -> float:
    """The window ``H = x^{(2 delta0 + 1)/3}`` balancing ``x^{2 delta0 + 1} / H`` against ``H^2``."""
    if x <= 0:
        raise ValueError("x must be positive")
    return float(x) ** float(theta(delta0))
