"""Finite-precision model of Q_p: valuation shells, Haar measures, representatives.

Elements are stored as ``p**ord * unit`` with the unit known modulo ``p**depth``.
Two additive Haar normalisations are supported because different local
computations are naturally written in different ones:

* ``UNIT_ADDITIVE``: the integers have measure 1, so the shell ``ord = n`` has
  measure ``q**-n * (1 - 1/q)``.
* ``UNIT_SHELL``: the units have additive measure 1, so the integers have measure
  ``q/(q-1)`` and the shell ``ord = n`` has measure ``q**-n``.

The multiplicative measure gives every shell mass 1 in both conventions.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DepthExceeded


class MeasureConvention(str, enum.Enum):
    UNIT_ADDITIVE = "UNIT_ADDITIVE"
    UNIT_SHELL = "UNIT_SHELL"


class MeasureMode(str, enum.Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def euler_phi_prime_power(p: int, k: int) -> int:
    """Order of (Z/p^k)^x; equals 1 for k = 0."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    return 1 if k == 0 else (p - 1) * p ** (k - 1)


def default_depth(conductor: int, truncation: int) -> int:
    """Working depth large enough that every in-scope integrand is locally constant."""
    return conductor + truncation + 2


@dataclass(frozen=True)
class LocalFieldModel:
    """The field Q_p with elements resolved modulo ``p**depth`` inside their shell."""

    p: int
    depth: int = 8
    convention: MeasureConvention = MeasureConvention.UNIT_ADDITIVE

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.depth < 1:
            raise ValueError("working depth must be at least 1")
        object.__setattr__(self, "convention", MeasureConvention(self.convention))

    @property
    def q(self) -> int:
        return self.p

    def with_convention(self, convention: MeasureConvention) -> "LocalFieldModel":
        return LocalFieldModel(self.p, self.depth, convention)

    def with_depth(self, depth: int) -> "LocalFieldModel":
        return LocalFieldModel(self.p, depth, self.convention)

    def integers_measure(self) -> Fraction:
        """Additive measure of o."""
        if self.convention is MeasureConvention.UNIT_ADDITIVE:
            return Fraction(1)
        return Fraction(self.q, self.q - 1)


@dataclass(frozen=True)
class PadicApprox:
    """``p**ord * unit`` with ``unit`` a residue coprime to p modulo ``p**depth``."""

    p: int
    is_zero: bool = False
    ord: int = 0
    unit: int = 1
    depth: int = 1

    def __post_init__(self):
        if self.is_zero:
            return
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        modulus = self.p ** self.depth
        u = self.unit % modulus if modulus > 1 else 0
        if self.depth > 0 and u % self.p == 0:
            raise ValueError(f"unit {self.unit} is divisible by {self.p}")
        object.__setattr__(self, "unit", u)

    @classmethod
    def zero(cls, p: int) -> "PadicApprox":
        return cls(p, is_zero=True, ord=0, unit=0, depth=0)

    @classmethod
    def from_fraction(cls, x, p: int, depth: int) -> "PadicApprox":
        """Expand a rational number as ``p**ord * unit`` with the unit mod ``p**depth``."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(p)
        num, den = x.numerator, x.denominator
        n = 0
        while num % p == 0:
            num //= p
            n += 1
        while den % p == 0:
            den //= p
            n -= 1
        modulus = p ** depth
        unit = (num * pow(den, -1, modulus)) % modulus if depth > 0 else 0
        return cls(p, False, n, unit, depth)

    def __mul__(self, other: "PadicApprox") -> "PadicApprox":
        if self.p != other.p:
            raise ValueError("mixed primes")
        if self.is_zero or other.is_zero:
            return PadicApprox.zero(self.p)
        depth = min(self.depth, other.depth)
        return PadicApprox(self.p, False, self.ord + other.ord,
                           (self.unit * other.unit) % self.p ** depth, depth)

    def residue(self, k: int) -> int:
        """The unit reduced modulo ``p**k``; refuses to invent digits beyond ``depth``."""
        if k > self.depth:
            raise DepthExceeded(f"need the unit mod {self.p}^{k}, known only mod {self.p}^{self.depth}")
        return self.unit % self.p ** k

    def to_fraction(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.ord


def shell_measure(field: LocalFieldModel, n: int, mode: MeasureMode | str = MeasureMode.ADDITIVE) -> Fraction:
    """Haar measure of ``{x : ord(x) = n}`` in the requested mode."""
    mode = MeasureMode(mode)
    if mode is MeasureMode.MULTIPLICATIVE:
        return Fraction(1)
    q = Fraction(field.q)
    if field.convention is MeasureConvention.UNIT_ADDITIVE:
        return q ** (-n) * (1 - 1 / q)
    return q ** (-n)


def shell_measure_tail(field: LocalFieldModel, start: int) -> Fraction:
    """Exact additive measure of ``{x : ord(x) >= start}`` (a geometric tail)."""
    q = Fraction(field.q)
    return shell_measure(field, start) / (1 - 1 / q)


def unit_residues(p: int, depth: int) -> np.ndarray:
    """All residues mod ``p**depth`` coprime to p, in increasing order."""
    r = np.arange(p ** depth, dtype=np.int64)
    return r[r % p != 0] if depth > 0 else np.zeros(1, dtype=np.int64)


def enumerate_shell(field: LocalFieldModel, n: int, depth: int | None = None) -> list[PadicApprox]:
    """Representatives ``p**n * u`` for u running over the units mod ``p**depth``.

    Each representative carries weight ``shell_measure(n) / phi(p**depth)``.
    """
    depth = field.depth if depth is None else depth
    if depth > field.depth:
        raise DepthExceeded(f"requested depth {depth} exceeds working depth {field.depth}")
    return [PadicApprox(field.p, False, n, int(u), depth) for u in unit_residues(field.p, depth)]


def shell_weight(field: LocalFieldModel, n: int, mode: MeasureMode | str = MeasureMode.ADDITIVE,
                 depth: int | None = None) -> Fraction:
    depth = field.depth if depth is None else depth
    return shell_measure(field, n, mode) / euler_phi_prime_power(field.p, depth)


def norm(x: PadicApprox, field: LocalFieldModel | None = None) -> Fraction:
    """``|x| = q**-ord(x)`` as an exact rational."""
    if x.is_zero:
        raise ValueError("norm of zero is not a positive rational")
    return Fraction(x.p) ** (-x.ord)
