"""Additive character, multiplicative characters of p-power conductor, Gauss sums.

Multiplicative characters are stored as exponent vectors on explicit generators
of (Z/p^N)^x, so every value is ``exp(2*pi*i * k / phi(p^N))`` for an integer k.
Triviality and conductor questions are answered on those integers, never on
floating-point values.
"""
from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np

from .padic import (LocalFieldModel, MeasureMode, PadicApprox, euler_phi_prime_power,
                    shell_measure, unit_residues)

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# additive character
# ---------------------------------------------------------------------------

def frac_p(x: PadicApprox) -> Fraction:
    """p-adic fractional part in [0, 1)."""
    if x.is_zero or x.ord >= 0:
        return Fraction(0)
    k = -x.ord
    return Fraction(x.residue(k), x.p ** k)


@dataclass(frozen=True)
class StandardAdditiveCharacter:
    """``psi(x) = exp(2 pi i frac_p(x))``: trivial on o, nontrivial on p^-1 o."""

    field: LocalFieldModel

    def __call__(self, x: PadicApprox) -> complex:
        return psi_eval(self, x)


def psi_eval(psi: StandardAdditiveCharacter, x: PadicApprox) -> complex:
    if x.p != psi.field.p:
        raise ValueError("element and character live over different primes")
    f = frac_p(x)
    if f == 0:
        return 1 + 0j
    return cmath.exp(2j * cmath.pi * f.numerator / f.denominator)


def psi_bar_on_shell(p: int, ell: int, units: np.ndarray) -> np.ndarray:
    """Vector of ``conj(psi(p**ell * u))`` for the given unit residues."""
    if ell >= 0:
        return np.ones(units.shape, dtype=complex)
    m = p ** (-ell)
    return np.exp(-1j * TWO_PI * (units % m) / m)


class ShellIntegral(NamedTuple):
    exact: Fraction
    brute: complex


def shell_psi_exact(q: int, ell: int) -> Fraction:
    """Average of ``conj(psi(p**ell u))`` over units: 1, -1/(q-1) or 0."""
    if ell >= 0:
        return Fraction(1)
    if ell == -1:
        return Fraction(-1, q - 1)
    return Fraction(0)


def shell_psi_brute(p: int, ell: int) -> complex:
    """Direct average over the units mod ``p**max(1, -ell)``."""
    units = unit_residues(p, max(1, -ell))
    return complex(np.mean(psi_bar_on_shell(p, ell, units)))


def shell_psi_integral(field: LocalFieldModel, ell: int) -> ShellIntegral:
    """Multiplicative integral of ``conj(psi(p**ell u))`` over the unit shell."""
    return ShellIntegral(shell_psi_exact(field.q, ell), shell_psi_brute(field.p, ell))


# ---------------------------------------------------------------------------
# multiplicative characters
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Smallest g generating (Z/p^k)^x for every k (p odd)."""
    if p == 2:
        raise ValueError("(Z/2^k)^x is not cyclic for k >= 3")
    order = p - 1
    factors = [f for f in range(2, order + 1) if order % f == 0 and all(f % d for d in range(2, f))]
    for g in range(2, p * p):
        if g % p == 0:
            continue
        if all(pow(g, order // f, p) != 1 for f in factors) and pow(g, p - 1, p * p) != 1:
            return g
    raise RuntimeError("no primitive root found")  # pragma: no cover


@lru_cache(maxsize=None)
def _generator_logs(p: int, level: int) -> tuple[int, tuple[int, ...], tuple[np.ndarray, ...]]:
    """Coordinates of every residue on the chosen generators.

    Returns ``(den, orders, coords)`` where ``den = phi(p**level)``, ``orders`` are
    the generator orders and ``coords[i][r]`` is the i-th discrete log of r (or -1
    when r is not a unit).
    """
    modulus = p ** level
    den = euler_phi_prime_power(p, level)
    if level == 0 or (p == 2 and level == 1):
        return den, (), ()
    if p != 2:
        g = primitive_root(p)
        logs = np.full(modulus, -1, dtype=np.int64)
        x = 1
        for j in range(den):
            logs[x] = j
            x = (x * g) % modulus
        return den, (den,), (logs,)
    if level == 2:
        signs = np.full(modulus, -1, dtype=np.int64)
        signs[1], signs[3] = 0, 1
        return den, (2,), (signs,)
    order5 = 2 ** (level - 2)
    signs = np.full(modulus, -1, dtype=np.int64)
    logs = np.full(modulus, -1, dtype=np.int64)
    x = 1
    for j in range(order5):
        signs[x], logs[x] = 0, j
        signs[modulus - x], logs[modulus - x] = 1, j
        x = (x * 5) % modulus
    return den, (2, order5), (signs, logs)


@dataclass(frozen=True)
class MultCharacter:
    """A character of (Z/p^level)^x, extended to Q_p^x by ``chi(p) = z``."""

    p: int
    level: int
    exponents: tuple[int, ...]
    z: complex = 1 + 0j

    def __post_init__(self):
        _, orders, _ = _generator_logs(self.p, self.level)
        if len(self.exponents) != len(orders):
            raise ValueError(f"expected {len(orders)} exponents, got {len(self.exponents)}")
        object.__setattr__(self, "exponents", tuple(int(e) % o for e, o in zip(self.exponents, orders)))
        if abs(abs(complex(self.z)) - 1.0) > 1e-12:
            raise ValueError("the unramified twist z must have modulus 1")
        object.__setattr__(self, "z", complex(self.z))

    @property
    def modulus(self) -> int:
        return self.p ** self.level

    @property
    def denominator(self) -> int:
        return euler_phi_prime_power(self.p, self.level)

    @cached_property
    def phases(self) -> np.ndarray:
        """Integer numerators k with chi(r) = exp(2 pi i k / denominator); -1 off the units."""
        den, orders, coords = _generator_logs(self.p, self.level)
        out = np.zeros(self.modulus, dtype=np.int64)
        for e, o, c in zip(self.exponents, orders, coords):
            out = out + e * (den // o) * c
        out %= den
        units_mask = np.arange(self.modulus) % self.p != 0 if self.level > 0 else np.ones(1, bool)
        out[~units_mask] = -1
        return out

    @cached_property
    def table(self) -> np.ndarray:
        """chi(r) for every residue r mod p^level (0 on non-units)."""
        ph = self.phases
        vals = np.exp(1j * TWO_PI * np.where(ph >= 0, ph, 0) / self.denominator)
        vals[ph < 0] = 0
        return vals

    def phase(self, u: int) -> Fraction:
        k = int(self.phases[u % self.modulus])
        if k < 0:
            raise ValueError(f"{u} is not a unit mod {self.p}")
        return Fraction(k, self.denominator)

    def on_units(self, units: np.ndarray) -> np.ndarray:
        return self.table[units % self.modulus]

    def __call__(self, x: PadicApprox) -> complex:
        if x.is_zero:
            raise ValueError("characters are not defined at 0")
        return self.z ** x.ord * complex(self.table[x.residue(self.level) % self.modulus])

    def conj(self) -> "MultCharacter":
        return MultCharacter(self.p, self.level, tuple(-e for e in self.exponents), self.z.conjugate())

    def with_twist(self, z: complex) -> "MultCharacter":
        return MultCharacter(self.p, self.level, self.exponents, z)

    def value_at_minus_one(self) -> complex:
        return complex(self.table[self.modulus - 1]) if self.level > 0 else 1 + 0j

    def is_trivial_on_units(self) -> bool:
        return bool(np.all(self.phases[self.phases >= 0] == 0))


def conductor(chi: MultCharacter) -> int:
    """Smallest c with chi trivial on ``1 + p^c o``."""
    ph = chi.phases
    residues = np.arange(chi.modulus)
    for c in range(0, chi.level + 1):
        mask = (residues % chi.p ** c == 1 % chi.p ** c) & (ph >= 0)
        if np.all(ph[mask] == 0):
            return c
    return chi.level  # pragma: no cover - c = level always qualifies


def enumerate_characters(field: LocalFieldModel, N: int, primitive_only: bool = False,
                         z: complex = 1 + 0j) -> list[MultCharacter]:
    """Every character mod ``p**N`` in lexicographic exponent order."""
    if N < 0:
        raise ValueError("N must be non-negative")
    if primitive_only and N < 1:
        raise ValueError("primitive enumeration needs N >= 1")
    _, orders, _ = _generator_logs(field.p, N)
    chars = [MultCharacter(field.p, N, exps, z) for exps in itertools.product(*(range(o) for o in orders))]
    if primitive_only:
        chars = [c for c in chars if conductor(c) == N]
    return chars


# ---------------------------------------------------------------------------
# Gauss sums and the shell-wise vanishing integral
# ---------------------------------------------------------------------------

def _require_primitive(chi: MultCharacter) -> None:
    if chi.level < 1 or conductor(chi) != chi.level:
        raise ValueError(f"character must be primitive of conductor {chi.level} >= 1, "
                         f"got conductor {conductor(chi)}")


def gauss_sum(field: LocalFieldModel, chi: MultCharacter, psi: StandardAdditiveCharacter | None = None,
              measure: MeasureMode | str = MeasureMode.MULTIPLICATIVE) -> complex:
    """``int_{o^x} chi(u) conj(psi(u / p^N)) du``.

    With the default multiplicative measure the units have mass 1 and the
    integral is the plain average over units mod p^N.  ``measure='additive'``
    rescales by the additive mass of the units in the field's convention.
    """
    _require_primitive(chi)
    if psi is not None and psi.field.p != field.p:
        raise ValueError("additive character over a different prime")
    units = unit_residues(field.p, chi.level)
    avg = complex(np.mean(chi.on_units(units) * psi_bar_on_shell(field.p, -chi.level, units)))
    return avg * float(shell_measure(field, 0, measure))


def gauss_sum_modulus_squared(q: int, N: int) -> Fraction:
    return Fraction(q) ** (2 - N) / (q - 1) ** 2


def twisted_shell_average(chi: MultCharacter, j: int, xi: np.ndarray, depth: int,
                          conjugate: bool = False) -> np.ndarray:
    """For each unit ``xi`` mod p^depth, average ``conj(psi(p^j xi eta)) chi(eta)`` over eta.

    With ``conjugate=True`` the average of ``psi(p^j xi eta) conj(chi(eta))`` is
    returned instead.  ``depth`` must resolve both chi and the additive phase.
    """
    if depth < max(chi.level, -j, 1):
        raise ValueError("depth too small for this shell")
    eta = unit_residues(chi.p, depth)
    chi_eta = chi.on_units(eta)
    if j >= 0:
        avg = np.mean(chi_eta.conj() if conjugate else chi_eta)
        return np.full(xi.shape, avg, dtype=complex)
    m = chi.p ** (-j)
    prod = (xi[:, None] * eta[None, :]) % m
    phase = np.exp((1j if conjugate else -1j) * TWO_PI * prod / m)
    weights = chi_eta.conj() if conjugate else chi_eta
    return phase @ weights / len(eta)


def shellwise_vanishing(field: LocalFieldModel, chi: MultCharacter, x_ord: int, y_ord: int,
                        x_unit: int = 1) -> complex:
    """Brute-force ``int_{o^x} conj(psi(x y eta)) chi(y eta) d eta`` with y = p^y_ord.

    Nonzero only when ``x_ord + y_ord = -N``, where it has modulus
    ``q**(1 - N/2) / (q - 1)``.
    """
    j = x_ord + y_ord
    depth = max(chi.level, -j, 1)
    val = twisted_shell_average(chi, j, np.array([x_unit % field.p ** depth], dtype=np.int64), depth)[0]
    return complex(chi.z ** y_ord * val)
