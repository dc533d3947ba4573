"""Spherical Whittaker values, the two-factor Euler product, and its Mellin series."""
from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import DivergentRegion, PoleAtSample

DEGENERATE_GAP = 1e-12
POLE_GUARD = 1e-6


@dataclass(frozen=True)
class SatakeParams:
    alpha: complex
    beta: complex
    tempered: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        if self.tempered and (abs(abs(self.alpha) - 1) > 1e-12 or abs(abs(self.beta) - 1) > 1e-12):
            raise ValueError("tempered Satake parameters must have modulus 1")

    @classmethod
    def from_angle(cls, theta: float) -> "SatakeParams":
        """The tempered conjugate pair ``(e^{i theta}, e^{-i theta})``."""
        a = cmath.exp(1j * theta)
        return cls(a, a.conjugate(), tempered=True)

    @property
    def spectral_radius(self) -> float:
        return max(abs(self.alpha), abs(self.beta))

    def conj(self) -> "SatakeParams":
        return SatakeParams(self.alpha.conjugate(), self.beta.conjugate(), self.tempered)


def whittaker_value(sp: SatakeParams, n: int) -> complex:
    """``(a^{n+1} - b^{n+1}) / (a - b)`` for n >= 0, zero below the integers."""
    if n < 0:
        return 0j
    a, b = sp.alpha, sp.beta
    if abs(a - b) < DEGENERATE_GAP:
        return (n + 1) * a ** n
    return (a ** (n + 1) - b ** (n + 1)) / (a - b)


def whittaker_values(sp: SatakeParams, n_max: int) -> list[complex]:
    """W(0), ..., W(n_max) via the three-term Hecke recursion (stable for tempered input)."""
    out = [1 + 0j]
    if n_max >= 1:
        out.append(sp.alpha + sp.beta)
    e1, e2 = sp.alpha + sp.beta, sp.alpha * sp.beta
    for n in range(2, n_max + 1):
        out.append(e1 * out[-1] - e2 * out[-2])
    return out[: n_max + 1]


def guard_factor(f: complex, what: str) -> complex:
    if abs(f) < POLE_GUARD:
        raise PoleAtSample(f"{what} vanishes (|{f}| < {POLE_GUARD})")
    return f


def local_L(sp: SatakeParams, q: int, s: complex) -> complex:
    """``(1 - a q^{-s})^{-1} (1 - b q^{-s})^{-1}``."""
    x = q ** (-complex(s))
    return 1 / (guard_factor(1 - sp.alpha * x, "1 - alpha q^-s") * guard_factor(1 - sp.beta * x, "1 - beta q^-s"))


def tail_linear(r: float, m: int) -> float:
    """``sum_{n >= m} (n + 1) r^n`` in closed form."""
    if r >= 1:
        return float("inf")
    if r == 0:
        return 1.0 if m == 0 else 0.0
    return r ** m * ((m + 1) - m * r) / (1 - r) ** 2


def tail_quadratic(r: float, m: int) -> float:
    """``sum_{n >= m} (n + 1)^2 r^n`` in closed form."""
    if r >= 1:
        return float("inf")
    if r == 0:
        return 1.0 if m == 0 else 0.0
    return r ** m * ((1 + r) / (1 - r) ** 3 + 2 * m / (1 - r) ** 2 + m * m / (1 - r))


def truncation_for(r: float, target: float, tail=tail_linear, start: int = 0) -> int:
    """Smallest L such that the tail beyond L is below ``target``."""
    if r >= 1:
        raise DivergentRegion(f"ratio {r} >= 1")
    L = start
    while tail(r, L + 1) > target:
        L += 1
    return L


def mellin_whittaker(sp: SatakeParams, q: int, s: complex, L: int | None = None) -> tuple[complex, float]:
    """Truncated ``sum_{n=0}^{L} q^{-ns} W(n)`` and the bound on the omitted tail."""
    x = q ** (-complex(s))
    r = sp.spectral_radius * abs(x)
    if r >= 1:
        raise DivergentRegion(f"max(|alpha|,|beta|)|q^-s| = {r} >= 1")
    if L is None:
        L = truncation_for(r, 1e-17)
    total = 0j
    xn = 1 + 0j
    for w in whittaker_values(sp, L):
        total += xn * w
        xn *= x
    return total, tail_linear(r, L + 1)
