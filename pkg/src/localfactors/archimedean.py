"""Gamma-ratio kernels at archimedean places and the analytic conductor."""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .gamma import log_gamma_sum

ArgList = Callable[..., Sequence[complex]]


class PlaceKind(str, enum.Enum):
    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class GammaRatio:
    """``exp(log_prefactor(*x)) * prod Gamma(numerator(*x)) / prod Gamma(denominator(*x))``.

    The three callables receive the same positional parameters.  This is the
    engine behind the fixed ratios below, and it is how a caller supplies a
    ratio whose factor list is not pinned down (the real-place kernel).
    """

    numerator: ArgList
    denominator: ArgList
    log_prefactor: Callable[..., complex] = lambda *x: 0j

    def log(self, *x) -> complex:
        num = list(self.numerator(*x))
        den = list(self.denominator(*x))
        return complex(self.log_prefactor(*x)) + log_gamma_sum(num + den, [1] * len(num) + [-1] * len(den))

    def __call__(self, *x) -> complex:
        return cmath.exp(self.log(*x))


def _a_numerator(s_prime, w, mu1, mu2):
    base = complex(w) + complex(s_prime)
    i1, i2 = 1j * complex(mu1), 1j * complex(mu2).conjugate()
    return [base + i1 + i2, base - i1 + i2, base + i1 - i2, base - i1 - i2]


RATIO_A = GammaRatio(
    numerator=_a_numerator,
    denominator=lambda s_prime, w, mu1, mu2: [2 * complex(w) + 2 * complex(s_prime)],
    log_prefactor=lambda s_prime, w, mu1, mu2: (4 * complex(w) - 4 * complex(s_prime) - 4) * math.log(2),
)


def gamma_ratio_A(s_prime: complex, w: complex, mu1: complex, mu2: complex) -> complex:
    """``2^{4w-4s'-4}`` times four gammas at ``w + s' +- i mu1 +- i conj(mu2)`` over ``Gamma(2w+2s')``."""
    return RATIO_A(s_prime, w, mu1, mu2)


def _g_real(s, s_prime, w):
    return ([(s_prime + 1 - s) / 2, (s_prime + w - s) / 2, (s_prime + s) / 2, (s_prime + w + s - 1) / 2],
            [w / 2, s_prime + w / 2])


def _g_complex(s, s_prime, w):
    return ([s_prime + 1 - s, s_prime + w - s, s_prime + s, s_prime + w + s - 1], [w, 2 * s_prime + w])


def gamma_ratio_G(kind: PlaceKind | str, s: complex, s_prime: complex, w: complex) -> complex:
    kind = PlaceKind(kind)
    s, s_prime, w = complex(s), complex(s_prime), complex(w)
    if kind is PlaceKind.REAL:
        num, den = _g_real(s, s_prime, w)
        log_pref = -s_prime * math.log(math.pi)
    else:
        num, den = _g_complex(s, s_prime, w)
        log_pref = math.log(2) - 2 * s_prime * math.log(math.pi)
    return cmath.exp(log_pref + log_gamma_sum(num + den, [1] * len(num) + [-1] * len(den)))


@dataclass(frozen=True)
class ArchPlaceParams:
    kind: PlaceKind
    t: float = 0.0
    t_v: float = 0.0
    ell_v: int = 0
    mu1: complex = 0j
    mu2: complex = 0j
    w: complex = 1 + 0j

    def __post_init__(self):
        object.__setattr__(self, "kind", PlaceKind(self.kind))
        if self.kind is PlaceKind.REAL and self.ell_v != 0:
            raise ValueError("ell_v must vanish at a real place")


def place_conductor_factor(place: ArchPlaceParams, t: float | None = None) -> float:
    """``1 + |t + t_v|`` (real) or ``1 + ell_v^2 + 4 (t + t_v)^2`` (complex)."""
    u = (place.t if t is None else t) + place.t_v
    if place.kind is PlaceKind.REAL:
        return 1 + abs(u)
    return 1 + place.ell_v ** 2 + 4 * u * u


def analytic_conductor(places: Sequence[ArchPlaceParams], t: float | None = None) -> float:
    return math.prod(place_conductor_factor(pl, t) for pl in places)


def k_inf_leading(place: ArchPlaceParams, s_prime: complex, real_ratio: GammaRatio | None = None) -> complex:
    """Main term of the archimedean kernel (the ``1 + O(.)`` correction is not modelled).

    Complex places use the ratio A; real places need ``real_ratio`` from the caller.
    """
    factor = place_conductor_factor(place) ** (-complex(place.w))
    if place.kind is PlaceKind.COMPLEX:
        lead = cmath.exp((1 - 2 * complex(s_prime)) * math.log(math.pi))
        return lead * gamma_ratio_A(s_prime, place.w, place.mu1, place.mu2) * factor
    if real_ratio is None:
        raise ValueError("a real place needs a caller-supplied gamma ratio")
    return real_ratio(s_prime, place.w, place.mu1, place.mu2) * factor
