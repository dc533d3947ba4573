"""Truncated Perron integrals for finite Dirichlet polynomials in ``(q^N)^{-w}``.

For ``Z(w) = sum_N a_N (q^N)^{-w}`` the truncated contour integral

    (1 / 2 pi i) int_{c - iS}^{c + iS} Z(w) x^w / w dw

is a sum of terms ``a_N J(lambda_N)`` with ``lambda_N = log(x / q^N)`` and

    J(lambda) = (e^{c lambda} / pi) int_0^S (c cos(tau lambda) + tau sin(tau lambda)) / (c^2 + tau^2) d tau,

using the symmetry ``tau -> -tau``.  The oscillatory integral is computed by an
adaptive composite Gauss-Legendre rule whose initial panels are half a period
of the fastest oscillation wide.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .errors import QuadratureNonconvergence

LOW_NODES, HIGH_NODES = 16, 24
PANEL_TOL = 1e-10  # absolute error allowed per unit height
MAX_PANELS = 400_000
JUMP_GUARD = 1e-12


@lru_cache(maxsize=None)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _panel_integrals(left: np.ndarray, right: np.ndarray, n: int, weights: np.ndarray,
                     lams: np.ndarray, c: float) -> np.ndarray:
    nodes, w = _gauss_legendre(n)
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    tau = mid[:, None] + half[:, None] * nodes[None, :]  # (panels, n)
    arg = tau[..., None] * lams  # (panels, n, K)
    f = (c * np.cos(arg) + tau[..., None] * np.sin(arg)) @ weights / (c * c + tau * tau)
    return half * (f @ w)


def vertical_integral(coeffs: Sequence[float], lams: Sequence[float], c: float, S: float,
                      tol: float = PANEL_TOL, max_panels: int = MAX_PANELS) -> tuple[float, float]:
    """``sum_k coeffs_k J(lams_k)`` truncated at height S, with an error estimate.

    Panels are refined by bisection until the 16- and 24-node rules agree to
    ``tol`` times the panel width, scaled by ``max(1, sum |weight_k|)`` so the
    control is relative for large amplitudes.  Accepted panel values are added in order of
    their left endpoint with ``math.fsum`` so the result is reproducible.
    """
    lams = np.asarray(lams, dtype=float)
    coeffs = np.asarray(coeffs, dtype=float)
    if lams.size == 0 or S <= 0:
        return 0.0, 0.0
    weights = coeffs * np.exp(c * lams) / math.pi
    scale = max(1.0, float(np.sum(np.abs(weights))))
    lam_max = float(np.max(np.abs(lams)))
    h = min(1.0, math.pi / lam_max) if lam_max > 0 else 1.0
    n0 = max(1, math.ceil(S / h))
    if n0 > max_panels:
        raise QuadratureNonconvergence(f"{n0} initial panels exceed the cap of {max_panels}")
    edges = np.linspace(0.0, S, n0 + 1)
    left, right = edges[:-1], edges[1:]
    accepted_left: list[np.ndarray] = []
    accepted_val: list[np.ndarray] = []
    err_total = 0.0
    total_panels = n0
    while left.size:
        lo = _panel_integrals(left, right, LOW_NODES, weights, lams, c)
        hi = _panel_integrals(left, right, HIGH_NODES, weights, lams, c)
        err = np.abs(hi - lo)
        ok = err <= tol * scale * (right - left)
        accepted_left.append(left[ok])
        accepted_val.append(hi[ok])
        err_total += float(np.sum(err[ok]))
        bad_l, bad_r = left[~ok], right[~ok]
        if bad_l.size == 0:
            break
        total_panels += bad_l.size
        if total_panels > max_panels:
            raise QuadratureNonconvergence(f"more than {max_panels} panels needed")
        mid = 0.5 * (bad_l + bad_r)
        left = np.concatenate([bad_l, mid])
        right = np.concatenate([mid, bad_r])
    lefts = np.concatenate(accepted_left)
    vals = np.concatenate(accepted_val)
    order = np.argsort(lefts, kind="stable")
    return math.fsum(vals[order].tolist()), err_total


def perron_error_bound(x: float, beta_prime: float, S: float) -> float:
    """``2 x^{beta'} min(1, 1 / (S |log x|))``."""
    lx = abs(math.log(x))
    return 2 * x ** beta_prime * (min(1.0, 1 / (S * lx)) if lx > 0 else 1.0)


def perron_indicator(x: float, beta_prime: float, S: float) -> float:
    """Truncated ``(1/2 pi i) int x^w / w dw`` on ``Re w = beta'``; approximates ``[x > 1]``.

    The exact integral is real (the integrand at ``-tau`` is the conjugate of
    that at ``tau``), so the real value is returned.
    """
    if x <= 0 or x == 1:
        raise ValueError("x must be positive and different from 1")
    if beta_prime <= 1:
        raise ValueError("beta' must exceed 1")
    return vertical_integral([1.0], [math.log(x)], beta_prime, S)[0]


@dataclass(frozen=True)
class ToyDirichletSeries:
    """``Z(w) = sum_N a_N (q^N)^{-w}`` with finitely many nonnegative coefficients."""

    q: int
    coefficients: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be at least 2")
        coeffs = {}
        for n, a in sorted(self.coefficients.items()):
            if int(n) != n or n < 1:
                raise ValueError(f"exponents must be positive integers, got {n}")
            if a < 0:
                raise ValueError("coefficients must be nonnegative")
            if a != 0:
                coeffs[int(n)] = float(a)
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def random(cls, q: int, n_terms: int, rng: np.random.Generator) -> "ToyDirichletSeries":
        return cls(q, {n: float(rng.uniform(0.1, 1.0)) for n in range(1, n_terms + 1)})

    def __call__(self, w: complex) -> complex:
        return sum(a * complex(self.q ** n) ** (-complex(w)) for n, a in self.coefficients.items())

    def scaled(self, c: float) -> "ToyDirichletSeries":
        return ToyDirichletSeries(self.q, {n: c * a for n, a in self.coefficients.items()})

    def partial_sum(self, x: float) -> float:
        return math.fsum(a for n, a in self.coefficients.items() if self.q ** n <= x)

    def jump_points(self) -> list[int]:
        return [self.q ** n for n in self.coefficients]

    def _terms(self, x: float) -> tuple[list[float], list[float]]:
        for n in self.coefficients:
            if abs(x / self.q ** n - 1) < JUMP_GUARD:
                raise ValueError(f"x = {x} sits on the jump point {self.q}^{n}")
        lx = math.log(x)
        return list(self.coefficients.values()), [lx - n * math.log(self.q) for n in self.coefficients]


def perron_partial_sum(Z: ToyDirichletSeries, x: float, beta_prime: float, S: float) -> float:
    """Truncated Perron integral of ``Z(w) x^w / w`` on ``Re w = beta'``."""
    if beta_prime <= 1:
        raise ValueError("beta' must exceed 1")
    amps, lams = Z._terms(x)
    return vertical_integral(amps, lams, beta_prime, S)[0]


def perron_partial_sum_bound(Z: ToyDirichletSeries, x: float, beta_prime: float, S: float) -> float:
    """``sum_N a_N (x/q^N)^{beta'} min(1, 1/(S |log(x/q^N)|))``."""
    amps, lams = Z._terms(x)
    return math.fsum(a * math.exp(beta_prime * l) * min(1.0, 1 / (S * abs(l))) for a, l in zip(amps, lams))


def window_set_count(x: float, S: float, q: int) -> int:
    """Number of integers ``N >= 0`` with ``x e^{-1/sqrt S} <= q^N <= x e^{1/sqrt S}``."""
    if x <= 0 or S <= 0 or q < 2:
        raise ValueError("need x > 0, S > 0 and q >= 2")
    delta = 1 / math.sqrt(S)
    lo, hi = x * math.exp(-delta), x * math.exp(delta)
    lq = math.log(q)
    first = max(0, math.floor((math.log(x) - delta) / lq) - 1)
    last = math.ceil((math.log(x) + delta) / lq) + 1
    return sum(1 for n in range(first, max(first, last) + 1) if lo <= q ** n <= hi)


def window_count_bound(S: float, q: int) -> int:
    return math.floor(2 / (math.sqrt(S) * math.log(q))) + 1


def e_of_x(Z: ToyDirichletSeries, x: float, delta0: float, S: float, check_tol: float | None = None) -> float:
    """Truncated contour integral of ``Z(w) x^w / w`` on ``Re w = delta0``.

    A finite Z has no pole at ``w = 1``, so this is the whole partial sum up to
    truncation error.  With ``check_tol`` the value is recomputed at ``2S`` and
    :class:`QuadratureNonconvergence` is raised if the two disagree by more.
    """
    if not 11 / 18 < delta0 < 1:
        raise ValueError("delta0 must lie in (11/18, 1)")
    if not Z.coefficients:
        return 0.0
    amps, lams = Z._terms(x)
    value = vertical_integral(amps, lams, delta0, S)[0]
    if check_tol is not None:
        doubled = vertical_integral(amps, lams, delta0, 2 * S)[0]
        if abs(doubled - value) > check_tol:
            raise QuadratureNonconvergence(f"S -> 2S changed E(x) by {abs(doubled - value):.3g}")
    return value


@dataclass(frozen=True)
class MeanSquareFit:
    slope: float | None
    residual: float | None
    x_grid: tuple[float, ...]
    integrals: tuple[float, ...]

    @property
    def degenerate(self) -> bool:
        return self.slope is None


def mean_square_bound_demo(Z: ToyDirichletSeries, delta0: float, x_grid: Sequence[float], S: float = 100.0,
                           points: int = 1200) -> MeanSquareFit:
    """Fit the log-log slope of ``int_0^x |E(t)|^2 dt`` over ``x_grid``.

    ``E`` is sampled at ``points`` equally spaced abscissae up to the largest x
    (nudged off jump points) and integrated by the trapezoid rule.
    """
    xs = sorted(float(x) for x in x_grid)
    if not xs:
        raise ValueError("empty x grid")
    if not Z.coefficients:
        return MeanSquareFit(None, None, tuple(xs), tuple(0.0 for _ in xs))
    t = np.linspace(0.0, xs[-1], points + 1)[1:]
    jumps = np.array(Z.jump_points(), dtype=float)
    for i, ti in enumerate(t):
        if np.any(np.abs(ti / jumps - 1) < 1e-6):
            t[i] = ti * (1 + 2e-6)
    e2 = np.array([e_of_x(Z, float(ti), delta0, S) ** 2 for ti in t])
    tt = np.concatenate([[0.0], t])
    ee = np.concatenate([[0.0], e2])
    cumulative = np.concatenate([[0.0], np.cumsum(0.5 * (ee[1:] + ee[:-1]) * np.diff(tt))])
    integrals = np.interp(xs, tt, cumulative)
    if np.any(integrals <= 0):
        return MeanSquareFit(None, None, tuple(xs), tuple(float(v) for v in integrals))
    lx, ly = np.log(xs), np.log(integrals)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = float(np.sqrt(np.mean((ly - (slope * lx + intercept)) ** 2)))
    return MeanSquareFit(float(slope), resid, tuple(xs), tuple(float(v) for v in integrals))
