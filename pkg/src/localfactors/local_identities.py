"""Local evaluations at the ramified place: closed forms and shell-sum oracles.

Every quantity here comes in (at least) two flavours: the closed rational
expression in ``q**-w'`` and friends, and an oracle that sums the defining
integral shell by shell.  Brute-force oracles take a :class:`LocalFieldModel`
so the additive Haar normalisation is explicit; multiplicative integrals always
give each shell mass 1.

For the cuspidal and continuous local factors several closed expressions are
available.  ``three_term`` (cuspidal) and ``s_plus`` / ``s_minus`` (continuous)
are the reference rational functions exactly as stated, the latter two differing
in the sign of ``s`` in one numerator.  ``support_corrected`` is the rational
function obtained when the inner ``y`` sum is restricted to the support of the
integrand (``ord(y) >= 0`` for the Whittaker function, ``ord(y), ord(t) >= 0``
for the Eisenstein Mellin pair).  The oracles decide which one is right.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .characters import (MultCharacter, conductor, shell_psi_brute, shell_psi_exact,
                         twisted_shell_average)
from .errors import BudgetExceeded, DivergentRegion, PoleAtSample
from .padic import LocalFieldModel, MeasureConvention, shell_measure, shell_measure_tail, unit_residues
from .records import ParamPoint, VerificationRecord, make_record
from .whittaker import (SatakeParams, guard_factor, local_L, tail_linear, tail_quadratic,
                        truncation_for, whittaker_values)

SERIES_REL_TOL = 1e-9
SHELL_REL_TOL = 1e-6
BRUTE_SHELL_LIMIT = 4096  # enumerate psi-shell averages while p^-ell stays this small


def default_truncation(N: int, w_prime: complex) -> int:
    re = complex(w_prime).real
    if re <= 1:
        raise DivergentRegion(f"Re(w') = {re} <= 1")
    return max(12, N + math.ceil(30 / (re - 1)))


def _qpow(q: int, e: complex) -> complex:
    return complex(q) ** complex(e)


# ---------------------------------------------------------------------------
# the non-decoupled kernel
# ---------------------------------------------------------------------------

def _kernel_fraction(sp: SatakeParams, q: int, w_prime: complex) -> complex:
    a, b = sp.alpha, sp.beta
    x = _qpow(q, -w_prime)
    a2, b2 = abs(a) ** 2, abs(b) ** 2
    den = (guard_factor(1 - a2 * x, "1 - |alpha|^2 X") * guard_factor(1 - b2 * x, "1 - |beta|^2 X")
           * guard_factor(1 - a.conjugate() * b * x, "1 - conj(alpha) beta X")
           * guard_factor(1 - a * b.conjugate() * x, "1 - alpha conj(beta) X"))
    return (1 - a2 * b2 * x * x) / den


def k_v1_closed(sp: SatakeParams, q: int, N: int, w_prime: complex) -> complex:
    """``q^{1-Nw'}/(q-1)`` times the four-factor rational function of ``X = q^{-w'}``."""
    return _qpow(q, 1 - N * complex(w_prime)) / (q - 1) * _kernel_fraction(sp, q, w_prime)


def c_prime_constant(sp: SatakeParams, q: int, w_prime: complex) -> complex:
    """The N-independent constant with ``k_v1_closed(N) = C' q^{-Nw'}``."""
    return q / (q - 1) * _kernel_fraction(sp, q, w_prime)


def k_v1_series(sp: SatakeParams, q: int, N: int, w_prime: complex, L: int | None = None) -> tuple[complex, float]:
    """``q/(q-1) q^{-Nw'} sum_{l<=L} q^{-lw'} |W(l)|^2`` and a bound on the rest."""
    x = _qpow(q, -w_prime)
    r = sp.spectral_radius ** 2 * abs(x)
    if r >= 1:
        raise DivergentRegion(f"|q^-w'| max(|alpha|,|beta|)^2 = {r} >= 1")
    if L is None:
        L = truncation_for(r, 1e-18, tail_quadratic)
    pref = q / (q - 1) * _qpow(q, -N * complex(w_prime))
    total = 0j
    xl = 1 + 0j
    for w in whittaker_values(sp, L):
        total += xl * (w * w.conjugate())
        xl *= x
    return pref * total, abs(pref) * tail_quadratic(r, L + 1)


@dataclass
class _ShellCache:
    chi: MultCharacter
    evaluations: int = 0

    def __post_init__(self):
        self._store: dict[tuple[int, int, bool], np.ndarray] = {}

    def average(self, j: int, depth: int, conjugate: bool) -> np.ndarray:
        key = (j, depth, conjugate)
        if key not in self._store:
            xi = unit_residues(self.chi.p, depth)
            self.evaluations += len(xi) ** 2
            self._store[key] = twisted_shell_average(self.chi, j, xi, depth, conjugate)
        return self._store[key]


def k_v1_bruteforce(field: LocalFieldModel, sp: SatakeParams, chi: MultCharacter, point: ParamPoint,
                    budget: int = 20_000_000, L: int | None = None, band: int = 2,
                    rel_tol: float = SHELL_REL_TOL) -> VerificationRecord:
    """Shell-by-shell evaluation of the triple integral defining the kernel.

    x runs over additive shells ``ord(x) = k``, y and y' over multiplicative
    shells.  For each x-shell the unit parts of x, y and y' are enumerated
    modulo ``p**depth`` for every y, y' shell within ``band`` of the diagonal
    ``ord(y) = -k - N``; shells farther away are skipped because their inner
    Gauss integral is identically zero (that vanishing is checked separately).
    """
    N = chi.level
    if N < 1 or conductor(chi) != N:
        raise ValueError("the kernel oracle needs a primitive character of conductor N >= 1")
    if chi.p != field.p:
        raise ValueError("character and field over different primes")
    q = field.q
    s, w = point.s, point.w_prime
    if w.real <= 1:
        raise DivergentRegion(f"Re(w') = {w.real} <= 1")
    r = sp.spectral_radius ** 2 * q ** (-w.real)
    if r >= 1:
        raise DivergentRegion(f"diagonal ratio {r} >= 1")
    if L is None:
        L = default_truncation(N, w)
    depth_max = N + band
    cost_per_shell = (2 * band + 1) * 2 * (q ** depth_max) ** 2
    if cost_per_shell * (L + 2 * band) > budget:
        raise BudgetExceeded(f"about {cost_per_shell * (L + 2 * band)} unit pairs exceed budget {budget}")

    W = whittaker_values(sp, L + 2 * band + 1)
    cache = _ShellCache(chi)
    z, zb = chi.z, chi.z.conjugate()
    total = 0j
    skipped = 0
    for k in range(-N - L, band + 1):
        diag = -N - k
        ns = [n for n in range(diag - band, diag + band + 1) if 0 <= n < len(W)]
        skipped += max(0, diag - band)  # shells 0 <= n < diag - band vanish identically
        if not ns:
            continue
        depth = max(N, -(k + ns[0]), 1)
        iy = sum(z ** n * _qpow(q, -n * s) * W[n] * cache.average(k + n, depth, False) for n in ns)
        iyp = sum(zb ** n * _qpow(q, -n * (1 - s)) * W[n].conjugate() * cache.average(k + n, depth, True)
                  for n in ns)
        phi = 1.0 if k >= 0 else _qpow(q, k * w)
        total += float(shell_measure(field, k)) * phi * complex(np.mean(iy * iyp))
    # x-shells with k > band only meet y-shells with ord(xy) >= 0 > -N: identically zero.
    conv_scale = float(field.integers_measure())  # UNIT_SHELL inflates every additive shell by q/(q-1)
    tail = conv_scale * q / (q - 1) * q ** (-N * w.real) * tail_quadratic(r, L + 1)
    closed = k_v1_closed(sp, q, N, w)
    params = {
        "p": q, "N": N, "chi": list(chi.exponents), "z": chi.z, "s": s, "w_prime": w,
        "alpha": sp.alpha, "beta": sp.beta, "L": L, "band": band, "skipped_shells": skipped,
        "unit_pair_evaluations": cache.evaluations,
    }
    return make_record("k_v1.bruteforce", params, closed, total, tail_bound=tail, rel_tol=rel_tol,
                       convention=field.convention.value)


# ---------------------------------------------------------------------------
# unipotent integral of the test function
# ---------------------------------------------------------------------------

def phi_profile(w_prime: complex, k: int, q: int) -> complex:
    """The test function on the shell ``ord(x) = k``: 1 on o, ``|x|^{-w'}`` off it."""
    return 1.0 if k >= 0 else _qpow(q, k * complex(w_prime))


def unipotent_closed(q: int, w_prime: complex) -> complex:
    den = guard_factor(1 - _qpow(q, 1 - complex(w_prime)), "1 - q^{1-w'}")
    return (1 - _qpow(q, -complex(w_prime))) / den


def unipotent_series(field: LocalFieldModel, w_prime: complex, L: int | None = None) -> tuple[complex, float]:
    """``meas(o) + sum_{m=1}^{L} meas(ord = -m) q^{-mw'}`` with the geometric tail bound."""
    w = complex(w_prime)
    q = field.q
    g = q ** (1 - w.real)
    if g >= 1:
        raise DivergentRegion(f"Re(w') = {w.real} <= 1")
    per_shell = float(shell_measure(field, 0))  # meas(ord=-m) = per_shell * q^m
    if L is None:
        L = 1
        while per_shell * g ** (L + 1) / (1 - g) > 1e-18:
            L += 1
    total = complex(float(field.integers_measure()))
    for m in range(1, L + 1):
        total += float(shell_measure(field, -m)) * _qpow(q, -m * w)
    return total, per_shell * g ** (L + 1) / (1 - g)


def unipotent_series_exact(field: LocalFieldModel, w_prime: int, L: int = 20) -> Fraction:
    """Exact truncated shell sum plus its exact geometric tail (integer w' only)."""
    if int(w_prime) != w_prime or w_prime <= 1:
        raise ValueError("exact series needs an integer w' > 1")
    q = Fraction(field.q)
    w = int(w_prime)
    total = field.integers_measure()
    for m in range(1, L + 1):
        total += shell_measure(field, -m) * q ** (-m * w)
    per_shell = shell_measure(field, 0)
    g = q ** (1 - w)
    return total + per_shell * g ** (L + 1) / (1 - g)


def unipotent_integral(field: LocalFieldModel, w_prime: complex, mode: str = "closed") -> complex:
    if mode == "closed":
        return unipotent_closed(field.q, w_prime)
    if mode == "series":
        return unipotent_series(field, w_prime)[0]
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# psi-shell averages used by the oracles
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def shell_average(p: int, ell: int) -> complex:
    """Average of ``conj(psi(p^ell u))`` over units: enumerated when affordable."""
    if ell >= 0 or p ** (-ell) <= BRUTE_SHELL_LIMIT:
        return shell_psi_brute(p, ell)
    return complex(shell_psi_exact(p, ell))


def _support_corrected(a: complex, b: complex, q: int, w_prime: complex) -> complex:
    """``sum_k meas(k) phi(k) sum_{n,r>=0} c(k+n+r)``-type double series summed exactly.

    ``a`` and ``b`` are the two geometric ratios of the y- and t-shells (for the
    cuspidal factor they are ``alpha q^{-s'}`` and ``beta q^{-s'}``: the Whittaker
    function is a convolution of two geometric sequences).
    """
    g = _qpow(q, 1 - complex(w_prime))
    P = guard_factor(1 - a, "1 - a") * guard_factor(1 - b, "1 - b")
    Pg = guard_factor(1 - g * a, "1 - g a") * guard_factor(1 - g * b, "1 - g b")
    return 1 / P + (q - 1) / q * g * ((a + b) - (1 + g) * a * b) / (P * Pg) - (g / q) / Pg


# ---------------------------------------------------------------------------
# cuspidal local factor
# ---------------------------------------------------------------------------

CUSPIDAL_VARIANTS = ("three_term", "support_corrected")


def cuspidal_closed(sp: SatakeParams, q: int, s_prime: complex, w_prime: complex,
                    variant: str = "three_term") -> complex:
    sp_, w = complex(s_prime), complex(w_prime)
    if variant == "support_corrected":
        x = _qpow(q, -sp_)
        return _support_corrected(sp.alpha * x, sp.beta * x, q, w)
    if variant != "three_term":
        raise ValueError(f"unknown variant {variant!r}")
    if sp.alpha == 0 or sp.beta == 0:
        raise PoleAtSample("alpha beta = 0")
    l1 = local_L(sp, q, sp_)
    l3 = local_L(sp, q, sp_ + w - 1)
    u = _qpow(q, 1 - w + sp_)
    num = (q - 1) * (_qpow(q, -w) - _qpow(q, 1 - 2 * w + 2 * sp_) / (sp.alpha * sp.beta))
    den = guard_factor(1 - u / sp.alpha, "1 - u/alpha") * guard_factor(1 - u / sp.beta, "1 - u/beta")
    return l1 + num / den * l1 - _qpow(q, -w) * l3


def _cuspidal_inner(sp: SatakeParams, q: int, s_prime: complex, k: int, W: list[complex], n_rel: int,
                    rho: float) -> tuple[complex, float]:
    """``sum_n q^{-ns'} W(n) c(k+n)`` over the y-shells allowed for x-shell k, with tail."""
    n0 = max(0, -k - 1)  # c(ell) = 0 for ell <= -2
    top = n0 + n_rel
    x = _qpow(q, -complex(s_prime))
    val = sum(x ** n * W[n] * shell_average(q, k + n) for n in range(n0, top + 1))
    return val, tail_linear(rho, top + 1)


def cuspidal_bruteforce(field: LocalFieldModel, sp: SatakeParams, s_prime: complex, w_prime: complex,
                        L: int | None = None) -> tuple[complex, float]:
    """Shell sum of ``int_k int_{k^x} conj(psi(xy)) |y|^{s'} W(y) phi(x) dy dx``."""
    q = field.q
    s_, w = complex(s_prime), complex(w_prime)
    rho = sp.spectral_radius * q ** (-s_.real)
    g = q ** (1 - w.real)
    if rho >= 1 or g >= 1 or g * rho >= 1:
        raise DivergentRegion(f"outside the convergence region (rho={rho}, g={g})")
    if L is None:
        L = default_truncation(0, w)
    n_rel = truncation_for(rho, 1e-18)
    W = whittaker_values(sp, L + n_rel + 2)
    total = 0j
    tail = 0.0
    for k in range(-L, L + 1):
        inner, t = _cuspidal_inner(sp, q, s_, k, W, n_rel, rho)
        weight = float(shell_measure(field, k)) * phi_profile(w, k, q)
        total += weight * inner
        tail += abs(weight) * t
    # shells ord(x) > L see c = 1 throughout, exactly like shell L: add their exact mass.
    inner_o, t_o = _cuspidal_inner(sp, q, s_, L + 1, W, n_rel, rho)
    mass = float(shell_measure_tail(field, L + 1))
    total += mass * inner_o
    tail += mass * t_o
    # shells ord(x) < -L: |meas * phi| = c q^{m(1 - Re w')}, inner bounded by the linear tail from m-1.
    c_meas = float(shell_measure(field, 0))
    tail += c_meas * tail_linear(rho, L) * g ** (L + 1) / (1 - g)
    return total, tail


def cuspidal_over_integers(field: LocalFieldModel, sp: SatakeParams, s_prime: complex) -> tuple[complex, float]:
    """The x in o part of the cuspidal integral, as a shell sum."""
    q = field.q
    rho = sp.spectral_radius * q ** (-complex(s_prime).real)
    if rho >= 1:
        raise DivergentRegion(f"rho = {rho} >= 1")
    n_rel = truncation_for(rho, 1e-18)
    W = whittaker_values(sp, n_rel + 2)
    inner, t = _cuspidal_inner(sp, q, s_prime, 0, W, n_rel, rho)
    mass = float(field.integers_measure())
    return mass * inner, mass * t


def cuspidal_local_factor_v1(sp: SatakeParams, q: int, s_prime: complex, w_prime: complex,
                             mode: str = "closed", field: LocalFieldModel | None = None,
                             L: int | None = None) -> complex:
    """``mode`` is ``closed`` (the three-term formula), ``support_corrected`` or ``bruteforce``."""
    if mode == "closed":
        return cuspidal_closed(sp, q, s_prime, w_prime, "three_term")
    if mode == "support_corrected":
        return cuspidal_closed(sp, q, s_prime, w_prime, "support_corrected")
    if mode == "bruteforce":
        field = field or LocalFieldModel(q)
        return cuspidal_bruteforce(field, sp, s_prime, w_prime, L)[0]
    raise ValueError(f"unknown mode {mode!r}")


def m1_term(sp: SatakeParams, q: int, w_prime: complex) -> complex:
    """The three-term cuspidal factor at ``s' = 0`` without its leading ``L(1/2)`` term."""
    w = complex(w_prime)
    if sp.alpha == 0 or sp.beta == 0:
        raise PoleAtSample("alpha beta = 0")
    u = _qpow(q, 1 - w)
    num = (q - 1) * (_qpow(q, -w) - _qpow(q, 1 - 2 * w) / (sp.alpha * sp.beta))
    den = guard_factor(1 - u / sp.alpha, "1 - q^{1-w'}/alpha") * guard_factor(1 - u / sp.beta, "1 - q^{1-w'}/beta")
    return num / den * local_L(sp, q, 0) - _qpow(q, -w) * local_L(sp, q, w - 1)


# ---------------------------------------------------------------------------
# continuous-part local factor (unramified twist z = chi(p))
# ---------------------------------------------------------------------------

CONTINUOUS_VARIANTS = ("s_plus", "s_minus", "support_corrected")


def _lz(q: int, z: complex, u: complex) -> complex:
    return 1 / guard_factor(1 - z * _qpow(q, -u), "1 - z q^-u")


def continuous_closed(q: int, z: complex, point: ParamPoint, variant: str = "s_plus") -> complex:
    """Closed forms of the continuous-part local integral.

    ``s_plus`` uses the numerator ``q^{-w'+s+s'}`` of the evaluation before
    the ``s -> 1-s`` substitution; ``s_minus`` uses ``q^{2-w'-s+s'}``, which is what
    the post-substitution numerator ``q^{1-w'+s+s'}`` maps back to.
    """
    z = complex(z)
    s, sp_, w = point.s, point.s_prime, point.w_prime
    if variant == "support_corrected":
        return _support_corrected(z * _qpow(q, -(s + sp_)), z.conjugate() * _qpow(q, -(sp_ + 1 - s)), q, w)
    zb = z.conjugate()
    bracket = continuous_bracket(q, point, variant)
    return _lz(q, z, s + sp_) * _lz(q, zb, sp_ + 1 - s) + _lz(q, zb, 1 - 2 * s) * bracket


def continuous_bracket(q: int, point: ParamPoint, variant: str = "s_plus") -> complex:
    """The bracket multiplying ``L(1 - 2s, conj chi)`` in the sign-variant closed forms."""
    s, sp_, w = point.s, point.s_prime, point.w_prime
    if variant == "s_plus":
        num = _qpow(q, -w + s + sp_)
    elif variant == "s_minus":
        num = _qpow(q, 2 - w - s + sp_)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return ((q - 1) * num / (guard_factor(1 - _qpow(q, 1 - w + s + sp_), "1 - q^{1-w'+s+s'}")
                             * guard_factor(1 - _qpow(q, -s - sp_), "1 - q^{-s-s'}"))
            - _qpow(q, -w) / guard_factor(1 - _qpow(q, 1 - w - s - sp_), "1 - q^{1-w'-s-s'}"))


def _convolved_powers(a: complex, b: complex, j_max: int) -> np.ndarray:
    """``h_j = sum_{n=0}^{j} a^n b^{j-n}`` by direct double summation."""
    pa = a ** np.arange(j_max + 1)
    pb = b ** np.arange(j_max + 1)
    return np.array([np.sum(pa[: j + 1] * pb[j::-1]) for j in range(j_max + 1)])


def continuous_inner_at_shell(field: LocalFieldModel, z: complex, point: ParamPoint, k: int,
                              j_rel: int | None = None) -> tuple[complex, float]:
    """The y, t double integral at a fixed x-shell ``ord(x) = k``.

    y and t run over the integers with weights ``chi(y)|y|^{s+s'}`` and
    ``conj(chi)(t)|t|^{s'+1-s}``; the unit parts of x, y and t merge into one
    unit so each (ord y, ord t) pair contributes ``c(k + ord y + ord t)``.
    """
    q = field.q
    z = complex(z)
    a = z * _qpow(q, -(point.s + point.s_prime))
    b = z.conjugate() * _qpow(q, -(point.s_prime + 1 - point.s))
    rho = max(abs(a), abs(b))
    if rho >= 1:
        raise DivergentRegion(f"rho = {rho} >= 1")
    if j_rel is None:
        j_rel = truncation_for(rho, 1e-18)
    j0 = max(0, -k - 1)
    h = _convolved_powers(a, b, j0 + j_rel)
    val = sum(h[j] * shell_average(q, k + j) for j in range(j0, j0 + j_rel + 1))
    return complex(val), tail_linear(rho, j0 + j_rel + 1)


def continuous_bruteforce(field: LocalFieldModel, z: complex, point: ParamPoint,
                          L: int | None = None) -> tuple[complex, float]:
    """Shell sum over x of ``phi(x)`` times :func:`continuous_inner_at_shell`."""
    q = field.q
    w = point.w_prime
    g = q ** (1 - w.real)
    rho = max(abs(complex(z) * _qpow(q, -(point.s + point.s_prime))),
              abs(complex(z).conjugate() * _qpow(q, -(point.s_prime + 1 - point.s))))
    if g >= 1 or rho >= 1 or g * rho >= 1:
        raise DivergentRegion(f"outside the convergence region (rho={rho}, g={g})")
    if L is None:
        L = default_truncation(0, w)
    total = 0j
    tail = 0.0
    for k in range(-L, L + 2):
        inner, t = continuous_inner_at_shell(field, z, point, k)
        if k == L + 1:  # every shell beyond L sees c = 1 throughout, like this one
            weight = float(shell_measure_tail(field, k))
        else:
            weight = float(shell_measure(field, k)) * phi_profile(w, k, q)
        total += weight * inner
        tail += abs(weight) * t
    tail += float(shell_measure(field, 0)) * tail_linear(rho, L) * g ** (L + 1) / (1 - g)
    return total, tail


def continuous_local_factor_v1(field: LocalFieldModel, z: complex, point: ParamPoint,
                               mode: str = "closed", variant: str = "s_plus") -> complex:
    if mode == "closed":
        return continuous_closed(field.q, z, point, variant)
    if mode == "bruteforce":
        return continuous_bruteforce(field, z, point)[0]
    raise ValueError(f"unknown mode {mode!r}")


def m2_bracket(q: int, s: complex, w_prime: complex) -> complex:
    """The continuous-part bracket after ``s -> 1 - s`` at ``s' = 0``."""
    s, w = complex(s), complex(w_prime)
    first = (q - 1) * _qpow(q, 1 - w - s) / (guard_factor(1 - _qpow(q, 2 - w - s), "1 - q^{2-w'-s}")
                                             * guard_factor(1 - _qpow(q, s - 1), "1 - q^{s-1}"))
    return first - _qpow(q, -w) / guard_factor(1 - _qpow(q, -w + s), "1 - q^{-w'+s}")


def convention_ratio(field: LocalFieldModel) -> Fraction:
    """Factor by which UNIT_SHELL shell sums exceed UNIT_ADDITIVE ones."""
    if field.convention is MeasureConvention.UNIT_ADDITIVE:
        return Fraction(1)
    return Fraction(field.q, field.q - 1)
