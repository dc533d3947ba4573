"""The fourteen acceptance criteria, each at its stated tolerance.

Every test appends one ``PASS``/``FAIL`` line to the acceptance log, which the
terminal summary prints at the end of the run.  Running this file directly
prints the same lines without pytest.
"""
import cmath
import math
import time
import warnings
from fractions import Fraction

import numpy as np
import pytest

from localfactors import bounds
from localfactors.archimedean import gamma_ratio_A, gamma_ratio_G
from localfactors.characters import (enumerate_characters, gauss_sum, gauss_sum_modulus_squared,
                                     shell_psi_integral, shellwise_vanishing)
from localfactors.cli import main
from localfactors.errors import NonAdmissibleWarning
from localfactors.gamma import gamma, log_gamma
from localfactors.local_identities import (c_prime_constant, continuous_bruteforce, continuous_closed,
                                           continuous_inner_at_shell, cuspidal_bruteforce, cuspidal_closed,
                                           k_v1_bruteforce, k_v1_closed, k_v1_series, unipotent_closed,
                                           unipotent_series, unipotent_series_exact)
from localfactors.padic import LocalFieldModel
from localfactors.perron import (ToyDirichletSeries, mean_square_bound_demo, perron_error_bound, perron_indicator,
                                 perron_partial_sum, perron_partial_sum_bound, window_count_bound, window_set_count)
from localfactors.records import ParamPoint
from localfactors.whittaker import SatakeParams, local_L, mellin_whittaker

from conftest import ACCEPTANCE_LINES


def record(n: int, ok: bool, detail: str, status: str | None = None) -> None:
    line = f"{status or ('PASS' if ok else 'FAIL')} criterion {n}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def tempered(rng) -> SatakeParams:
    return SatakeParams.from_angle(float(rng.uniform(0.05, math.pi - 0.05)))


def test_criterion_01_psi_shell_integrals():
    t0 = time.perf_counter()
    worst = 0.0
    for p in (2, 3, 5, 7):
        for ell in range(-4, 3):
            si = shell_psi_integral(LocalFieldModel(p), ell)
            worst = max(worst, abs(si.brute - complex(si.exact)))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and dt < 1
    record(1, ok, f"max abs err {worst:.2e} over 28 shells, {dt:.3f}s")
    assert ok


def test_criterion_02_gauss_sums():
    t0 = time.perf_counter()
    worst_mod, worst_conj, count = 0.0, 0.0, 0
    for p in (2, 3, 5):
        field = LocalFieldModel(p)
        for N in (1, 2, 3):
            expected = float(gauss_sum_modulus_squared(p, N))
            for chi in enumerate_characters(field, N, primitive_only=True):
                g = gauss_sum(field, chi)
                worst_mod = max(worst_mod, abs(abs(g) ** 2 - expected) / expected)
                worst_conj = max(worst_conj, abs(abs(gauss_sum(field, chi.conj())) - abs(g)))
                count += 1
    dt = time.perf_counter() - t0
    ok = worst_mod <= 1e-10 and worst_conj <= 1e-12 and dt < 5
    record(2, ok, f"{count} primitive characters, modulus rel err {worst_mod:.2e}, "
                  f"conjugate gap {worst_conj:.2e}, {dt:.3f}s")
    assert ok


def test_criterion_03_shellwise_vanishing():
    worst, checked = 0.0, 0
    for p in (2, 3, 5):
        field = LocalFieldModel(p)
        for N in (1, 2, 3):
            for chi in enumerate_characters(field, N, primitive_only=True):
                for total in range(-N - 3, 3):
                    if total == -N:
                        continue
                    for x_unit in (1, 3 if p == 2 else p - 1):
                        worst = max(worst, abs(shellwise_vanishing(field, chi, total, 0, x_unit)))
                        checked += 1
    ok = worst <= 1e-10
    record(3, ok, f"{checked} off-diagonal shells, max |integral| {worst:.2e}")
    assert ok


def test_criterion_04_kernel():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    # (a) series against closed form
    worst_a, worst_tail = 0.0, 0.0
    for _ in range(20):
        q = int(rng.choice([2, 3, 5]))
        w = complex(rng.uniform(1.5, 6), rng.uniform(-20, 20))
        sp, N = tempered(rng), int(rng.integers(0, 4))
        val, tail = k_v1_series(sp, q, N, w)
        closed = k_v1_closed(sp, q, N, w)
        worst_a = max(worst_a, abs(val - closed) / abs(closed))
        worst_tail = max(worst_tail, tail)
    ok_a = worst_a <= 1e-9 and worst_tail < 1e-12
    # (b) conductor scaling
    worst_b = 0.0
    for _ in range(20):
        q = int(rng.choice([2, 3, 5]))
        w = complex(rng.uniform(1.5, 6), rng.uniform(-20, 20))
        sp = tempered(rng)
        for N in range(4):
            ratio = k_v1_closed(sp, q, N + 1, w) / k_v1_closed(sp, q, N, w)
            worst_b = max(worst_b, abs(ratio - complex(q) ** -w))
    ok_b = worst_b <= 1e-12
    # (c) brute-force triple integral: ratio constant per (p, N) over s, w' and characters
    sp = tempered(rng)
    s_vals = [complex(0.5, t) for t in rng.uniform(-15, 15, size=5)]
    w_vals = [complex(rng.uniform(1.5, 4), rng.uniform(-5, 5)) for _ in range(3)]
    spreads, empty = {}, []
    for p, N in ((2, 1), (2, 2), (3, 1), (3, 2)):
        field = LocalFieldModel(p)
        chars = enumerate_characters(field, N, primitive_only=True, z=cmath.exp(0.9j))
        if not chars:
            empty.append((p, N))
            continue
        ratios = [k_v1_bruteforce(field, sp, chi, ParamPoint(s=s, w_prime=w)).ratio
                  for chi in chars for w in w_vals for s in s_vals]
        spreads[(p, N)] = max(abs(r - ratios[0]) / abs(ratios[0]) for r in ratios)
    ok_c = bool(spreads) and max(spreads.values()) <= 1e-6
    # (d) worked value, closed form and exact rational series
    worked = SatakeParams(1j, -1j, tempered=True)
    # |W(l)|^2 = 1, 0, 1, 0, ... and X = q^{-w'} = 1/4, so the series is geometric in X^2
    X = Fraction(1, 4)
    exact = Fraction(2) * X * sum(X ** l for l in (0, 2)) / (1 - X ** 4)
    series, _ = k_v1_series(worked, 2, 1, 2, 80)
    ok_d = (exact == Fraction(8, 15) and abs(k_v1_closed(worked, 2, 1, 2) - 8 / 15) <= 1e-9
            and abs(series - 8 / 15) <= 1e-9)
    dt = time.perf_counter() - t0
    ok = ok_a and ok_b and ok_c and ok_d and dt < 60
    spread_txt = ", ".join(f"p={p} N={N}: {v:.1e}" for (p, N), v in spreads.items())
    record(4, ok, f"(a) rel {worst_a:.1e} tail {worst_tail:.1e}; (b) {worst_b:.1e}; (c) spread {spread_txt}"
                  f"{'; no primitive characters for ' + str(empty) if empty else ''}; (d) 8/15 ok={ok_d}; {dt:.2f}s")
    assert ok


def test_criterion_05_mellin_whittaker():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(50):
        q = int(rng.choice([2, 3, 5, 7]))
        sp = tempered(rng)
        s = complex(rng.uniform(0.3, 3.0), rng.uniform(-10, 10))
        val, tail = mellin_whittaker(sp, q, s)
        ref = local_L(sp, q, s)
        worst = max(worst, (abs(val - ref) - tail) / abs(ref))
    ok = worst <= 1e-10
    record(5, ok, f"50 samples, max rel err {worst:.2e}")
    assert ok


def test_criterion_06_unipotent():
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(30):
        q = int(rng.choice([2, 3, 5, 7]))
        w = complex(rng.uniform(1.3, 6), rng.uniform(-20, 20))
        val, tail = unipotent_series(LocalFieldModel(q), w)
        worst = max(worst, abs(val - unipotent_closed(q, w)) - tail)
    exact = unipotent_series_exact(LocalFieldModel(2), 2)
    ok = worst <= 1e-12 and exact == Fraction(3, 2)
    record(6, ok, f"max abs err {max(worst, 0):.2e}; q=2, w'=2 gives {exact}")
    assert ok


def _cusp_grid():
    rng = np.random.default_rng(7)
    for p in (2, 3):
        for s_re in (1.2, 1.6, 2.0):
            for gap in (1.2, 2.0):
                yield (p, tempered(rng), complex(s_re, rng.uniform(-3, 3)),
                       complex(s_re + gap, rng.uniform(-3, 3)))


def test_criterion_07_cuspidal_factor():
    worst_disp, worst_corr, worst_lim = 0.0, 0.0, 0.0
    for p, sp, s_prime, w in _cusp_grid():
        oracle, tail = cuspidal_bruteforce(LocalFieldModel(p), sp, s_prime, w)
        disp = cuspidal_closed(sp, p, s_prime, w)
        corr = cuspidal_closed(sp, p, s_prime, w, "support_corrected")
        worst_disp = max(worst_disp, (abs(oracle - disp) - tail) / abs(disp))
        worst_corr = max(worst_corr, (abs(oracle - corr) - tail) / abs(corr))
        worst_lim = max(worst_lim, abs(cuspidal_closed(sp, p, s_prime, 90) - local_L(sp, p, s_prime)))
    ok = worst_disp <= 1e-6 and worst_lim <= 1e-8
    record(7, ok, f"three-term closed form rel err {worst_disp:.3g} (limit {worst_lim:.1e}); "
                  f"support-restricted form rel err {worst_corr:.1e}")
    assert ok


def test_criterion_08_continuous_factor():
    rng = np.random.default_rng(8)
    points = [(3, 1 + 0j, ParamPoint(0.5 + 0.3j, 1.5, 3.5))]
    for p in (2, 3):
        for _ in range(3):
            s_prime = complex(rng.uniform(1.2, 2.0), rng.uniform(-2, 2))
            points.append((p, cmath.exp(1j * rng.uniform(0, 2 * math.pi)),
                           ParamPoint(complex(0.5, rng.uniform(-5, 5)), s_prime,
                                      complex(s_prime.real + rng.uniform(1.2, 2.5), rng.uniform(-3, 3)))))
    matched, worst_sign, worst_corr, worst_sub = [], 0.0, 0.0, 0.0
    for p, z, pt in points:
        field = LocalFieldModel(p)
        oracle, tail = continuous_bruteforce(field, z, pt)
        errs = {v: (abs(oracle - continuous_closed(p, z, pt, v)) - tail) / abs(continuous_closed(p, z, pt, v))
                for v in ("s_plus", "s_minus")}
        best = min(errs, key=errs.get)
        matched.append(best if errs[best] <= 1e-6 else "none")
        worst_sign = max(worst_sign, errs[best])
        corr = continuous_closed(p, z, pt, "support_corrected")
        worst_corr = max(worst_corr, (abs(oracle - corr) - tail) / abs(corr))
        inner, t = continuous_inner_at_shell(field, z, pt, 0)
        zb = complex(z).conjugate()
        expected = 1 / ((1 - z * complex(p) ** -(pt.s + pt.s_prime)) * (1 - zb * complex(p) ** -(pt.s_prime + 1 - pt.s)))
        worst_sub = max(worst_sub, abs(inner - expected) - t)
    ok = worst_sign <= 1e-6 and worst_sub <= 1e-8 and "none" not in matched
    record(8, ok, f"matching sign variant per point {matched}, best rel err {worst_sign:.3g}; "
                  f"unit sub-case {max(worst_sub, 0):.1e}; support-restricted form rel err {worst_corr:.1e}")
    assert ok


def test_criterion_09_c_prime():
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(20):
        q = int(rng.choice([2, 3, 5]))
        sp = tempered(rng)
        w = complex(rng.uniform(1.2, 5), rng.uniform(-10, 10))
        c = c_prime_constant(sp, q, w)
        for N in range(5):
            worst = max(worst, abs(k_v1_closed(sp, q, N, w) - c * complex(q) ** (-N * w)))
    ok = worst <= 1e-12
    record(9, ok, f"max residual {worst:.1e} for N in 0..4")
    assert ok


def test_criterion_10_gamma():
    rng = np.random.default_rng(10)
    half = abs(gamma(0.5) - math.sqrt(math.pi)) / math.sqrt(math.pi)
    rec = dup = 0.0
    sym_exact = True
    for _ in range(100):
        z = complex(rng.uniform(0.1, 30), rng.uniform(-50, 50))
        rec = max(rec, abs(cmath.exp(log_gamma(z + 1) - log_gamma(z)) / z - 1))
        z2 = complex(rng.uniform(0.1, 15), rng.uniform(-25, 25))
        lhs = log_gamma(z2) + log_gamma(z2 + 0.5)
        rhs = (1 - 2 * z2) * math.log(2) + 0.5 * math.log(math.pi) + log_gamma(2 * z2)
        dup = max(dup, abs(cmath.exp(lhs - rhs) - 1))
        sp, w = complex(rng.uniform(0, 1)), complex(rng.uniform(1, 3), rng.uniform(-2, 2))
        m1, m2 = complex(rng.uniform(-3, 3)), complex(rng.uniform(-3, 3))
        a = gamma_ratio_A(sp, w, m1, m2)
        sym_exact &= a == gamma_ratio_A(sp, w, -m1, m2) == gamma_ratio_A(sp, w, m1, -m2)
    a_worked = abs(gamma_ratio_A(0, 2, 0, 0) - 8 / 3) / (8 / 3)
    g_worked = abs(gamma_ratio_G("complex", 0.5, 0, 2) - math.pi ** 2 / 2) / (math.pi ** 2 / 2)
    ok = max(half, rec, dup, a_worked, g_worked) <= 1e-10 and sym_exact
    record(10, ok, f"Gamma(1/2) {half:.1e}, recurrence {rec:.1e}, duplication {dup:.1e}, "
                   f"A symmetry exact={sym_exact}, A(0,2,0,0) {a_worked:.1e}, G complex {g_worked:.1e}")
    assert ok


def test_criterion_11_perron():
    t0 = time.perf_counter()
    ind_ok = all(abs(perron_indicator(x, b, S) - (x > 1)) <= perron_error_bound(x, b, S)
                 for x in (0.5, 2.0, 5.0) for b in (1.1, 1.5, 2.0) for S in (10.0, 100.0, 1000.0))
    rng = np.random.default_rng(11)
    worst_frac = 0.0
    for _ in range(20):
        q = int(rng.choice([2, 3, 5]))
        Z = ToyDirichletSeries.random(q, 10, rng)
        x = float(q ** rng.uniform(3.1, 8.9))
        b = float(rng.uniform(1.05, 2.0))
        err = abs(perron_partial_sum(Z, x, b, 1e4) - Z.partial_sum(x))
        worst_frac = max(worst_frac, err / perron_partial_sum_bound(Z, x, b, 1e4))
    win_ok = True
    for _ in range(500):
        q = int(rng.choice([2, 3, 5, 7]))
        x, S = float(q ** rng.uniform(0, 14)), float(10 ** rng.uniform(-2, 7))
        win_ok &= window_set_count(x, S, q) <= window_count_bound(S, q)
    dt = time.perf_counter() - t0
    ok = ind_ok and worst_frac <= 1 and win_ok and dt < 30
    record(11, ok, f"indicator grid ok={ind_ok}; partial sums use {worst_frac:.2f} of bound; "
                   f"window counts ok={win_ok}; {dt:.2f}s")
    assert ok


def test_criterion_12_exponents():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonAdmissibleWarning)
        boundary = bounds.theta(Fraction(11, 18))
    grid = [Fraction(11, 18) + Fraction(7, 18) * Fraction(k, 51) for k in range(1, 51)]
    thetas = [bounds.theta(d) for d in grid]
    increasing = all(a < b for a, b in zip(thetas, thetas[1:]))
    gaps = all(bounds.subconvex_exponent(d, d0) < bounds.convexity_exponent(d)
               and bounds.convexity_exponent(d) - bounds.subconvex_exponent(d, d0) == (1 - bounds.theta(d0)) / 2
               for d in (1, 2, 3, 5) for d0 in grid)
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(50):
        x, d0 = float(10 ** rng.uniform(0, 12)), grid[int(rng.integers(0, 50))]
        H = bounds.optimal_H(x, d0)
        worst = max(worst, abs(x ** float(2 * d0 + 1) / H / H ** 2 - 1))
    ok = boundary == Fraction(20, 27) and increasing and gaps and worst <= 1e-12
    record(12, ok, f"theta(11/18) = {boundary}, increasing={increasing}, gap identity={gaps}, "
                   f"balance rel err {worst:.1e}")
    assert ok


def test_criterion_13_mean_square_demo():
    delta0, q = 0.7, 2
    fit = mean_square_bound_demo(ToyDirichletSeries(q, {1: 1.0}), delta0, [q ** k for k in range(2, 9)])
    limit = 2 * delta0 + 1 + 0.3
    ok = fit.slope is not None and fit.slope <= limit
    detail = f"slope {fit.slope:.3f} (limit {limit:.1f}), fit residual {fit.residual:.3f}"
    record(13, ok, detail, status=None if ok else "WARN")
    if not ok:
        warnings.warn(f"mean-square demonstration above its limit: {detail}")


def test_criterion_14_determinism(tmp_path):
    t0 = time.perf_counter()
    paths = [tmp_path / "first.json", tmp_path / "second.json"]
    for p in paths:
        main(["verify", "--seed", "42", "--json", "--output", str(p)])
    dt = (time.perf_counter() - t0) / 2
    same = paths[0].read_bytes() == paths[1].read_bytes()
    ok = same and dt < 180
    record(14, ok, f"byte-identical={same}, {dt:.1f}s per full run")
    assert ok


if __name__ == "__main__":  # pragma: no cover
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
