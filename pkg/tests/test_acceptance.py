"""Acceptance criteria, one test per criterion, each printing a status line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
summary.  Tolerances are pinned here and nowhere else.
"""

import json
import math
import os
import subprocess
import sys

import pytest

from qfb.qcore import QContext, GridFunction
from qfb.qbessel import bessel_j_prime
from qfb import zeros, qpoly, series, expansions, highprec


SRC = os.path.join(os.path.dirname(__file__), os.pardir, "src")

CTX_NU1 = QContext(0.5, 1.0)
CTX_NU2 = QContext(0.5, 2.0)


def _report(num, name, ok, detail):
    print(f"ACCEPTANCE {num:2d} {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num} ({name}): {detail}"


def test_criterion_01_orthogonality():
    etas = {n: series.eta_norm(CTX_NU1, n) for n in range(1, 11)}
    worst_off = 0.0
    worst_diag = 0.0
    for n in range(1, 11):
        diag = series.gram_integral(CTX_NU1, n, n)
        worst_diag = max(worst_diag, abs(diag - etas[n]) / etas[n])
        for m in range(n + 1, 11):
            g = series.gram_integral(CTX_NU1, n, m)
            worst_off = max(worst_off, abs(g) / (1e-10 * math.sqrt(etas[n] * etas[m])))
    ok = worst_off < 1.0 and worst_diag < 1e-9
    _report(1, "orthogonality", ok,
            f"off-diag worst {worst_off:.2e} of allowance, diag rel {worst_diag:.2e}")


def test_criterion_02_zero_certification():
    table = zeros.zero_table(CTX_NU1, 15)
    certified = all(z.certified and 0.0 < z.eps_k < z.alpha_k for z in table)
    ratios = [table[k].eps_k / table[k - 1].eps_k for k in range(5, 15)]
    decay = all(r < 1.5 * CTX_NU1.q**2 for r in ratios)
    ok = certified and decay
    _report(2, "zero certification", ok,
            f"k=1..15 certified={certified}, max eps ratio {max(ratios):.2e} "
            f"< {1.5 * CTX_NU1.q**2:.3f}")


def test_criterion_03_polynomial_triple_agreement():
    worst = 0.0
    worst_bound = 0.0
    for q in (0.3, 0.5, 0.8):
        for nu in (0.5, 1.0, 2.5):
            ctx = QContext(q, nu)
            for n in range(13):
                a = qpoly.poly_p_by_recurrence(ctx, n).coeffs
                b = qpoly.poly_p_explicit(ctx, n).coeffs
                c = qpoly.poly_p_by_convolution(ctx, n).coeffs
                for j in range(n + 1):
                    s = max(abs(a[j]), abs(b[j]), abs(c[j]))
                    worst = max(worst, abs(a[j] - b[j]) / s, abs(a[j] - c[j]) / s,
                                abs(b[j] - c[j]) / s)
                a0 = qpoly.a0_closed(ctx, n)
                top = (-1.0)**n * q**(n * (n + 1.0 - nu))
                worst_bound = max(worst_bound, abs(a[0] - a0) / abs(a0),
                                  abs(a[n] - top) / abs(top))
    ok = worst < 1e-12 and worst_bound < 1e-13
    _report(3, "polynomial triple agreement", ok,
            f"pairwise {worst:.2e} < 1e-12, boundary {worst_bound:.2e} < 1e-13")


def test_criterion_04_factorization():
    worst = 0.0
    for n in range(7):
        for k in range(1, 6):
            resid = qpoly.check_factorization(CTX_NU1, n, k)
            budget = qpoly.factorization_error_budget(CTX_NU1, n, k)
            worst = max(worst, resid / budget if budget > 0.0 else math.inf)
    ok = worst <= 1.0
    _report(4, "factorization", ok, f"worst residual/budget {worst:.3f}")


def test_criterion_05_finite_sum_suite():
    worst = 0.0
    rep = qpoly.check_finite_sum_identities(
        0.5, imax=12, jmax=12, nmax=12, mmax=12, n_gamma=5, seed=20240501)
    worst = max(rep.values())
    ok = worst < 1e-12
    _report(5, "finite-sum identity suite", ok, f"max rel residual {worst:.2e}")


def test_criterion_06_power_target_reproduction():
    agree = highprec.power_coefficient_agreement(0.5, 2.0, 10, dps=60)
    exp = expansions.power_nu_expansion(CTX_NU2)
    coeffs = exp.coefficient_list(30)
    sups = []
    for K in range(1, 31):
        sups.append(max(abs(CTX_NU2.q**(2 * n)
                            - series.partial_sum_at_node(CTX_NU2, coeffs[:K], n))
                        for n in range(21)))
    floor = 10.0 * 2.2e-16 * max(sups)
    monotone = all(b <= a * (1.0 + 1e-9) + floor for a, b in zip(sups, sups[1:]))
    ok = agree < 1e-9 and monotone and sups[-1] < 1e-8
    _report(6, "power-target reproduction", ok,
            f"coeff agreement {agree:.2e} < 1e-9 (k<=10), sup err at K=30 "
            f"{sups[-1]:.2e} < 1e-8, monotone={monotone}")


def test_criterion_07_product_ratio_target_reproduction():
    agree = highprec.g_coefficient_agreement(0.5, 2.0, 3.0, 8, dps=55)
    worst_red = 0.0
    for k in range(1, 11):
        a = expansions.power_nu_coefficient(CTX_NU2, k)
        b = expansions.g_nu_mu_coefficient(CTX_NU2, CTX_NU2.nu + 1.0, k)
        worst_red = max(worst_red, abs(a - b) / abs(a))
    ok = agree < 1e-8 and worst_red < 1e-10
    _report(7, "product-ratio target reproduction", ok,
            f"coeff agreement {agree:.2e} < 1e-8 (k<=8), mu=nu+1 reduction "
            f"{worst_red:.2e} < 1e-10")


def test_criterion_08_uniform_rate():
    exp = expansions.power_nu_expansion(CTX_NU2)
    f = exp.target_grid(with_pre=True)
    rep = series.convergence_report(CTX_NU2, f, k_max=20, n_grid=32,
                                    coeffs=exp.coefficient_list(20))
    limit = CTX_NU2.q**0.8
    ok = rep.term_rate <= limit
    _report(8, "uniform term-decay rate", ok,
            f"fitted geometric ratio {rep.term_rate:.3e} <= q^0.8 = {limit:.3f}")


def test_criterion_09_asymptotic_bounds():
    thm_ok = True
    worst_ratio = 0.0
    for k in range(3, 13):
        lhs, rhs = zeros.check_zero_value_bound(CTX_NU1, k)
        worst_ratio = max(worst_ratio, lhs / rhs)
        thm_ok = thm_ok and lhs <= rhs
    rep = zeros.check_derivative_asymptotics(CTX_NU1, 3, 12)
    floor_ok = rep.min_abs_s > 0.1 * rep.max_abs_s
    jac = max(zeros.jacobi_identity_residual(q) for q in (0.3, 0.5, 0.8))
    ok = thm_ok and floor_ok and jac < 1e-13
    _report(9, "asymptotic bounds", ok,
            f"value bound worst lhs/rhs {worst_ratio:.3f}, min|S|/max|S| "
            f"{rep.min_abs_s / rep.max_abs_s:.3f} > 0.1, jacobi {jac:.2e} < 1e-13")


def test_criterion_10_coefficient_integral_identity():
    f = expansions.power_nu_expansion(CTX_NU2).target_grid(with_pre=True)
    worst = 0.0
    for k in (1, 4):
        resid = series.check_coefficient_integral_identity(CTX_NU2, f, k)
        scale = abs(series.fourier_coefficient(CTX_NU2, f, k).value
                    * series.eta_norm(CTX_NU2, k))
        worst = max(worst, resid / scale)
    ok = worst < 1e-9
    _report(10, "coefficient-integral identity", ok,
            f"worst rel residual {worst:.2e} < 1e-9 (k in {{1, 4}})")


def test_criterion_11_round_trip():
    worst = highprec.roundtrip_agreement(0.5, 2.0, k_sum=40, k_check=20, dps=160)
    ok = worst < 1e-9
    _report(11, "round-trip re-extraction", ok,
            f"max rel deviation {worst:.2e} < 1e-9 (k<=20 from K=40)")


def test_criterion_12_verify_determinism(tmp_path):
    env = dict(os.environ)
    env["PYTHONPATH"] = SRC + os.pathsep + env.get("PYTHONPATH", "")
    env["QBF_CACHE_DIR"] = str(tmp_path)
    argv = [sys.executable, "-m", "qfb.cli", "verify", "--q", "0.5", "--nu", "1",
            "--seed", "12345"]
    first = subprocess.run(argv, capture_output=True, env=env, check=True)
    second = subprocess.run(argv, capture_output=True, env=env, check=True)
    ok = first.stdout == second.stdout and len(first.stdout) > 0
    payload = json.loads(first.stdout)
    ok = ok and payload["passed"]
    _report(12, "verify determinism", ok,
            f"two runs byte-identical={first.stdout == second.stdout}, "
            f"all families passed={payload['passed']}")
