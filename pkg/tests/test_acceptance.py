"""One test per acceptance criterion, at the stated tolerances."""
import json
import math
import timeit

import numpy as np

from genhilbert.carleson import carleson_sup, fb_integral, moment_carleson_sup, zhao_K
from genhilbert.cli import main
from genhilbert.hardy import block, evaluate, hp_norm, majorant
from genhilbert.hardy import test_fb as fb_coeffs
from genhilbert.hardy import test_ga as ga_coeffs
from genhilbert.measure import (Atomic, LogPowerWeight, PowerWeight, complete_monotonicity_margin, lebesgue,
                                moments_up_to)
from genhilbert.operator import (HankelTruncation, agreement_check, hankel_apply_fast, hankel_apply_naive,
                                 operator_norm_estimate)
from genhilbert.schatten import membership_verdict, schatten_report

SEED = 20240611


def test_01_moment_engine(criterion):
    worst = 0.0
    for g in (-0.5, 0.0, 1.0, 2.0):
        quad = moments_up_to(PowerWeight(g), 512, method="quadrature").values
        exact = moments_up_to(PowerWeight(g), 512).values
        worst = max(worst, float(np.max(np.abs(quad / exact - 1))))
    leb = moments_up_to(lebesgue(), 512).values
    exact_rounding = bool(np.all(leb == 1.0 / np.arange(1, 514)))
    criterion(1, "quadrature moments vs Beta, Lebesgue 1/(n+1)", worst <= 1e-8 and exact_rounding,
              f"max rel err {worst:.2e}, lebesgue exact={exact_rounding}")


def test_02_complete_monotonicity(criterion):
    fams = [lebesgue(), PowerWeight(-0.5), PowerWeight(0.5), PowerWeight(1.0), PowerWeight(2.0, 3.0),
            Atomic((0.0, 0.3, 0.9, 0.99), (1.0, 0.5, 0.25, 2.0)), Atomic((0.5,), (1.0,))]
    worst = min(complete_monotonicity_margin(v, 8) / v[0]
                for v in (moments_up_to(mu, 256).values for mu in fams))
    criterion(2, "(-1)^k D^k mu_n >= -1e-12 mu_0, k<=8, M=256", worst >= -1e-12, f"min scaled margin {worst:.2e}")


def test_03_fast_matvec(criterion):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for N in (17, 64, 1000, 4096):
        T = HankelTruncation.from_measure(lebesgue(), N)
        a = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        fast, naive = hankel_apply_fast(T, a), hankel_apply_naive(T, a)
        worst = max(worst, float(np.linalg.norm(fast - naive) / np.linalg.norm(naive)))
    T = HankelTruncation.from_measure(lebesgue(), 4096)
    a = rng.standard_normal(4096)
    t_fast = min(timeit.repeat(lambda: hankel_apply_fast(T, a), number=3, repeat=5)) / 3
    t_naive = min(timeit.repeat(lambda: hankel_apply_naive(T, a), number=1, repeat=5))
    speedup = t_naive / t_fast
    criterion(3, "fast vs naive residual <= 1e-12, >= 10x faster at N=4096", worst <= 1e-12 and speedup >= 10,
              f"max residual {worst:.2e}, speedup {speedup:.0f}x")


def test_04_integral_agreement(criterion):
    rng = np.random.default_rng(SEED + 1)
    cases = {"atomic": (Atomic((0.0, 0.5, 0.8, 0.95), (0.5, 1.0, 0.25, 0.125)), 1e-12),
             "power(1)": (PowerWeight(1.0), 1e-8), "power(0)": (lebesgue(), 1e-8),
             "power(-0.5)": (PowerWeight(-0.5), 1e-8)}
    ok, parts = True, []
    for name, (mu, tol) in cases.items():
        err = max(agreement_check(mu, rng.standard_normal(65) + 1j * rng.standard_normal(65)) for _ in range(20))
        ok &= err <= tol
        parts.append(f"{name} {err:.1e}")
    criterion(4, "coefficient vs integral form on 16-point grid", ok, ", ".join(parts))


def test_05_carleson_concordance(criterion):
    mismatches = []
    for g in (0.0, 0.5, 1.0):
        mu = PowerWeight(g)
        seq = moments_up_to(mu, 4096)
        for s in (0.5, 1.0, 1.5, 2.0):
            expected = "finite" if g + 1 >= s else "divergent"
            got = (carleson_sup(mu, s).verdict, moment_carleson_sup(seq, s).verdict, zhao_K(mu, 0.0, s).verdict)
            if any(v != expected for v in got):
                mismatches.append((g, s, got))
    criterion(5, "tail / moment / Zhao verdicts, finite iff gamma+1 >= s", not mismatches,
              f"12 cells, mismatches {mismatches}")


def test_06_hilbert_envelope(criterion):
    vals = [operator_norm_estimate(HankelTruncation.from_measure(lebesgue(), N)) for N in (64, 256, 1024, 2048)]
    dense = float(np.linalg.svd(HankelTruncation.from_measure(lebesgue(), 64).dense(), compute_uv=False)[0])
    ok = all(b > a for a, b in zip(vals, vals[1:])) and max(vals) < math.pi and abs(vals[0] / dense - 1) <= 1e-8
    criterion(6, "Hilbert norms increase, stay below pi, N=64 matches SVD", ok,
              "norms " + ", ".join(f"{v:.6f}" for v in vals) + f", svd64 {dense:.10f}")


def test_07_schatten_concordance(criterion):
    cases = {"power(0)": (PowerWeight(0.0), "not_in_Sp"), "power(1)": (PowerWeight(1.0), "in_Sp"),
             "atomic(1/2)": (Atomic((0.5,), (1.0,)), "in_Sp")}
    bad = []
    for name, (mu, status) in cases.items():
        seq = moments_up_to(mu, 2046)
        for p in (1.5, 2.0, 3.0):
            v = membership_verdict(mu, p, momseq=seq).verdict
            if v != status:
                bad.append((name, p, v))
    leb = membership_verdict(lebesgue(), 2.0)
    slopes = (leb.spectral_track["slope_vs_logN"], leb.criterion_track["slope_vs_logN"])
    frob = max(abs(r.schatten_partial / r.frobenius_sq - 1)
               for r in (schatten_report(moments_up_to(mu, 1022), 2.0, 512)
                         for mu in (lebesgue(), PowerWeight(1.0), Atomic((0.5,), (1.0,)), LogPowerWeight(1.0, 2.0))))
    ok = not bad and all(abs(s - 1) <= 0.2 for s in slopes) and frob <= 1e-10
    criterion(7, "S_p verdicts, Lebesgue p=2 log slopes, Frobenius identity", ok,
              f"mismatches {bad}, slopes {slopes[0]:.4f}/{slopes[1]:.4f}, frobenius {frob:.1e}")


def test_08_dyadic_blocks(criterion):
    ok, parts = True, []
    for p in (1.5, 2.0, 3.0):
        r = [hp_norm(block(n), p) ** p / 2.0 ** (n * (p - 1)) for n in range(2, 10)]
        if p == 2.0:
            dev = max(abs(x - 1) for x in r)
            ok &= dev <= 1e-10
            parts.append(f"p=2 max |r-1| {dev:.1e}")
        else:
            band = max(r) / min(r)
            ok &= band <= 8
            parts.append(f"p={p} band {band:.3f}")
    criterion(8, "block norm ratios", ok, ", ".join(parts))


def test_09_majorant(criterion):
    rng = np.random.default_rng(SEED + 2)
    xs = np.linspace(-1, 1, 64)
    zz = (xs[:, None] + 1j * xs[None, :]).ravel()
    zz = zz[np.abs(zz) < 1]
    r = np.linspace(0, 1, 258)[1:-1]
    min_mod, worst_dom, worst_norm = math.inf, 0.0, 0.0
    for _ in range(100):
        d = int(rng.integers(0, 17))
        f = rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)
        F = majorant(f, 2.0)
        min_mod = min(min_mod, float(np.min(np.abs(F(zz)))))
        worst_dom = max(worst_dom, float(np.max(np.abs(evaluate(f, r)) / F(r).real)))
        worst_norm = max(worst_norm, abs(F.hp_norm(2.0) / hp_norm(f, 2.0) - 1))
    ok = min_mod > 0 and worst_dom <= 1 + 1e-9 and worst_norm <= 1e-8
    criterion(9, "majorant zero-free, dominates on radius, same H2 norm", ok,
              f"min |F| {min_mod:.2e}, max |f|/F {worst_dom:.12f}, norm err {worst_norm:.1e}")


def test_10_test_families(criterion):
    err = max(abs(hp_norm(fb_coeffs(b, p), p) - 1) for b in (0.0, 0.5, 0.9, 0.99) for p in (0.5, 1.0, 2.0))
    g = ga_coeffs(0.5, 60)
    k = np.arange(1, 61)
    exact = g[0] == math.log(2) and bool(np.all(g[1:].real == 0.5 ** k / k)) and not np.any(g.imag)
    criterion(10, "f_b unit H^p norm, g_a log-series coefficients", err <= 1e-6 and exact,
              f"max |norm-1| {err:.1e}, g_a exact={exact}")


def test_11_vanishing_integrals(criterion):
    bs = [0.9] + [1 - 2.0 ** -j for j in range(4, 13)]
    van = [fb_integral(LogPowerWeight(1.0, 2.0), b, 1.0) for b in bs]
    leb = [fb_integral(lebesgue(), b, 1.0) for b in bs]
    ok = all(y < x for x, y in zip(van, van[1:])) and van[-1] < 0.25 * van[0] and min(leb) > 0.5
    criterion(11, "int f_b dmu decays for vanishing measure, not for Lebesgue", ok,
              f"logpower {van[0]:.4f} -> {van[-1]:.4f} (ratio {van[-1] / van[0]:.3f}), lebesgue min {min(leb):.3f}")


def test_12_cli_verify(criterion, capsys):
    code1 = main(["verify"])
    first = capsys.readouterr().out
    code2 = main(["verify"])
    second = capsys.readouterr().out
    code3 = main(["verify", "--corrupt"])
    corrupt = json.loads(capsys.readouterr().out)
    failed = [c["name"] for c in corrupt["checks"] if not c["passed"]]
    ok = code1 == 0 and code2 == 0 and first == second and code3 != 0 and failed == ["integral_agreement"]
    criterion(12, "verify exit 0 clean, nonzero corrupted, byte-identical reports", ok,
              f"exit codes {code1}/{code3}, identical={first == second}, failed under corruption {failed}")
