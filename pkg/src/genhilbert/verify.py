"""Self-check suite run by ``genhilbert verify``.

Every check returns measured values and a pass flag. Checks run on a
thread pool and the report is assembled in a fixed order, so the same
seed always yields the same report. ``corrupt=True`` perturbs one moment
(chosen from the seed) on the coefficient side of the agreement check.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .carleson import carleson_sup, fb_integral, moment_carleson_sup, zhao_K
from .hardy import block, evaluate, hp_norm, majorant, test_fb, test_ga
from .measure import (Atomic, LogPowerWeight, PowerWeight, complete_monotonicity_margin, lebesgue,
                      moments_up_to)
from .operator import (HankelTruncation, agreement_check, hankel_apply_fast, hankel_apply_naive,
                       operator_norm_estimate)
from .schatten import membership_verdict, schatten_report

DEFAULT_SEED = 20240611
CORRUPTION_FACTOR = 1.0 + 1e-3
CM_KMAX = 8
CM_TOL = 1e-12


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: dict


def _rel(x, ref):
    return float(np.max(np.abs(np.asarray(x) / np.asarray(ref) - 1.0)))


def check_moments(cfg):
    worst = {}
    for g in (-0.5, 0.0, 1.0, 2.0):
        quad = moments_up_to(PowerWeight(g), 512, method="quadrature").values
        exact = moments_up_to(PowerWeight(g), 512).values
        worst[str(g)] = _rel(quad, exact)
    leb = moments_up_to(lebesgue(), 512).values
    leb_err = float(np.max(np.abs(leb * np.arange(1, 514) - 1.0)))
    ok = max(worst.values()) <= 1e-8 and leb_err <= 4e-16
    return {"max_rel_error_by_gamma": worst, "lebesgue_max_rel_error": leb_err}, ok


def check_complete_monotonicity(cfg):
    fams = {
        "lebesgue": lebesgue(),
        "power(-0.5)": PowerWeight(-0.5),
        "power(1)": PowerWeight(1.0),
        "power(2)": PowerWeight(2.0, 3.0),
        "atomic": Atomic((0.0, 0.3, 0.9, 0.99), (1.0, 0.5, 0.25, 2.0)),
    }
    margins = {}
    ok = True
    for name, mu in fams.items():
        v = moments_up_to(mu, 256).values
        m = complete_monotonicity_margin(v, CM_KMAX)
        margins[name] = m / v[0]
        ok &= m >= -CM_TOL * v[0]
    return {"min_scaled_margin": margins}, ok


def check_fast_matvec(cfg):
    rng = np.random.default_rng(cfg["seed"])
    res = {}
    for N in (17, 64, 1000, 4096):
        T = HankelTruncation.from_measure(lebesgue(), N)
        a = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        fast, naive = hankel_apply_fast(T, a), hankel_apply_naive(T, a)
        res[str(N)] = float(np.linalg.norm(fast - naive) / np.linalg.norm(naive))
    return {"relative_residual": res}, max(res.values()) <= 1e-12


def check_agreement(cfg):
    rng = np.random.default_rng(cfg["seed"] + 1)
    measures = {
        "atomic": Atomic((0.0, 0.5, 0.8, 0.95), (0.5, 1.0, 0.25, 0.125)),
        "power(1)": PowerWeight(1.0),
        "power(0)": lebesgue(),
    }
    corrupt_index = int(np.random.default_rng(cfg["seed"]).integers(0, 8))
    worst = {}
    ok = True
    for name, mu in measures.items():
        errs = []
        for _ in range(20):
            f = rng.standard_normal(65) + 1j * rng.standard_normal(65)
            seq = None
            if cfg["corrupt"]:
                N = 256
                seq = moments_up_to(mu, 2 * N - 2).corrupted(corrupt_index, CORRUPTION_FACTOR)
                errs.append(agreement_check(mu, f, N=N, moments=seq))
            else:
                errs.append(agreement_check(mu, f))
        worst[name] = max(errs)
        ok &= worst[name] <= (1e-12 if name == "atomic" else 1e-8)
    out = {"max_error": worst}
    if cfg["corrupt"]:
        out["corrupted_moment"] = corrupt_index
    return out, ok


def check_carleson_concordance(cfg):
    table = {}
    ok = True
    for g in (0.0, 0.5, 1.0):
        mu = PowerWeight(g)
        seq = moments_up_to(mu, 4096)
        for s in (0.5, 1.0, 1.5, 2.0):
            v = (carleson_sup(mu, s).verdict, moment_carleson_sup(seq, s).verdict, zhao_K(mu, 0.0, s).verdict)
            expected = "finite" if g + 1.0 >= s else "divergent"
            table[f"gamma={g},s={s}"] = list(v)
            ok &= all(x == expected for x in v)
    return {"verdicts": table}, ok


def check_hilbert_envelope(cfg):
    norms = {}
    for N in (64, 256, 1024, 2048):
        norms[str(N)] = operator_norm_estimate(HankelTruncation.from_measure(lebesgue(), N))
    vals = list(norms.values())
    dense = float(np.linalg.svd(HankelTruncation.from_measure(lebesgue(), 64).dense(), compute_uv=False)[0])
    ok = all(b > a for a, b in zip(vals, vals[1:])) and max(vals) < math.pi and abs(vals[0] - dense) <= 1e-8 * dense
    return {"norms": norms, "dense_svd_64": dense}, ok


def check_schatten(cfg):
    cases = {"power(0)": (PowerWeight(0.0), False), "power(1)": (PowerWeight(1.0), True),
             "atomic(1/2)": (Atomic((0.5,), (1.0,)), True)}
    verdicts = {}
    ok = True
    for name, (mu, member) in cases.items():
        seq = moments_up_to(mu, 2046)
        for p in (1.5, 2.0, 3.0):
            v = membership_verdict(mu, p, momseq=seq).verdict
            verdicts[f"{name},p={p}"] = v
            ok &= v == ("in_Sp" if member else "not_in_Sp")
    leb = membership_verdict(lebesgue(), 2.0)
    slopes = [leb.spectral_track["slope_vs_logN"], leb.criterion_track["slope_vs_logN"]]
    ok &= all(abs(s - 1.0) <= 0.2 for s in slopes)
    rep = schatten_report(moments_up_to(PowerWeight(0.5), 1022), 2.0, 512)
    frob = abs(rep.schatten_partial / rep.frobenius_sq - 1.0)
    ok &= frob <= 1e-10
    return {"verdicts": verdicts, "lebesgue_p2_slopes": slopes, "frobenius_rel_error": frob}, ok


def check_blocks(cfg):
    out = {}
    ok = True
    for p in (1.5, 2.0, 3.0):
        ratios = [hp_norm(block(n), p) ** p / 2.0 ** (n * (p - 1.0)) for n in range(2, 10)]
        out[str(p)] = ratios
        if p == 2.0:
            ok &= max(abs(r - 1.0) for r in ratios) <= 1e-10
        else:
            ok &= max(ratios) / min(ratios) <= 8.0
    return {"ratios": out}, ok


def check_majorant(cfg):
    rng = np.random.default_rng(cfg["seed"] + 2)
    xs = np.linspace(-1.0, 1.0, 64)
    zz = (xs[:, None] + 1j * xs[None, :]).ravel()
    zz = zz[np.abs(zz) < 1.0]
    r = np.linspace(0.0, 1.0, 258)[1:-1]
    min_modulus, worst_dom, worst_norm = math.inf, -math.inf, 0.0
    for _ in range(100):
        d = int(rng.integers(0, 17))
        f = rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)
        F = majorant(f, 2.0)
        min_modulus = min(min_modulus, float(np.min(np.abs(F(zz)))))
        Fr = F(r).real
        worst_dom = max(worst_dom, float(np.max(np.abs(evaluate(f, r)) / Fr)))
        worst_norm = max(worst_norm, abs(F.hp_norm(2.0) / hp_norm(f, 2.0) - 1.0))
    ok = min_modulus > 0.0 and worst_dom <= 1.0 + 1e-9 and worst_norm <= 1e-8
    return {"min_modulus_on_grid": min_modulus, "max_ratio_f_over_F": worst_dom,
            "max_h2_norm_rel_error": worst_norm}, ok


def check_test_families(cfg):
    errs = {}
    for b in (0.0, 0.5, 0.9, 0.99):
        for p in (0.5, 1.0, 2.0):
            errs[f"b={b},p={p}"] = abs(hp_norm(test_fb(b, p), p) - 1.0)
    ga = test_ga(0.5, 40)
    k = np.arange(1, 41)
    ga_err = float(np.max(np.abs(ga[1:] - 0.5 ** k / k) / (0.5 ** k / k)))
    ok = max(errs.values()) <= 1e-6 and ga_err <= 4e-16 and ga[0] == math.log(2.0)
    return {"fb_norm_error": errs, "ga_rel_error": ga_err}, ok


def check_vanishing(cfg):
    bs = [1.0 - 2.0 ** -j for j in range(4, 13)]
    bs = [0.9] + [b for b in bs if b > 0.9]
    van = [fb_integral(LogPowerWeight(1.0, 2.0), b, 1.0) for b in bs]
    leb = [fb_integral(lebesgue(), b, 1.0) for b in bs]
    decreasing = all(y < x for x, y in zip(van, van[1:]))
    ok = decreasing and van[-1] < 0.25 * van[0] and min(leb) > 0.5
    return {"b": bs, "logpower(1,2)": van, "lebesgue": leb}, ok


CHECKS = (
    ("moment_engine", check_moments),
    ("complete_monotonicity", check_complete_monotonicity),
    ("fast_matvec", check_fast_matvec),
    ("integral_agreement", check_agreement),
    ("carleson_concordance", check_carleson_concordance),
    ("hilbert_envelope", check_hilbert_envelope),
    ("schatten_concordance", check_schatten),
    ("dyadic_blocks", check_blocks),
    ("majorant", check_majorant),
    ("test_families", check_test_families),
    ("vanishing_fb_integrals", check_vanishing),
)


def _run(name, fn, cfg):
    try:
        measured, ok = fn(cfg)
    except Exception as exc:  # collected, not fail-fast
        return CheckResult(name, False, {"error": f"{type(exc).__name__}: {exc}"})
    return CheckResult(name, bool(ok), measured)


def run_suite(seed: int = DEFAULT_SEED, corrupt: bool = False, workers: int = 4, only=None) -> list:
    cfg = {"seed": int(seed), "corrupt": bool(corrupt)}
    checks = [(n, f) for n, f in CHECKS if only is None or n in only]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run, n, f, cfg) for n, f in checks]
        return [fut.result() for fut in futures]
