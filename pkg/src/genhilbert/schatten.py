"""Singular values of Hankel truncations and the moment criterion for S_p membership."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ParameterError
from .measure import DEFAULT_QUADRATURE, Measure, MomentSequence, QuadratureSpec, moments_up_to
from .operator import HankelTruncation

__all__ = [
    "DENSE_CAP",
    "MembershipVerdict",
    "SchattenReport",
    "criterion_sum",
    "membership_verdict",
    "schatten_pnorm",
    "schatten_report",
    "singular_values",
]

DENSE_CAP = 2048
FLAT_INCREMENT = 0.01


def singular_values(T: HankelTruncation, cap: int = DENSE_CAP) -> np.ndarray:
    """All singular values of the symmetric truncation, largest first."""
    if T.N > cap:
        raise ParameterError(f"dense spectrum limited to N <= {cap}, got {T.N}")
    try:
        eig = np.linalg.eigvalsh(T.dense())
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"symmetric eigensolver failed: {exc}", None) from exc
    return np.sort(np.abs(eig))[::-1]


def schatten_pnorm(T: HankelTruncation, p: float) -> float:
    if not p > 0:
        raise ParameterError(f"p must be > 0, got {p}")
    return float(np.sum(singular_values(T) ** p) ** (1.0 / p))


def _moment_values(momseq):
    return momseq.values if isinstance(momseq, MomentSequence) else np.asarray(momseq, dtype=np.float64)


def criterion_sum(momseq, p: float, N: int) -> float:
    """sum_{n<N} (n+1)^(p-1) mu_n^p."""
    if not p > 1.0:
        raise ParameterError(f"p must be > 1, got {p}")
    mu = _moment_values(momseq)
    if mu.shape[0] < N:
        raise ParameterError(f"need {N} moments, have {mu.shape[0]}")
    n = np.arange(N, dtype=np.float64)
    return float(np.sum((n + 1.0) ** (p - 1.0) * mu[:N] ** p))


@dataclass(frozen=True)
class SchattenReport:
    p: float
    N: int
    singular_values: np.ndarray
    schatten_partial: float
    criterion_partial: float
    frobenius_sq: float

    def to_dict(self, spectrum: bool = True) -> dict:
        out = {
            "p": self.p,
            "N": self.N,
            "schatten_partial": self.schatten_partial,
            "criterion_partial": self.criterion_partial,
            "frobenius_sq": self.frobenius_sq,
        }
        if spectrum:
            out["singular_values"] = [float(x) for x in self.singular_values]
        return out


def schatten_report(momseq, p: float, N: int) -> SchattenReport:
    T = HankelTruncation.from_moments(momseq, N)
    sv = singular_values(T)
    m = T.moments
    # Frobenius sum grouped by anti-diagonal: entry mu_d appears min(d+1, 2N-1-d) times
    d = np.arange(2 * N - 1)
    frob = float(np.sum(np.minimum(d + 1, 2 * N - 1 - d) * m * m))
    return SchattenReport(float(p), N, sv, float(np.sum(sv ** p)), criterion_sum(momseq, p, N), frob)


def _growth(ns, partials):
    """Slope vs log N over the last three points and the relative increment per doubling."""
    x = np.log(np.asarray(ns[-3:], dtype=np.float64))
    y = np.asarray(partials[-3:], dtype=np.float64)
    slope = float(np.polyfit(x, y, 1)[0])
    doublings = math.log2(ns[-1] / ns[-2])
    rel = (y[-1] - y[-2]) / y[-1] / doublings if y[-1] > 0 else 0.0
    return slope, float(rel)


def _track_verdict(ns, partials):
    slope, rel = _growth(ns, partials)
    if rel < FLAT_INCREMENT:
        return "in_Sp", slope, rel
    # stable growth: last two increments per doubling have the same sign and similar size
    y = np.asarray(partials[-3:], dtype=np.float64)
    x = np.log2(np.asarray(ns[-3:], dtype=np.float64))
    inc = np.diff(y) / np.diff(x)
    if slope > 0 and np.all(inc > 0) and inc.max() <= 2.0 * inc.min():
        return "not_in_Sp", slope, rel
    return "boundary", slope, rel


@dataclass(frozen=True)
class MembershipVerdict:
    verdict: str
    ladder: tuple
    schatten_partials: tuple
    criterion_partials: tuple
    spectral_track: dict
    criterion_track: dict

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "ladder": list(self.ladder),
            "schatten_partials": list(self.schatten_partials),
            "criterion_partials": list(self.criterion_partials),
            "spectral_track": self.spectral_track,
            "criterion_track": self.criterion_track,
        }


def membership_verdict(mu: Measure, p: float, Nladder=(128, 256, 512, 1024),
                       q: QuadratureSpec = DEFAULT_QUADRATURE, momseq: MomentSequence | None = None,
                       ) -> MembershipVerdict:
    """Judge S_p membership from the spectral partial sums and the moment criterion.

    Each track is ``in_Sp`` when its relative increment per doubling of N
    is below 1%, ``not_in_Sp`` when it keeps growing at a stable rate, and
    ``boundary`` otherwise; the verdict is the common track verdict or
    ``boundary`` when they differ.
    """
    if not p > 1.0:
        raise ParameterError(f"p must be > 1, got {p}")
    ladder = tuple(int(n) for n in Nladder)
    if len(ladder) < 3 or any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ParameterError("ladder needs at least three strictly increasing sizes")
    if ladder[-1] > DENSE_CAP:
        raise ParameterError(f"ladder exceeds the dense-spectrum cap {DENSE_CAP}")
    if momseq is None:
        momseq = moments_up_to(mu, 2 * ladder[-1] - 2, q)
    sp, cp = [], []
    for N in ladder:
        rep = schatten_report(momseq, p, N)
        sp.append(rep.schatten_partial)
        cp.append(rep.criterion_partial)
    sv, s_slope, s_rel = _track_verdict(ladder, sp)
    cv, c_slope, c_rel = _track_verdict(ladder, cp)
    verdict = sv if sv == cv else "boundary"
    return MembershipVerdict(
        verdict, ladder, tuple(sp), tuple(cp),
        {"verdict": sv, "slope_vs_logN": s_slope, "increment_per_doubling": s_rel},
        {"verdict": cv, "slope_vs_logN": c_slope, "increment_per_doubling": c_rel},
    )
