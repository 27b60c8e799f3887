"""Carleson-type functionals for measures on [0, 1) and boundedness predictions.

For a measure supported on the radius, the Carleson box over ``a`` only
sees ``mu([a, 1))``, and the supremum over the disc in the conformally
invariant (Zhao) form is attained along positive reals because
``|1 - conj(a) t| >= 1 - |a| t`` there. Every functional is therefore
sampled on the dyadic grid ``a_j = 1 - 2**-j`` and judged by the slope of
``log(value_j)`` against ``j`` over the last half of the grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .measure import (DEFAULT_QUADRATURE, Atomic, LogPowerWeight, Measure, MomentSequence,
                      PowerWeight, QuadratureSpec, _composite, _merge_kinks, conj_exponent,
                      integrate, log2_weight, tail_mass)

__all__ = [
    "BalayageResult",
    "CarlesonReport",
    "GridSpec",
    "MomentCarlesonResult",
    "Prediction",
    "SLOPE_TOL",
    "balayage_lp_norm",
    "carleson_sup",
    "fb_integral",
    "log_balayage_lp_norm",
    "log_carleson_sup",
    "moment_carleson_sup",
    "predict",
    "zhao_K",
]

# per dyadic level; geometric growth shows up as a straight line in j
SLOPE_TOL = 0.05 * math.log(2.0)
FLAT_FACTOR = 2.0
VANISH_FACTOR = 4.0


@dataclass(frozen=True)
class GridSpec:
    levels: int = 14

    def __post_init__(self):
        if int(self.levels) != self.levels or self.levels < 4:
            raise ParameterError(f"grid needs at least 4 levels, got {self.levels}")

    @property
    def points(self) -> np.ndarray:
        return 1.0 - 2.0 ** -np.arange(self.levels + 1, dtype=np.float64)

    @property
    def gaps(self) -> np.ndarray:
        """1 - a_j, exact powers of two."""
        return 2.0 ** -np.arange(self.levels + 1, dtype=np.float64)


@dataclass(frozen=True)
class CarlesonReport:
    functional: str
    s: float
    alpha: float
    grid: np.ndarray
    values: np.ndarray
    sup_value: float
    argmax: int
    slope: float
    verdict: str
    vanishing: bool

    def to_dict(self) -> dict:
        return {
            "functional": self.functional,
            "s": self.s,
            "alpha": self.alpha,
            "sup_value": self.sup_value,
            "argmax": self.argmax,
            "slope": self.slope,
            "verdict": self.verdict,
            "vanishing": self.vanishing,
        }


def _trend(xs, values, tol):
    """Least-squares slope of log(values) against xs, with verdict and vanishing flag."""
    values = np.asarray(values, dtype=np.float64)
    if np.any(values <= 0.0):
        # identically zero near the boundary
        return -math.inf, "finite", True
    slope = float(np.polyfit(xs, np.log(values), 1)[0])
    if slope > tol:
        verdict = "divergent"
    elif slope < -tol or values.max() <= FLAT_FACTOR * values.min():
        verdict = "finite"
    else:
        verdict = "boundary"
    return slope, verdict, False


def _report(name, s, alpha, grid: GridSpec, values) -> CarlesonReport:
    values = np.asarray(values, dtype=np.float64)
    j = np.arange(grid.levels + 1)
    window = j >= grid.levels // 2
    slope, verdict, zero_tail = _trend(j[window], values[window], SLOPE_TOL)
    sup_value = float(values.max())
    vanishing = zero_tail or (slope <= -SLOPE_TOL and values[-1] < sup_value / VANISH_FACTOR)
    return CarlesonReport(name, float(s), float(alpha), grid.points, values, sup_value,
                          int(np.argmax(values)), slope, verdict, bool(vanishing))


def _check_s_alpha(s, alpha):
    if not s > 0:
        raise ParameterError(f"s must be > 0, got {s}")
    if not alpha >= 0:
        raise ParameterError(f"alpha must be >= 0, got {alpha}")


def carleson_sup(mu: Measure, s: float, g: GridSpec = GridSpec(),
                 q: QuadratureSpec = DEFAULT_QUADRATURE) -> CarlesonReport:
    """mu([a_j, 1)) / (1 - a_j)**s over the grid."""
    _check_s_alpha(s, 0.0)
    tails = np.array([tail_mass(mu, a, q) for a in g.points])
    return _report("carleson", s, 0.0, g, tails / g.gaps ** s)


def log_carleson_sup(mu: Measure, alpha: float, s: float, g: GridSpec = GridSpec(),
                     q: QuadratureSpec = DEFAULT_QUADRATURE) -> CarlesonReport:
    """mu([a_j, 1)) * log(2 / (1 - a_j^2))**alpha / (1 - a_j^2)**s over the grid."""
    _check_s_alpha(s, alpha)
    tails = np.array([tail_mass(mu, a, q) for a in g.points])
    d = g.gaps * (2.0 - g.gaps)  # 1 - a^2
    return _report("log-carleson", s, alpha, g, tails * log2_weight(d) ** alpha / d ** s)


def zhao_K(mu: Measure, alpha: float, s: float, g: GridSpec = GridSpec(),
           q: QuadratureSpec = DEFAULT_QUADRATURE) -> CarlesonReport:
    """log(2/(1-a^2))**alpha * int ((1 - a^2) / (1 - a t)^2)**s d mu(t) over the grid."""
    _check_s_alpha(s, alpha)
    values = []
    for a, gap in zip(g.points, g.gaps):
        d = gap * (2.0 - gap)

        def kernel(t, omt, a=a, gap=gap, d=d):
            # 1 - a t = (1 - a) + a (1 - t)
            return (d / (gap + a * omt) ** 2) ** s

        integral, _ = integrate(mu, kernel, q, focus=-math.log(gap))
        values.append(log2_weight(d) ** alpha * float(integral))
    return _report("zhao", s, alpha, g, values)


@dataclass(frozen=True)
class MomentCarlesonResult:
    s: float
    sup_value: float
    argmax: int
    slope: float
    verdict: str


def moment_carleson_sup(momseq, s: float) -> MomentCarlesonResult:
    """sup_n (1 + n)**s mu_n, with the growth slope against log n.

    The slope is fitted on log-spaced orders in the upper half (in log
    scale) of the available range; thresholds match the dyadic grid ones.
    """
    if not s > 0:
        raise ParameterError(f"s must be > 0, got {s}")
    mu = momseq.values if isinstance(momseq, MomentSequence) else np.asarray(momseq, dtype=np.float64)
    if mu.shape[0] < 64:
        raise ParameterError(f"need at least 64 moments, got {mu.shape[0]}")
    n = np.arange(mu.shape[0], dtype=np.float64)
    terms = (1.0 + n) ** s * mu
    M = mu.shape[0] - 1
    top = math.log2(M)
    idx = np.unique(np.round(2.0 ** np.linspace(top / 2, top, 16)).astype(int))
    # per unit of log n; equals SLOPE_TOL per dyadic level
    slope, verdict, _ = _trend(np.log(idx), terms[idx], SLOPE_TOL / math.log(2.0))
    return MomentCarlesonResult(float(s), float(terms.max()), int(np.argmax(terms)), slope, verdict)


# ---------------------------------------------------------------------------
# radial balayage


@dataclass(frozen=True)
class BalayageResult:
    exponent: float
    norm: float
    divergent: bool
    decay_rate: float


_V_MAX = 60.0
_V_PANELS = 120


def _phi_on_nodes(mu: Measure, v, logweighted: bool, q: QuadratureSpec):
    """Phi(v) = int_0^{1 - e^{-v}} [log 1/(1-t)] d mu(t) / (1 - t), vectorized over nodes v."""
    if isinstance(mu, PowerWeight):
        g, c = mu.gamma, mu.scale
        if logweighted:
            if g == 0.0:
                return c * v * v / 2.0
            return c * (1.0 - np.exp(-g * v) * (1.0 + g * v)) / (g * g)
        if g == 0.0:
            return c * v
        return c * (-np.expm1(-g * v)) / g

    def h(u):
        omt = np.exp(-u)
        out = mu._u_density(u, -np.expm1(-u), omt) / omt
        return out * u if logweighted else out

    # cumulative integral of h over panels, then a partial panel up to each node
    edges = np.linspace(0.0, float(v.max()), max(8, q.budget // 16) + 1)
    edges = _merge_kinks(edges, mu._u_kinks(), 0.0, float(v.max()))
    un, wn = _composite(edges, 16)
    per_panel = (wn * h(un)).reshape(-1, 16).sum(axis=1)
    cum = np.concatenate(([0.0], np.cumsum(per_panel)))
    which = np.clip(np.searchsorted(edges, v, side="right") - 1, 0, edges.shape[0] - 2)
    start = edges[which]
    x, w = _composite(np.array([0.0, 1.0]), 16)
    width = (v - start)[:, None]
    partial = np.sum(w[None, :] * width * h(start[:, None] + width * x[None, :]), axis=1)
    return cum[which] + partial


def _balayage(mu: Measure, e: float, logweighted: bool, q: QuadratureSpec) -> BalayageResult:
    if not e >= 1.0:
        raise ParameterError(f"exponent must be >= 1, got {e}")
    if isinstance(mu, Atomic):
        t, w = mu.arrays
        d = 1.0 - t
        c = w / d * (np.log(1.0 / d) if logweighted else 1.0)
        order = np.argsort(-d, kind="stable")
        d, c = d[order], c[order]
        # Phi(s) equals the partial sum over atoms with 1 - t_i >= s
        lower = np.concatenate((d[1:], [0.0]))
        total = float(np.sum((d - lower) * np.cumsum(c) ** e))
        return BalayageResult(e, total ** (1.0 / e), False, math.inf)
    v, wv = _composite(np.linspace(0.0, _V_MAX, _V_PANELS + 1), 16)
    phi = _phi_on_nodes(mu, v, logweighted, q)
    integrand = phi ** e * np.exp(-v)
    body = float(np.sum(wv * integrand))
    probe = np.array([_V_MAX - 10.0, _V_MAX])
    iprobe = _phi_on_nodes(mu, probe, logweighted, q) ** e * np.exp(-probe)
    if iprobe[1] <= 0.0:
        return BalayageResult(e, body ** (1.0 / e), False, math.inf)
    rate = float(-(math.log(iprobe[1]) - math.log(iprobe[0])) / 10.0)
    divergent = rate <= SLOPE_TOL / math.log(2.0)
    tail = 0.0 if divergent else float(iprobe[1]) / rate
    return BalayageResult(e, (body + tail) ** (1.0 / e), divergent, rate)


def balayage_lp_norm(mu: Measure, e: float, q: QuadratureSpec = DEFAULT_QUADRATURE) -> BalayageResult:
    """L^e([0,1)) norm of s -> int_0^{1-s} d mu(t) / (1 - t).

    The s-integral runs in v = -log s up to s = e^-60; the flag is raised
    when the integrand in v stops decaying (rate <= 0.05 per unit of v),
    and the norm is then the truncated value.
    """
    return _balayage(mu, e, False, q)


def log_balayage_lp_norm(mu: Measure, e: float, q: QuadratureSpec = DEFAULT_QUADRATURE) -> BalayageResult:
    """As ``balayage_lp_norm`` with the inner integrand weighted by log(1/(1-t))."""
    return _balayage(mu, e, True, q)


def fb_integral(mu: Measure, b: float, power: float, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """int ((1 - b^2) / (1 - b t)^2)**power d mu(t).

    ``power = 1/p`` gives the integral of f_b against mu; ``power = q/p``
    gives the L^q(mu) mass of f_b, whose H^p norm is 1.
    """
    if not 0.0 <= b < 1.0:
        raise ParameterError(f"b must lie in [0, 1), got {b}")
    gap = 1.0 - b
    d = gap * (1.0 + b)

    def kernel(t, omt):
        return (d / (gap + b * omt) ** 2) ** power

    value, _ = integrate(mu, kernel, q, focus=-math.log(gap))
    return float(value)


# ---------------------------------------------------------------------------
# analytic predictions for the parametric families

_EPS = 1e-12


@dataclass(frozen=True)
class Prediction:
    verdict: str
    criterion: str

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "criterion": self.criterion}


def _tail_shape(mu):
    """(sigma, beta) with mu([a,1)) ~ (1-a)^sigma log(e/(1-a))^-beta; 'zero' for finite atoms."""
    if isinstance(mu, Atomic):
        return "zero"
    if isinstance(mu, PowerWeight):
        return (mu.gamma + 1.0, 0.0)
    if isinstance(mu, LogPowerWeight):
        return (mu.s, mu.alpha)
    return None


def _is_log_carleson(shape, s, alpha=0.0, vanishing=False) -> bool:
    if shape == "zero":
        return True
    sigma, beta = shape
    if sigma > s + _EPS:
        return True
    if sigma < s - _EPS:
        return False
    return alpha < beta - _EPS if vanishing else alpha <= beta + _EPS


def _balayage_in(shape, e, logweighted=False) -> bool:
    if shape == "zero":
        return True
    sigma, beta = shape
    growth = 1.0 - sigma
    if growth <= _EPS:
        return True
    logpow = beta - 1.0 if logweighted else beta
    x = e * growth
    if x < 1.0 - _EPS:
        return True
    if x > 1.0 + _EPS:
        return False
    return e * logpow > 1.0 + _EPS


def _verdict(bounded, compact):
    return "compact" if compact else ("bounded" if bounded else "unbounded")


def predict(p: float, q_exp: float, family: Measure) -> Prediction:
    """Boundedness/compactness of the operator from H^p to H^q for a parametric family.

    Tabulated (or otherwise unclassifiable) measures return ``undecided``.
    """
    if not (p > 0 and q_exp > 0):
        raise ParameterError("p and q must be > 0")
    shape = _tail_shape(family)
    if shape is None:
        return Prediction("undecided", "no analytic tail model for this measure type")
    if p <= 1.0:
        if not _is_log_carleson(shape, 1.0 / p):
            return Prediction("undecided", "not a 1/p-Carleson measure: integral form undefined on H^p")
        if q_exp < 1.0:
            return Prediction("undecided", "bounded into B_q (containing Banach space of H^q); H^q itself not characterized")
        if q_exp == 1.0:
            b = _is_log_carleson(shape, 1.0 / p, alpha=1.0)
            c = _is_log_carleson(shape, 1.0 / p, alpha=1.0, vanishing=True)
            return Prediction(_verdict(b, c), "H^p->H^1, p<=1: (vanishing) 1-logarithmic 1/p-Carleson")
        s = 1.0 / p + 1.0 / conj_exponent(q_exp)
        b = _is_log_carleson(shape, s)
        c = _is_log_carleson(shape, s, vanishing=True)
        return Prediction(_verdict(b, c), f"H^p->H^q, p<=1<q: (vanishing) {s:g}-Carleson")
    pc = conj_exponent(p)
    if not _balayage_in(shape, pc):
        return Prediction("undecided", "radial balayage not in L^{p'}: integral form undefined on H^p")
    if q_exp >= p:
        s = 1.0 / p + 1.0 / conj_exponent(q_exp)
        b = _is_log_carleson(shape, s)
        if q_exp == p:
            return Prediction(_verdict(b, False), f"H^p->H^p, p>1: {s:g}-Carleson (compactness not characterized)")
        c = _is_log_carleson(shape, s, vanishing=True)
        return Prediction(_verdict(b, c), f"H^p->H^q, 1<p<q: (vanishing) {s:g}-Carleson")
    if q_exp > 1.0:
        e = p * q_exp / (p - q_exp)
        b = _balayage_in(shape, e)
        return Prediction(_verdict(b, b), f"H^p->H^q, 1<q<p: radial balayage in L^{e:g}; compact iff bounded")
    if q_exp == 1.0:
        b = _balayage_in(shape, pc, logweighted=True)
        return Prediction(_verdict(b, b), "H^p->H^1, p>1: log-weighted radial balayage in L^{p'}; compact iff bounded")
    return Prediction("undecided", "bounded into B_q (containing Banach space of H^q); H^q itself not characterized")
