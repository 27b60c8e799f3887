"""Positive Borel measures on [0, 1), their tails and moment sequences.

Four concrete measure types are supported:

``Atomic``          finitely many point masses ``w_i`` at ``t_i``
``PowerWeight``     ``scale * (1 - t)**gamma dt``
``LogPowerWeight``  ``scale * (1 - t)**(s - 1) * log(e / (1 - t))**(-alpha) dt``
``Tabulated``       piecewise-linear density on a grid, zero past the last point

Closed forms are used whenever a measure admits them. Everything else goes
through a composite Gauss-Legendre rule in the variable ``u`` with
``t = 1 - exp(-u)``, which maps the endpoint ``t = 1`` to infinity and turns
the power and logarithmic weights into smooth exponentially decaying
integrands.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.special import betaln

from . import kernels
from .errors import ParameterError, QuadratureError

__all__ = [
    "Atomic",
    "LogPowerWeight",
    "Measure",
    "MomentSequence",
    "PowerWeight",
    "QuadratureSpec",
    "Tabulated",
    "complete_monotonicity_margin",
    "conj_exponent",
    "integrate",
    "lebesgue",
    "log2_weight",
    "loge_weight",
    "measure_from_json",
    "measure_to_json",
    "moment",
    "moments_up_to",
    "tail_mass",
]

_PANEL = 16


@dataclass(frozen=True)
class QuadratureSpec:
    """Node budget, substitution switch and relative tolerance for quadrature."""

    budget: int = 4096
    substitution: bool = True
    tol: float = 1e-10

    def __post_init__(self):
        if int(self.budget) != self.budget or self.budget < 16:
            raise ParameterError(f"quadrature budget must be an integer >= 16, got {self.budget}")
        if not 0.0 < self.tol < 1.0:
            raise ParameterError(f"quadrature tolerance must lie in (0, 1), got {self.tol}")


DEFAULT_QUADRATURE = QuadratureSpec()


class Measure:
    """Base class; concrete measures are frozen dataclasses."""

    def total_mass(self, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
        return moment(self, 0, q)

    def scaled(self, c: float) -> "Measure":
        raise NotImplementedError

    # u-space density: d mu = _u_density(u) du on the continuous part
    def _u_density(self, u, t, omt):
        raise NotImplementedError

    def _decay_rate(self) -> float:
        raise NotImplementedError

    def _u_support_end(self) -> float:
        return math.inf

    def _u_kinks(self):
        return ()


@dataclass(frozen=True)
class Atomic(Measure):
    points: tuple
    weights: tuple

    def __post_init__(self):
        pts = tuple(float(x) for x in self.points)
        wts = tuple(float(x) for x in self.weights)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", wts)
        if len(pts) == 0 or len(pts) != len(wts):
            raise ParameterError("atomic measure needs equally many points and weights (at least one)")
        if any(not (0.0 <= t < 1.0) for t in pts):
            raise ParameterError(f"atoms must lie in [0, 1), got {pts}")
        if any(not (w > 0.0) or not math.isfinite(w) for w in wts):
            raise ParameterError(f"atom weights must be finite and > 0, got {wts}")

    def scaled(self, c):
        return Atomic(self.points, tuple(c * w for w in self.weights))

    @property
    def arrays(self):
        return np.asarray(self.points), np.asarray(self.weights)


@dataclass(frozen=True)
class PowerWeight(Measure):
    gamma: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not (self.gamma > -1.0) or not math.isfinite(self.gamma):
            raise ParameterError(f"power weight needs gamma > -1, got {self.gamma}")
        if not (self.scale > 0.0) or not math.isfinite(self.scale):
            raise ParameterError(f"scale must be finite and > 0, got {self.scale}")

    def scaled(self, c):
        return PowerWeight(self.gamma, self.scale * c)

    def _u_density(self, u, t, omt):
        return self.scale * np.exp(-(self.gamma + 1.0) * u)

    def _decay_rate(self):
        return self.gamma + 1.0


@dataclass(frozen=True)
class LogPowerWeight(Measure):
    s: float = 1.0
    alpha: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not (self.s > 0.0) or not math.isfinite(self.s):
            raise ParameterError(f"log-power weight needs s > 0, got {self.s}")
        if not (self.alpha >= 0.0) or not math.isfinite(self.alpha):
            raise ParameterError(f"log-power weight needs alpha >= 0, got {self.alpha}")
        if not (self.scale > 0.0) or not math.isfinite(self.scale):
            raise ParameterError(f"scale must be finite and > 0, got {self.scale}")

    def scaled(self, c):
        return LogPowerWeight(self.s, self.alpha, self.scale * c)

    def _u_density(self, u, t, omt):
        # (1-t)^(s-1) * (1+u)^(-alpha) * dt/du, with dt/du = 1 - t = exp(-u)
        return self.scale * np.exp(-self.s * u) * (1.0 + u) ** (-self.alpha)

    def _decay_rate(self):
        return self.s


@dataclass(frozen=True)
class Tabulated(Measure):
    grid: tuple
    density: tuple

    def __post_init__(self):
        g = tuple(float(x) for x in self.grid)
        d = tuple(float(x) for x in self.density)
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "density", d)
        if len(g) < 2 or len(g) != len(d):
            raise ParameterError("tabulated measure needs at least two grid points and matching densities")
        if g[0] < 0.0 or g[-1] >= 1.0:
            raise ParameterError(f"tabulated grid must lie in [0, 1), got [{g[0]}, {g[-1]}]")
        if any(b <= a for a, b in zip(g, g[1:])):
            raise ParameterError("tabulated grid must be strictly increasing")
        if any(not (x >= 0.0) or not math.isfinite(x) for x in d):
            raise ParameterError("tabulated density values must be finite and >= 0")
        if not any(x > 0.0 for x in d):
            raise ParameterError("tabulated density is identically zero")

    def scaled(self, c):
        return Tabulated(self.grid, tuple(c * x for x in self.density))

    def _u_density(self, u, t, omt):
        return np.interp(t, self.grid, self.density, left=0.0, right=0.0) * omt

    def _decay_rate(self):
        return math.inf

    def _u_support_end(self):
        return -math.log1p(-self.grid[-1])

    def _u_kinks(self):
        return tuple(-math.log1p(-x) for x in self.grid)

    def exact_mass_between(self, lo: float, hi: float = 1.0) -> float:
        """Integral of the piecewise-linear density over [lo, hi)."""
        g = np.asarray(self.grid)
        d = np.asarray(self.density)
        hi = min(hi, g[-1])
        if hi <= lo:
            return 0.0
        inner = g[(g > lo) & (g < hi)]
        xs = np.concatenate(([max(lo, g[0])], inner, [hi]))
        if xs[0] >= hi:
            return 0.0
        ys = np.interp(xs, g, d, left=0.0, right=0.0)
        return float(np.sum(0.5 * (ys[1:] + ys[:-1]) * np.diff(xs)))


def lebesgue() -> PowerWeight:
    """Lebesgue measure on [0, 1); its moments are 1/(n+1)."""
    return PowerWeight(0.0, 1.0)


# ---------------------------------------------------------------------------
# logarithm conventions and exponents


def loge_weight(x):
    """log(e / x), the base used inside log-power densities."""
    return 1.0 - np.log(x)


def log2_weight(x):
    """log(2 / x), the base used in the logarithmic Carleson functionals."""
    return math.log(2.0) - np.log(x)


def conj_exponent(alpha: float) -> float:
    """Conjugate exponent alpha / (alpha - 1)."""
    if not alpha > 1.0:
        raise ParameterError(f"conjugate exponent needs alpha > 1, got {alpha}")
    if math.isinf(alpha):
        return 1.0
    return alpha / (alpha - 1.0)


# ---------------------------------------------------------------------------
# quadrature


@lru_cache(maxsize=None)
def _gauss_legendre(m: int):
    x, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass(frozen=True)
class _Rule:
    t: np.ndarray
    omt: np.ndarray  # 1 - t, kept separately so it never loses digits near 1
    w: np.ndarray

    @property
    def size(self):
        return self.t.shape[0]


def _composite(edges: np.ndarray, m: int):
    x, w = _gauss_legendre(m)
    widths = np.diff(edges)
    nodes = (edges[:-1, None] + widths[:, None] * x[None, :]).ravel()
    weights = (widths[:, None] * w[None, :]).ravel()
    return nodes, weights


def _merge_kinks(edges: np.ndarray, kinks, lo, hi):
    inside = [k for k in kinks if lo < k < hi]
    if not inside:
        return edges
    merged = np.unique(np.concatenate((edges, inside)))
    # drop slivers created next to an existing edge
    keep = np.concatenate(([True], np.diff(merged) > 1e-12 * max(1.0, hi)))
    return merged[keep]


def _continuous_rule(mu: Measure, q: QuadratureSpec, nodes: int, lower: float, upper: float,
                     focus: float) -> _Rule:
    u_lo = -math.log1p(-lower) if lower > 0.0 else 0.0
    u_end = mu._u_support_end()
    if upper < 1.0:
        u_hi = min(-math.log1p(-upper), u_end)
    else:
        rate = mu._decay_rate()
        if math.isinf(rate):
            u_hi = u_end
        else:
            u_hi = max(u_lo, focus) + math.log(1e3 / q.tol) / rate + 4.0
            u_hi = min(u_hi, u_end)
    if u_hi <= u_lo:
        empty = np.empty(0)
        return _Rule(empty, empty, empty)
    panels = max(1, nodes // _PANEL)
    if q.substitution:
        edges = np.linspace(u_lo, u_hi, panels + 1)
        edges = _merge_kinks(edges, mu._u_kinks(), u_lo, u_hi)
        u, wu = _composite(edges, _PANEL)
        omt = np.exp(-u)
        t = -np.expm1(-u)
        w = wu * mu._u_density(u, t, omt)
    else:
        t_lo, t_hi = -math.expm1(-u_lo), -math.expm1(-u_hi)
        edges = np.linspace(t_lo, t_hi, panels + 1)
        edges = _merge_kinks(edges, [-math.expm1(-k) for k in mu._u_kinks()], t_lo, t_hi)
        t, wt = _composite(edges, _PANEL)
        omt = 1.0 - t
        u = -np.log(omt)
        # d mu = u_density du and du = dt / (1 - t)
        w = wt * mu._u_density(u, t, omt) / omt
    return _Rule(t, omt, w)


def _atomic_rule(mu: Atomic, lower: float, upper: float) -> _Rule:
    t, w = mu.arrays
    sel = (t >= lower) & (t < upper)
    t = t[sel]
    return _Rule(t, 1.0 - t, w[sel])


def integrate(mu: Measure, g, q: QuadratureSpec = DEFAULT_QUADRATURE, lower: float = 0.0,
              upper: float = 1.0, focus: float = 0.0):
    """Integrate ``g`` against ``mu`` over ``[lower, upper)``.

    ``g(t, omt)`` receives the nodes and ``1 - t`` and may return an array
    with trailing dimensions (one integral per trailing entry). ``focus`` is
    the location, in ``u = -log(1 - t)``, where the integrand still carries
    mass; the truncation point of the u-range is pushed past it.

    Returns ``(value, residual)``. The residual is the difference between
    the full-budget rule and a half-budget rule; ``QuadratureError`` is
    raised when it exceeds ``tol`` relative to the integral of ``|g|``.
    """
    if not 0.0 <= lower <= upper <= 1.0:
        raise ParameterError(f"integration range must satisfy 0 <= lower <= upper <= 1, got [{lower}, {upper})")
    if isinstance(mu, Atomic):
        rule = _atomic_rule(mu, lower, upper)
        vals = np.asarray(g(rule.t, rule.omt))
        value = np.tensordot(rule.w, vals, axes=(0, 0)) if rule.size else np.zeros(vals.shape[1:])
        return value, 0.0
    rules = [_continuous_rule(mu, q, n, lower, upper, focus) for n in (q.budget, q.budget // 2)]
    results = []
    for rule in rules:
        if rule.size == 0:
            results.append((0.0, 0.0))
            continue
        vals = np.asarray(g(rule.t, rule.omt))
        results.append((np.tensordot(rule.w, vals, axes=(0, 0)),
                        np.tensordot(rule.w, np.abs(vals), axes=(0, 0))))
    (value, scale), (coarse, _) = results
    residual = np.abs(np.asarray(value) - np.asarray(coarse))
    bound = q.tol * np.maximum(np.abs(value), np.asarray(scale) * 1e-3)
    if np.any(residual > bound + 1e-300):
        worst = float(np.max(residual))
        raise QuadratureError("quadrature did not converge within the node budget", value, worst)
    return value, float(np.max(residual)) if np.size(residual) else 0.0


# ---------------------------------------------------------------------------
# moments and tails


@dataclass(frozen=True)
class MomentSequence:
    """Moments mu_0 .. mu_M of a measure with per-entry provenance."""

    source: Measure
    values: np.ndarray
    methods: tuple
    error_bound: float = 0.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if len(self.methods) != vals.shape[0]:
            raise ParameterError("one method tag per moment is required")

    def __len__(self):
        return self.values.shape[0]

    def __getitem__(self, n):
        return self.values[n]

    @property
    def max_order(self) -> int:
        return self.values.shape[0] - 1

    def corrupted(self, index: int, factor: float) -> "MomentSequence":
        """Copy with one moment multiplied by ``factor`` (sensitivity tests)."""
        vals = self.values.copy()
        vals[index] *= factor
        return replace(self, values=vals)

    def invariant_violations(self) -> list:
        out = []
        v = self.values
        if np.any(v < 0):
            out.append("negative moment")
        if v.shape[0] > 1 and np.any(np.diff(v) > self.error_bound * (1 + 1e-12) + 1e-15 * v[0]):
            out.append("moments increase")
        return out


def _has_closed_form(mu: Measure) -> bool:
    return isinstance(mu, (Atomic, PowerWeight))


def _closed_moments(mu: Measure, ns: np.ndarray) -> np.ndarray:
    if isinstance(mu, Atomic):
        t, w = mu.arrays
        # 0**0 == 1 keeps an atom at the origin in mu_0 only
        return np.array([float(np.sum(w * t ** int(n))) for n in ns])
    if mu.gamma == 0.0:
        return mu.scale / (ns + 1.0)
    return mu.scale * _beta_moments(np.asarray(ns, dtype=np.int64), mu.gamma)


RECURRENCE_CAP = 8192


def _beta_moments(ns: np.ndarray, gamma: float) -> np.ndarray:
    """B(n+1, gamma+1).

    Low orders come from the running product mu_{n+1} = mu_n (n+1)/(n+gamma+2),
    which is accurate to a few ulp there, whereas exp(betaln) carries ~1e-13
    relative noise that high-order differences amplify. Orders beyond the cap
    use betaln, where the product's linear error growth would dominate.
    """
    out = np.empty(ns.shape, dtype=np.float64)
    low = ns <= RECURRENCE_CAP
    if np.any(low):
        top = int(ns[low].max())
        k = np.arange(1, top + 1, dtype=np.float64)
        ratios = np.concatenate(([1.0 / (gamma + 1.0)], k / (k + gamma + 1.0)))
        out[low] = np.cumprod(ratios)[ns[low]]
    if np.any(~low):
        out[~low] = np.exp(betaln(ns[~low] + 1.0, gamma + 1.0))
    return out


def _quadrature_moments(mu: Measure, max_n: int, q: QuadratureSpec):
    out = np.empty(max_n + 1)
    resid = 0.0
    focus = math.log1p(max_n)
    chunk = 512
    for start in range(0, max_n + 1, chunk):
        ns = np.arange(start, min(start + chunk, max_n + 1), dtype=np.float64)

        def powers(t, omt, ns=ns):
            return np.exp(np.log(t)[:, None] * ns[None, :])

        vals, r = integrate(mu, powers, q, focus=focus)
        out[start:start + ns.shape[0]] = vals
        resid = max(resid, r)
    return out, resid


def moment(mu: Measure, n: int, q: QuadratureSpec = DEFAULT_QUADRATURE, method: str = "auto") -> float:
    """The moment of order ``n``: the integral of t**n against ``mu``."""
    if int(n) != n or n < 0:
        raise ParameterError(f"moment order must be a nonnegative integer, got {n}")
    return float(moments_up_to(mu, int(n), q, method, only_last=True).values[-1])


def moments_up_to(mu: Measure, M: int, q: QuadratureSpec = DEFAULT_QUADRATURE, method: str = "auto",
                  only_last: bool = False) -> MomentSequence:
    """Moments of orders 0..M.

    ``method`` is ``"auto"`` (closed form when available), ``"closed"`` or
    ``"quadrature"``.
    """
    if int(M) != M or M < 0:
        raise ParameterError(f"M must be a nonnegative integer, got {M}")
    if method not in ("auto", "closed", "quadrature"):
        raise ParameterError(f"unknown moment method {method!r}")
    if not isinstance(mu, Measure):
        raise ParameterError(f"not a measure: {mu!r}")
    M = int(M)
    use_closed = method == "closed" or (method == "auto" and _has_closed_form(mu))
    if use_closed and not _has_closed_form(mu):
        raise ParameterError(f"{type(mu).__name__} has no closed-form moments")
    if use_closed:
        ns = np.array([M]) if only_last else np.arange(M + 1)
        vals, resid, tag = _closed_moments(mu, ns.astype(np.float64)), 0.0, "closed-form"
    elif only_last:
        vals, resid = integrate(mu, lambda t, omt: t ** M, q, focus=math.log1p(M))
        vals, tag = np.array([vals]), "quadrature"
    else:
        vals, resid = _quadrature_moments(mu, M, q)
        tag = "quadrature"
    vals = np.maximum(vals, 0.0)
    return MomentSequence(mu, vals, (tag,) * vals.shape[0], float(resid))


def tail_mass(mu: Measure, a: float, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """mu([a, 1))."""
    if not 0.0 <= a < 1.0:
        raise ParameterError(f"tail point must lie in [0, 1), got {a}")
    if isinstance(mu, Atomic):
        t, w = mu.arrays
        return float(np.sum(w[t >= a]))
    if isinstance(mu, PowerWeight):
        g1 = mu.gamma + 1.0
        return mu.scale * math.exp(g1 * math.log1p(-a)) / g1
    if isinstance(mu, Tabulated):
        return mu.exact_mass_between(a)
    value, _ = integrate(mu, lambda t, omt: np.ones_like(t), q, lower=a)
    return float(value)


def tail_masses(mu: Measure, points, q: QuadratureSpec = DEFAULT_QUADRATURE) -> np.ndarray:
    return np.array([tail_mass(mu, float(a), q) for a in points])


# ---------------------------------------------------------------------------
# complete monotonicity


def complete_monotonicity_margin(values, kmax: int = 8) -> float:
    """Smallest (-1)**k Delta**k mu_n over k <= kmax and n + k <= M.

    A Hausdorff moment sequence has margin >= 0; rounding makes small
    negative values possible.
    """
    table = kernels.alternating_differences(np.asarray(values, dtype=np.float64), int(kmax))
    return float(np.nanmin(table))


# ---------------------------------------------------------------------------
# JSON


_JSON_TYPES = {"atomic", "power", "logpower", "tabulated"}


def measure_from_json(doc) -> Measure:
    """Build a measure from a parsed JSON object or a JSON string."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    if not isinstance(doc, dict):
        raise ParameterError("measure spec must be a JSON object")
    kind = doc.get("type")
    if kind not in _JSON_TYPES:
        raise ParameterError(f"field 'type' must be one of {sorted(_JSON_TYPES)}, got {kind!r}")

    def need(name):
        if name not in doc:
            raise ParameterError(f"{kind} measure: missing field {name!r}")
        return doc[name]

    try:
        if kind == "atomic":
            return Atomic(tuple(need("points")), tuple(need("weights")))
        if kind == "power":
            return PowerWeight(float(need("gamma")), float(doc.get("scale", 1.0)))
        if kind == "logpower":
            return LogPowerWeight(float(need("s")), float(doc.get("alpha", 0.0)), float(doc.get("scale", 1.0)))
        return Tabulated(tuple(need("grid")), tuple(need("density")))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(f"{kind} measure: {exc}") from exc


def measure_to_json(mu: Measure) -> dict:
    if isinstance(mu, Atomic):
        return {"type": "atomic", "points": list(mu.points), "weights": list(mu.weights)}
    if isinstance(mu, PowerWeight):
        return {"type": "power", "gamma": mu.gamma, "scale": mu.scale}
    if isinstance(mu, LogPowerWeight):
        return {"type": "logpower", "s": mu.s, "alpha": mu.alpha, "scale": mu.scale}
    if isinstance(mu, Tabulated):
        return {"type": "tabulated", "grid": list(mu.grid), "density": list(mu.density)}
    raise ParameterError(f"not a measure: {mu!r}")
