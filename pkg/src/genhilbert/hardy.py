"""Polynomials on the unit disc: integral means, norms, test families, majorants.

Polynomials are plain complex numpy arrays of Taylor coefficients
``a_0, ..., a_{N-1}`` (the "coefficient vectors" used everywhere in the
package). Circle means use uniform sampling computed with one FFT per
radius, which is exact for ``p = 2`` once the sample count exceeds the
degree and spectrally accurate otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ParameterError, RootFindingError
from .measure import MomentSequence, _composite

__all__ = [
    "BlaschkeFactorization",
    "Majorant",
    "RadialProfile",
    "as_coeffs",
    "besov_norm",
    "blaschke_factorize",
    "block",
    "bq_norm",
    "circle_samples",
    "coeffs_from_json",
    "coeffs_to_json",
    "degree",
    "dyadic_block_besov",
    "evaluate",
    "hp_norm",
    "integral_means",
    "majorant",
    "radial_profile",
    "test_fb",
    "test_ga",
]

MAX_MAJORANT_DEGREE = 64
BOUNDARY_TOL = 1e-9
SERIES_FLOOR = 1e-14


def as_coeffs(f) -> np.ndarray:
    a = np.atleast_1d(np.asarray(f, dtype=np.complex128))
    if a.ndim != 1 or a.shape[0] == 0:
        raise ParameterError("a coefficient vector must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(a)):
        raise ParameterError("coefficients must be finite")
    return a


def degree(f) -> int:
    """Largest index with a nonzero coefficient (0 for the zero polynomial)."""
    nz = np.flatnonzero(as_coeffs(f))
    return int(nz[-1]) if nz.size else 0


def coeffs_to_json(f) -> list:
    return [[float(c.real), float(c.imag)] for c in as_coeffs(f)]


def coeffs_from_json(doc) -> np.ndarray:
    """Accept ``[[re, im], ...]`` pairs or plain real numbers."""
    if not isinstance(doc, list) or not doc:
        raise ParameterError("coefficients must be a non-empty JSON array")
    out = []
    for i, item in enumerate(doc):
        if isinstance(item, (int, float)):
            out.append(complex(item))
        elif isinstance(item, list) and len(item) == 2 and all(isinstance(x, (int, float)) for x in item):
            out.append(complex(item[0], item[1]))
        else:
            raise ParameterError(f"coefficient {i}: expected [re, im] pair, got {item!r}")
    return as_coeffs(out)


def evaluate(f, z):
    """Horner evaluation of the polynomial at ``z`` (scalar or array)."""
    a = as_coeffs(f)
    zz = np.asarray(z, dtype=np.complex128)
    out = kernels.horner(a, zz.reshape(-1)).reshape(zz.shape)
    return out[()] if out.ndim == 0 else out


def _default_samples(f) -> int:
    return 1 << max(3, math.ceil(math.log2(8 * (degree(f) + 1))))


def _check_samples(f, K):
    if K is None:
        return _default_samples(f)
    K = int(K)
    if K < 8 * (degree(f) + 1) or K & (K - 1):
        raise ParameterError(f"sample count must be a power of two >= 8*(degree+1) = {8 * (degree(f) + 1)}, got {K}")
    return K


def circle_samples(f, r: float, K: int) -> np.ndarray:
    """Values f(r exp(2 pi i k / K)), k = 0..K-1."""
    a = as_coeffs(f)
    c = a * r ** np.arange(a.shape[0]) if r != 1.0 else a.copy()
    if c.shape[0] > K:
        folded = np.zeros(K, dtype=np.complex128)
        np.add.at(folded, np.arange(c.shape[0]) % K, c)
        c = folded
    return np.fft.ifft(c, n=K) * K


def _mean_power(values, p):
    return float(np.mean(np.abs(values) ** p))


def integral_means(f, r: float, p: float, K: int | None = None) -> float:
    """M_p(r, f), the L^p mean of |f| over the circle of radius r."""
    if not 0.0 <= r <= 1.0:
        raise ParameterError(f"radius must lie in [0, 1], got {r}")
    if not p > 0:
        raise ParameterError(f"p must be > 0, got {p}")
    K = _check_samples(f, K)
    return _mean_power(circle_samples(f, r, K), p) ** (1.0 / p)


def hp_norm(f, p: float, K: int | None = None) -> float:
    """H^p norm of a polynomial, M_p(1, f)."""
    return integral_means(f, 1.0, p, K)


@dataclass(frozen=True)
class RadialProfile:
    radii: np.ndarray
    means: np.ndarray
    p: float


def radial_profile(f, p: float, levels: int = 16, K: int | None = None) -> RadialProfile:
    """M_p on the geometric radii 1 - 2**-j, j = 0..levels."""
    K = _check_samples(f, K)
    radii = 1.0 - 2.0 ** -np.arange(levels + 1)
    means = np.array([_mean_power(circle_samples(f, r, K), p) ** (1.0 / p) for r in radii])
    return RadialProfile(radii, means, p)


def _radial_u_rule(u_max: float, panels: int):
    u, w = _composite(np.linspace(0.0, u_max, panels + 1), 16)
    return u, w, -np.expm1(-u)


# beyond u = 40, 1 - r < 5e-18 and r rounds to 1
_U_FLAT = 40.0


def bq_norm(f, q: float, panels: int = 40, K: int | None = None) -> float:
    """Integral of (1-r)**(1/q - 2) * M_1(r, f) over [0, 1), for 0 < q < 1."""
    if not 0.0 < q < 1.0:
        raise ParameterError(f"B_q needs 0 < q < 1, got {q}")
    K = _check_samples(f, K)
    rate = 1.0 / q - 1.0
    u, w, r = _radial_u_rule(_U_FLAT, panels)
    m1 = np.array([_mean_power(circle_samples(f, ri, K), 1.0) for ri in r])
    body = float(np.sum(w * np.exp(-rate * u) * m1))
    tail = _mean_power(circle_samples(f, 1.0, K), 1.0) * math.exp(-rate * _U_FLAT) / rate
    return body + tail


def besov_norm(g, p: float, panels: int = 40, K: int | None = None) -> float:
    """The p-th power of the B^p norm, |g(0)|^p + int_D |g'|^p (1-|z|^2)^(p-2) dA.

    dA is unnormalized area measure, so g(z) = z with p = 2 gives pi.
    """
    if not p > 1.0:
        raise ParameterError(f"Besov norm needs p > 1, got {p}")
    a = as_coeffs(g)
    head = abs(a[0]) ** p
    if a.shape[0] == 1:
        return head
    dg = a[1:] * np.arange(1, a.shape[0])
    K = _check_samples(dg, K)
    u, w, r = _radial_u_rule(_U_FLAT, panels)
    mp = np.array([_mean_power(circle_samples(dg, ri, K), p) for ri in r])
    # polar form: 2 pi int M_p^p(r) (1 - r^2)^(p-2) r dr with 1 - r = exp(-u)
    body = np.sum(w * mp * np.exp(-(p - 1.0) * u) * (1.0 + r) ** (p - 2.0) * r)
    tail = _mean_power(circle_samples(dg, 1.0, K), p) * 2.0 ** (p - 2.0) * math.exp(-(p - 1.0) * _U_FLAT) / (p - 1.0)
    return head + 2.0 * math.pi * float(body + tail)


def block(n: int) -> np.ndarray:
    """Coefficients of sum_{k=2^n}^{2^(n+1)-1} z^(k-1)."""
    if n < 0:
        raise ParameterError("block index must be >= 0")
    a = np.zeros(2 ** (n + 1) - 1, dtype=np.complex128)
    a[2 ** n - 1:] = 1.0
    return a


def dyadic_block_besov(momseq, p: float, nmax: int) -> float:
    """sum_{n<=nmax} 2^(-n(p-1)) || sum_{k=2^n}^{2^(n+1)-1} k mu_{k+1} z^(k-1) ||_{H^p}^p.

    The leading power z^(2^n - 1) is unimodular on the circle and is dropped
    before sampling.
    """
    if not p > 1.0:
        raise ParameterError(f"p must be > 1, got {p}")
    mu = momseq.values if isinstance(momseq, MomentSequence) else np.asarray(momseq, dtype=np.float64)
    need = 2 ** (nmax + 1) + 1
    if mu.shape[0] < need:
        raise ParameterError(f"need moments through order 2^(nmax+1) = {need - 1}, have {mu.shape[0] - 1}")
    total = 0.0
    for n in range(nmax + 1):
        k = np.arange(2 ** n, 2 ** (n + 1))
        coeffs = (k * mu[k + 1]).astype(np.complex128)
        if not np.any(coeffs):
            continue
        total += 2.0 ** (-n * (p - 1.0)) * hp_norm(coeffs, p) ** p
    return total


# ---------------------------------------------------------------------------
# test families


def _fb_degree(b: float, expo: float, tail_tol: float = 1e-13, cap: int = 1 << 20) -> int:
    # coefficients of (1 - bz)^(-expo): c_k = c_{k-1} * b * (k - 1 + expo) / k
    c, k = 1.0, 0
    while k < cap:
        k += 1
        c *= b * (k - 1 + expo) / k
        ratio = b * (k + expo) / (k + 1)
        if ratio < 1.0 and k > expo and c * ratio / (1.0 - max(ratio, b)) < tail_tol:
            return k
    raise ParameterError(f"f_b with b={b} needs more than {cap} coefficients")


def test_fb(b: float, p: float, D: int | None = None) -> np.ndarray:
    """Taylor coefficients of ((1 - b^2) / (1 - b z)^2)^(1/p) through degree D.

    With ``D=None`` the degree is chosen so the discarded tail is below
    1e-13 on the closed disc.
    """
    if not 0.0 <= b < 1.0:
        raise ParameterError(f"b must lie in [0, 1), got {b}")
    if not p > 0:
        raise ParameterError(f"p must be > 0, got {p}")
    expo = 2.0 / p
    if b == 0.0:
        return np.ones(1, dtype=np.complex128) if D is None else np.eye(1, D + 1, dtype=np.complex128)[0]
    if D is None:
        D = _fb_degree(b, expo)
    k = np.arange(1, D + 1)
    log_ratio = np.log(b) + np.log((k - 1 + expo) / k)
    coeffs = np.exp(np.concatenate(([0.0], np.cumsum(log_ratio))) + math.log1p(-b * b) / p)
    return coeffs.astype(np.complex128)


def test_ga(a: float, D: int | None = None) -> np.ndarray:
    """Taylor coefficients of log(2 / (1 - a z)): log 2, a, a^2/2, a^3/3, ..."""
    if not 0.0 <= a < 1.0:
        raise ParameterError(f"a must lie in [0, 1), got {a}")
    if D is None:
        D = 0 if a == 0.0 else int(min(1 << 20, max(1, math.ceil(math.log(1e-17) / math.log(a)))))
    k = np.arange(1, D + 1, dtype=np.float64)
    out = np.empty(D + 1, dtype=np.complex128)
    out[0] = math.log(2.0)
    out[1:] = a ** k / k
    return out


# ---------------------------------------------------------------------------
# Blaschke factorization and the positive majorant


@dataclass(frozen=True)
class BlaschkeFactorization:
    """p(z) = z^m * prod(z - z_i for disc zeros) * outer(z)."""

    origin_order: int
    disc_zeros: np.ndarray
    boundary_zeros: np.ndarray
    outer_part: np.ndarray
    leading: complex
    exterior_zeros: np.ndarray
    residual: float

    def reconstruct(self) -> np.ndarray:
        inner = np.poly(self.disc_zeros)[::-1] if self.disc_zeros.size else np.ones(1)
        prod = np.convolve(inner, self.outer_part)
        return np.concatenate((np.zeros(self.origin_order, dtype=np.complex128), prod))

    def blaschke(self, z):
        """The finite Blaschke product z^m prod (z - z_i) / (1 - conj(z_i) z)."""
        z = np.asarray(z, dtype=np.complex128)
        out = z ** self.origin_order
        for zi in self.disc_zeros:
            out = out * (z - zi) / (1.0 - np.conj(zi) * z)
        return out

    def zero_free_part(self, z):
        """p / B in product form: leading * prod(1 - conj(z_i) z) * prod(z - zeta_j)."""
        z = np.asarray(z, dtype=np.complex128)
        out = np.full(z.shape, self.leading, dtype=np.complex128)
        for zi in self.disc_zeros:
            out = out * (1.0 - np.conj(zi) * z)
        for zeta in self.exterior_zeros:
            out = out * (z - zeta)
        return out

    def log_zero_free_part(self, z):
        """Continuous logarithm of ``zero_free_part`` on the open disc."""
        z = np.asarray(z, dtype=np.complex128)
        const = self.leading * np.prod(-self.exterior_zeros) if self.exterior_zeros.size else self.leading
        out = np.full(z.shape, np.log(complex(const)), dtype=np.complex128)
        for zi in self.disc_zeros:
            out = out + np.log(1.0 - np.conj(zi) * z)
        for zeta in self.exterior_zeros:
            out = out + np.log(1.0 - z / zeta)
        return out


def _root_residual(coeffs, roots) -> float:
    if roots.size == 0:
        return 0.0
    vals = kernels.horner(coeffs, roots)
    scale = kernels.horner(np.abs(coeffs).astype(np.complex128), np.abs(roots).astype(np.complex128)).real
    return float(np.max(np.abs(vals) / scale))


def blaschke_factorize(f, max_degree: int = MAX_MAJORANT_DEGREE) -> BlaschkeFactorization:
    """Split a polynomial into origin order, disc zeros and a zero-free outer polynomial.

    Roots come from the companion-matrix eigenvalues (``numpy.roots``) and
    are checked by their relative backward residual. Roots with modulus at
    least ``1 - 1e-9`` stay in the outer part.
    """
    a = as_coeffs(f)
    nz = np.flatnonzero(a)
    if nz.size == 0:
        raise ParameterError("cannot factor the zero polynomial")
    m = int(nz[0])
    core = a[m:int(nz[-1]) + 1]
    if core.shape[0] - 1 > max_degree:
        raise ParameterError(f"degree {core.shape[0] - 1 + m} exceeds the root-finding cap {max_degree}")
    roots = np.roots(core[::-1]) if core.shape[0] > 1 else np.empty(0, dtype=np.complex128)
    residual = _root_residual(core, roots)
    if residual > 1e-8:
        raise RootFindingError("root residual above 1e-8", residual)
    mod = np.abs(roots)
    inside = roots[mod < 1.0 - BOUNDARY_TOL]
    outside = roots[mod >= 1.0 - BOUNDARY_TOL]
    boundary = outside[np.abs(np.abs(outside) - 1.0) <= BOUNDARY_TOL]
    leading = complex(core[-1])
    outer = leading * (np.poly(outside)[::-1] if outside.size else np.ones(1))
    return BlaschkeFactorization(m, inside, boundary, outer.astype(np.complex128), leading, outside, residual)


@dataclass
class Majorant:
    """Zero-free majorant F of a polynomial f for the H^p norm.

    F is never expanded into Taylor coefficients; it is evaluated from the
    factorization of the auxiliary polynomial with coefficients |a_k|.
    """

    p: float
    factorization: BlaschkeFactorization
    diagnostics: dict = field(default_factory=dict)

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        if self.p == 2.0:
            return self.factorization.zero_free_part(z)
        return np.exp((2.0 / self.p) * self.factorization.log_zero_free_part(z))

    def hp_norm(self, p: float | None = None, K: int | None = None) -> float:
        p = self.p if p is None else p
        deg = self.diagnostics.get("auxiliary_degree", 0)
        K = K or (1 << max(3, math.ceil(math.log2(8 * (deg + 1)))))
        z = np.exp(2j * np.pi * np.arange(K) / K)
        return _mean_power(self(z), p) ** (1.0 / p)


def _series_power_of_zero_free(fact: BlaschkeFactorization, expo: float, D: int) -> np.ndarray:
    # Taylor coefficients of (p / B)^expo through degree D via exp of the log series
    k = np.arange(1, D + 1)
    s = np.zeros(D + 1, dtype=np.complex128)
    for zi in fact.disc_zeros:
        s[1:] -= np.conj(zi) ** k / k
    for zeta in fact.exterior_zeros:
        s[1:] -= (1.0 / zeta) ** k / k
    s *= expo
    const = fact.leading * (np.prod(-fact.exterior_zeros) if fact.exterior_zeros.size else 1.0)
    h = np.zeros(D + 1, dtype=np.complex128)
    h[0] = np.exp(expo * np.log(complex(const)))
    ks = s * np.arange(D + 1)
    for n in range(1, D + 1):
        h[n] = np.dot(ks[1:n + 1], h[n - 1::-1][:n]) / n
    return h


def majorant(f, p: float = 2.0, series_degree: int = 48) -> Majorant:
    """Zero-free F with F(r) > 0 and |f(r)| <= F(r) on (0, 1) and the H^p norm of f.

    For p = 2 the construction is exact: G = sum |a_k| z^k and F = G / B with
    B the Blaschke product over the zeros of G in the open disc. For other p
    the zero-free part g of f is raised to p/2, its Taylor series (truncated
    at ``series_degree``) feeds the p = 2 construction, and the result is
    raised to 2/p; the norm identity then holds up to the reported
    truncation tail.
    """
    a = as_coeffs(f)
    if not np.any(a):
        raise ParameterError("the majorant of the zero polynomial is undefined")
    if not p > 0:
        raise ParameterError(f"p must be > 0, got {p}")
    diag = {}
    if p == 2.0:
        aux = np.abs(a).astype(np.complex128)
    else:
        own = blaschke_factorize(a)
        h = _series_power_of_zero_free(own, p / 2.0, series_degree)
        diag["series_tail"] = float(np.abs(h[-1]))
        aux = np.abs(h)
        # coefficients at rounding level carry no information and wreck the roots
        keep = np.flatnonzero(aux > SERIES_FLOOR * aux.sum())
        diag["dropped_mass"] = float(aux[keep[-1] + 1:].sum() / aux.sum())
        aux = aux[:keep[-1] + 1].astype(np.complex128)
    fact = blaschke_factorize(aux)
    diag.update(
        auxiliary_degree=degree(aux),
        origin_order=fact.origin_order,
        disc_zeros=int(fact.disc_zeros.size),
        boundary_zeros=int(fact.boundary_zeros.size),
        root_residual=fact.residual,
    )
    return Majorant(p, fact, diag)
