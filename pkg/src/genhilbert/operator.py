"""The generalized Hilbert operator in its two forms.

Coefficient side: the Hankel matrix with entries mu_{n+k} acting on Taylor
coefficients. Integral side: f -> int f(t) / (1 - t z) d mu(t). Both are
implemented independently so that their agreement is a real check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .errors import ConvergenceError, ParameterError
from .hardy import as_coeffs, evaluate, hp_norm
from .measure import (DEFAULT_QUADRATURE, Measure, MomentSequence, QuadratureSpec, integrate,
                      moments_up_to)

__all__ = [
    "ApplyReport",
    "HankelTruncation",
    "agreement_check",
    "apply",
    "default_z_grid",
    "hankel_apply_fast",
    "hankel_apply_naive",
    "image_hq_norm",
    "integral_apply",
    "operator_norm_estimate",
]

DEFAULT_N = 4096


@dataclass(frozen=True)
class HankelTruncation:
    """N x N section of the matrix (mu_{n+k}); only the 2N-1 moments are stored."""

    moments: np.ndarray
    N: int

    def __post_init__(self):
        mu = np.asarray(self.moments, dtype=np.float64)
        if self.N < 1:
            raise ParameterError(f"dimension must be >= 1, got {self.N}")
        if mu.ndim != 1 or mu.shape[0] < 2 * self.N - 1:
            raise ParameterError(f"an {self.N}x{self.N} truncation needs {2 * self.N - 1} moments, got {mu.shape[0]}")
        mu = mu[:2 * self.N - 1].copy()
        mu.setflags(write=False)
        object.__setattr__(self, "moments", mu)

    @classmethod
    def from_measure(cls, mu: Measure, N: int, q: QuadratureSpec = DEFAULT_QUADRATURE) -> "HankelTruncation":
        return cls(moments_up_to(mu, 2 * N - 2, q).values, N)

    @classmethod
    def from_moments(cls, seq, N: int) -> "HankelTruncation":
        vals = seq.values if isinstance(seq, MomentSequence) else seq
        return cls(vals, N)

    def dense(self) -> np.ndarray:
        idx = np.arange(self.N)
        return self.moments[idx[:, None] + idx[None, :]]

    @cached_property
    def _transform_length(self) -> int:
        return 1 << max(0, (2 * self.N - 2).bit_length())

    @cached_property
    def _moment_spectrum(self) -> np.ndarray:
        return np.fft.fft(self.moments, n=self._transform_length)


@dataclass(frozen=True)
class ApplyReport:
    output: np.ndarray
    method: str
    residual: float | None = None


def _padded(T: HankelTruncation, a) -> np.ndarray:
    a = as_coeffs(a)
    if a.shape[0] > T.N:
        raise ParameterError(f"coefficient vector of length {a.shape[0]} exceeds truncation size {T.N}")
    out = np.zeros(T.N, dtype=np.complex128)
    out[:a.shape[0]] = a
    return out


def hankel_apply_naive(T: HankelTruncation, a) -> np.ndarray:
    """b_n = sum_{k<N} mu_{n+k} a_k by direct O(N^2) summation."""
    return kernels.hankel_matvec(T.moments, _padded(T, a))


def hankel_apply_fast(T: HankelTruncation, a) -> np.ndarray:
    """Same product in O(N log N).

    With a reversed, b_n is entry n + N - 1 of the linear convolution of the
    moments with the reversed vector; a cyclic convolution of length at
    least 2N - 1 has no wrap-around at those entries.
    """
    x = _padded(T, a)[::-1]
    conv = np.fft.ifft(T._moment_spectrum * np.fft.fft(x, n=T._transform_length))
    return conv[T.N - 1:2 * T.N - 1]


def _relative_residual(x, ref) -> float:
    scale = np.linalg.norm(ref)
    diff = np.linalg.norm(x - ref)
    return float(diff / scale) if scale > 0 else float(diff)


def apply(T: HankelTruncation, a, method: str = "fast") -> ApplyReport:
    """Apply the truncation with ``"fast"``, ``"naive"`` or ``"both"`` (reports the residual)."""
    if method == "fast":
        return ApplyReport(hankel_apply_fast(T, a), "fast")
    if method == "naive":
        return ApplyReport(hankel_apply_naive(T, a), "naive")
    if method == "both":
        fast = hankel_apply_fast(T, a)
        naive = hankel_apply_naive(T, a)
        return ApplyReport(fast, "fast", _relative_residual(fast, naive))
    raise ParameterError(f"unknown method {method!r}")


def integral_apply(mu: Measure, f, z, q: QuadratureSpec = DEFAULT_QUADRATURE):
    """int f(t) / (1 - t z) d mu(t) for |z| < 1 (scalar or array of points)."""
    a = as_coeffs(f)
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if np.any(np.abs(zz) >= 1.0):
        raise ParameterError("integral form needs |z| < 1")

    def integrand(t, omt):
        ft = kernels.horner(a, t.astype(np.complex128))
        # 1 - t z written as (1 - z) + z (1 - t) to keep digits when t is near 1
        denom = (1.0 - zz)[None, :] + zz[None, :] * omt[:, None]
        return ft[:, None] / denom

    value, _ = integrate(mu, integrand, q)
    value = np.asarray(value, dtype=np.complex128)
    return value[0] if np.ndim(z) == 0 else value.reshape(np.shape(z))


def default_z_grid() -> np.ndarray:
    """16 points: radii 0.5 and 0.9 at 8 equispaced angles."""
    angles = 2.0 * np.pi * np.arange(8) / 8
    return np.concatenate([r * np.exp(1j * angles) for r in (0.5, 0.9)])


def truncation_for_tail(mass: float, coeff_l1: float, radius: float, min_n: int, tol: float = 1e-13,
                        cap: int = 1 << 16) -> int:
    """Smallest power of two N >= min_n with mass * |a|_1 * radius^N / (1 - radius) < tol.

    Uses |b_n| <= mu_n |a|_1 <= mu_0 |a|_1, valid for every measure.
    """
    N = 1 << max(0, (max(min_n, 1) - 1).bit_length())
    bound = lambda n: mass * coeff_l1 * radius ** n / (1.0 - radius)  # noqa: E731
    while bound(N) >= tol:
        N *= 2
        if N > cap:
            raise ParameterError(f"tail control needs more than {cap} terms at radius {radius}")
    return N


def agreement_check(mu: Measure, f, z_grid=None, N: int | None = None,
                    q: QuadratureSpec = DEFAULT_QUADRATURE, moments: MomentSequence | None = None) -> float:
    """max over the grid of |sum_{n<N} b_n z^n - I(f)(z)| / (1 + |I(f)(z)|).

    ``moments`` replaces the measure's own moment sequence on the
    coefficient side (used to check that the test detects corrupted input).
    """
    a = as_coeffs(f)
    zs = default_z_grid() if z_grid is None else np.asarray(z_grid, dtype=np.complex128)
    r = float(np.max(np.abs(zs)))
    if r > 0.9 + 1e-12:
        raise ParameterError("agreement grid must lie in |z| <= 0.9")
    if moments is None:
        mass = moments_up_to(mu, 0, q).values[0]
    else:
        mass = float(moments.values[0])
    if N is None:
        N = truncation_for_tail(mass, float(np.sum(np.abs(a))), r, a.shape[0])
    if moments is None:
        moments = moments_up_to(mu, 2 * N - 2, q)
    T = HankelTruncation.from_moments(moments, N)
    b = hankel_apply_fast(T, a)
    series = evaluate(b, zs)
    integral = integral_apply(mu, a, zs, q)
    return float(np.max(np.abs(series - integral) / (1.0 + np.abs(integral))))


def operator_norm_estimate(T: HankelTruncation, iterations: int = 100000, tol: float = 1e-10,
                           seed_check: bool = False) -> float:
    """Largest singular value of the truncation by power iteration.

    The matrix is a moment (Gram) matrix, hence positive semidefinite, so
    the top eigenvalue is the top singular value. Iteration starts from
    the normalized all-ones vector and stops once successive Rayleigh
    quotients agree to ``tol`` relative. ``seed_check`` repeats the run
    from a fixed random start and requires agreement.
    """
    if T.N < 2:
        raise ParameterError("power iteration needs N >= 2")
    value = _power_iteration(T, np.ones(T.N), iterations, tol)
    if seed_check:
        alt = _power_iteration(T, np.random.default_rng(12345).random(T.N), iterations, tol)
        if abs(alt - value) > 100 * tol * max(value, 1e-300):
            raise ConvergenceError("power iteration depends on its starting vector", (value, alt))
    return value


def _power_iteration(T, v, iterations, tol):
    v = v / np.linalg.norm(v)
    prev = None
    for _ in range(iterations):
        w = hankel_apply_fast(T, v).real
        rq = float(np.dot(v, w))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        if prev is not None and abs(rq - prev) <= tol * abs(rq):
            return rq
        prev = rq
        v = w / nw
    raise ConvergenceError(f"power iteration did not converge in {iterations} steps", prev)


def image_hq_norm(mu: Measure, f, q_exp: float, N: int = DEFAULT_N,
                  q: QuadratureSpec = DEFAULT_QUADRATURE, moments: MomentSequence | None = None) -> float:
    """H^q norm of the N-term truncation of the image of f."""
    a = as_coeffs(f)
    N = max(N, a.shape[0])
    if moments is None:
        moments = moments_up_to(mu, 2 * N - 2, q)
    T = HankelTruncation.from_moments(moments, N)
    return hp_norm(hankel_apply_fast(T, a), q_exp)
