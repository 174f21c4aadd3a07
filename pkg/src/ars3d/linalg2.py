"""Closed-form 2x2 linear algebra.

Every 2x2 real matrix is split as ``M = lam*I + N`` with ``lam = tr(M)/2``;
the traceless part satisfies ``N @ N = delta * I`` where ``delta`` is a
quarter of the discriminant.  The sign of ``delta`` is the eigen-structure
(real distinct, repeated, complex pair) and both ``exp(tM)`` and

    Lambda^M_t = int_0^t exp(sM) ds

reduce to ``alpha*I + beta*N`` for two scalars computed per branch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import exprel

from .errors import InvalidInput, SingularMatrix

DEFAULT_CLASSIFY_TOL = 1e-9
SINGULAR_TOL = 1e-12

# |t^2 * delta| below this uses the Taylor branch of Lambda (divided
# differences in the eigenvalue split lose ~eps/(t*omega) otherwise).
_SPLIT_SERIES_BOUND = 1e-6
# |lam * t| below this evaluates the moment integrals by power series.
_MOMENT_SERIES_BOUND = 4.0

ID2 = np.eye(2)
ROT90 = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class RealDistinct:
    l1: float
    l2: float


@dataclass(frozen=True)
class RealRepeated:
    lam: float
    diagonalizable: bool


@dataclass(frozen=True)
class ComplexPair:
    lam: float
    mu: float


EigenKind = Union[RealDistinct, RealRepeated, ComplexPair]


def as_mat2(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.shape != (2, 2):
        raise InvalidInput(f"expected a 2x2 matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInput("matrix has non-finite entries")
    return M


def as_vec2(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (2,):
        raise InvalidInput(f"expected a 2-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidInput("vector has non-finite entries")
    return v


def perp(v) -> np.ndarray:
    """Rotate a 2-vector by +pi/2."""
    return np.array([-v[1], v[0]], dtype=float)


def _split(M: np.ndarray) -> tuple[float, np.ndarray, float]:
    a, b = M[0]
    c, d = M[1]
    lam = 0.5 * (a + d)
    h = 0.5 * (a - d)
    N = np.array([[h, b], [c, -h]])
    return lam, N, h * h + b * c


def classify(M, tol: float = DEFAULT_CLASSIFY_TOL) -> EigenKind:
    """Eigen-structure of ``M``; a discriminant within ``tol`` of zero counts as repeated."""
    if not tol > 0:
        raise InvalidInput("tol must be positive")
    M = as_mat2(M)
    lam, N, delta = _split(M)
    disc = 4.0 * delta
    if abs(disc) <= tol:
        return RealRepeated(lam, bool(max(abs(M[0, 1]), abs(M[1, 0])) <= tol))
    if disc > 0:
        r = math.sqrt(delta)
        return RealDistinct(lam + r, lam - r)
    return ComplexPair(lam, math.sqrt(-delta))


def _exp_coeffs(lam: float, delta: float, t):
    """Scalars (scale, C, S) with exp(tM) = scale*(C*I + S*N); ``t`` may be an array."""
    t = np.asarray(t, dtype=float)
    scale = np.exp(lam * t)
    if delta > 0:
        w = math.sqrt(delta)
        return scale, np.cosh(w * t), np.sinh(w * t) / w
    if delta < 0:
        m = math.sqrt(-delta)
        return scale, np.cos(m * t), np.sin(m * t) / m
    return scale, np.ones_like(t), t.copy()


def expm(M, t: float = 1.0) -> np.ndarray:
    """``exp(t*M)`` in closed form."""
    M = as_mat2(M)
    t = float(t)
    if not math.isfinite(t):
        raise InvalidInput("t must be finite")
    lam, N, delta = _split(M)
    scale, C, S = _exp_coeffs(lam, delta, t)
    return float(scale) * (float(C) * ID2 + float(S) * N)


def _moments(z: float, nmax: int) -> list[float]:
    """K_n(z) = int_0^1 u^n e^{zu} du for n = 0..nmax."""
    if abs(z) < _MOMENT_SERIES_BOUND:
        out = []
        for n in range(nmax + 1):
            term, total, j = 1.0, 1.0 / (n + 1), 0
            while True:
                j += 1
                term *= z / j
                inc = term / (n + j + 1)
                total += inc
                if abs(inc) <= 1e-18 * abs(total) or j > 80:
                    break
            out.append(total)
        return out
    ez = math.exp(z)
    out = [math.expm1(z) / z]
    for n in range(1, nmax + 1):
        out.append((ez - n * out[-1]) / z)
    return out


def _cexprel(w: complex) -> complex:
    # (e^w - 1)/w with an accurate complex expm1
    x, y = w.real, w.imag
    re = math.expm1(x) * math.cos(y) - 2.0 * math.sin(0.5 * y) ** 2
    im = math.exp(x) * math.sin(y)
    return complex(re, im) / w


def _lambda_coeffs(lam: float, delta: float, t: float) -> tuple[float, float]:
    if t == 0.0:
        return 0.0, 0.0
    if abs(t * t * delta) < _SPLIT_SERIES_BOUND:
        K = _moments(lam * t, 5)
        J = [K[n] * t ** (n + 1) for n in range(6)]
        alpha = J[0] + delta * J[2] / 2.0 + delta * delta * J[4] / 24.0
        beta = J[1] + delta * J[3] / 6.0 + delta * delta * J[5] / 120.0
        return alpha, beta
    if delta > 0:
        w = math.sqrt(delta)
        fp = t * float(exprel(t * (lam + w)))
        fm = t * float(exprel(t * (lam - w)))
        return 0.5 * (fp + fm), (fp - fm) / (2.0 * w)
    m = math.sqrt(-delta)
    f = t * _cexprel(complex(lam * t, m * t))
    return f.real, f.imag / m


def lambda_op(M, t: float) -> np.ndarray:
    """The integral operator ``int_0^t exp(sM) ds`` in closed form."""
    M = as_mat2(M)
    t = float(t)
    if not math.isfinite(t):
        raise InvalidInput("t must be finite")
    lam, N, delta = _split(M)
    alpha, beta = _lambda_coeffs(lam, delta, t)
    return alpha * ID2 + beta * N


def lambda_oracle(M, t: float, steps: int = 1024) -> np.ndarray:
    """Composite Simpson quadrature of ``int_0^t exp(sM) ds``.

    Independent of :func:`lambda_op`; meant for tests only.
    """
    if steps < 16:
        raise InvalidInput("steps must be >= 16")
    M = as_mat2(M)
    steps += steps % 2
    s = np.linspace(0.0, float(t), steps + 1)
    w = np.ones(steps + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    lam, N, delta = _split(M)
    scale, C, S = _exp_coeffs(lam, delta, s)
    h = float(t) / steps
    alpha = h / 3.0 * np.sum(w * scale * C)
    beta = h / 3.0 * np.sum(w * scale * S)
    return alpha * ID2 + beta * N


def solve2(M, b, tol: float = SINGULAR_TOL) -> np.ndarray:
    M = as_mat2(M)
    b = as_vec2(b)
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if abs(det) <= tol:
        raise SingularMatrix(f"|det| = {abs(det):.3g} <= {tol:g}")
    return np.array([M[1, 1] * b[0] - M[0, 1] * b[1], M[0, 0] * b[1] - M[1, 0] * b[0]]) / det


def inv2(M, tol: float = SINGULAR_TOL) -> np.ndarray:
    M = as_mat2(M)
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if abs(det) <= tol:
        raise SingularMatrix(f"|det| = {abs(det):.3g} <= {tol:g}")
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]]) / det
