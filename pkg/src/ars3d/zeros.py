"""Zero classification for the scalar curves that describe locus crossings.

Curves are small frozen dataclasses with vectorized ``value``/``deriv``.
:func:`zero_classify` decides the global zero structure from the
coefficients (never from a grid) and then locates zeros inside a window
by splitting it at critical points and bisecting each monotone piece.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import linalg2

IDENTICALLY_ZERO = "IdenticallyZero"
CONSTANT_NONZERO = "ConstantNonzero"
FINITE_ZEROS = "FiniteZeros"
INFINITE_DISCRETE = "InfiniteDiscrete"
NO_ZEROS = "NoZeros"

IDENT_TOL = 1e-12
ZERO_TOL = 1e-9
GRID_DENSITY = 512
BISECT_TOL = 1e-12


@dataclass(frozen=True)
class Affine:
    slope: float
    intercept: float

    def value(self, t):
        return self.slope * np.asarray(t, dtype=float) + self.intercept

    def deriv(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.slope)

    def magnitude(self, t):
        return np.abs(self.slope * np.asarray(t, dtype=float)) + abs(self.intercept)


@dataclass(frozen=True)
class ExpPoly:
    """``a e^{l1 t} + b e^{l2 t} + c``."""

    a: float
    b: float
    c: float
    l1: float
    l2: float

    def value(self, t):
        t = np.asarray(t, dtype=float)
        return self.a * np.exp(self.l1 * t) + self.b * np.exp(self.l2 * t) + self.c

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        return self.a * self.l1 * np.exp(self.l1 * t) + self.b * self.l2 * np.exp(self.l2 * t)

    def magnitude(self, t):
        t = np.asarray(t, dtype=float)
        return abs(self.a) * np.exp(self.l1 * t) + abs(self.b) * np.exp(self.l2 * t) + abs(self.c)


@dataclass(frozen=True)
class ExpLinear:
    """``e^{lam t} (a t + b) + c``."""

    a: float
    b: float
    c: float
    lam: float

    def value(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(self.lam * t) * (self.a * t + self.b) + self.c

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(self.lam * t) * (self.lam * (self.a * t + self.b) + self.a)

    def magnitude(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(self.lam * t) * (np.abs(self.a * t) + abs(self.b)) + abs(self.c)


@dataclass(frozen=True)
class ExpCos:
    """``amplitude e^{lam t} cos(freq t + phase) + c``."""

    amplitude: float
    lam: float
    phase: float
    c: float
    freq: float = 1.0

    def value(self, t):
        t = np.asarray(t, dtype=float)
        return self.amplitude * np.exp(self.lam * t) * np.cos(self.freq * t + self.phase) + self.c

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        arg = self.freq * t + self.phase
        return self.amplitude * np.exp(self.lam * t) * (
            self.lam * np.cos(arg) - self.freq * np.sin(arg)
        )

    def magnitude(self, t):
        t = np.asarray(t, dtype=float)
        return abs(self.amplitude) * np.exp(self.lam * t) + abs(self.c)


@dataclass(frozen=True)
class ExpAffine:
    """``a e^{lam t} + slope t + c``; arises when theta is singular."""

    a: float
    lam: float
    slope: float
    c: float

    def value(self, t):
        t = np.asarray(t, dtype=float)
        return self.a * np.exp(self.lam * t) + self.slope * t + self.c

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        return self.a * self.lam * np.exp(self.lam * t) + self.slope

    def magnitude(self, t):
        t = np.asarray(t, dtype=float)
        return abs(self.a) * np.exp(self.lam * t) + np.abs(self.slope * t) + abs(self.c)


@dataclass(frozen=True, eq=False)
class MatExpForm:
    """``<e^{tA} u, v> + tau``."""

    A: np.ndarray
    u: np.ndarray
    v: np.ndarray
    tau: float

    def __post_init__(self):
        object.__setattr__(self, "A", linalg2.as_mat2(self.A))
        object.__setattr__(self, "u", linalg2.as_vec2(self.u))
        object.__setattr__(self, "v", linalg2.as_vec2(self.v))
        object.__setattr__(self, "tau", float(self.tau))

    def _parts(self, t):
        lam, N, delta = linalg2._split(self.A)
        scale, C, S = linalg2._exp_coeffs(lam, delta, t)
        return scale, C, S, float(self.v @ self.u), float(self.v @ N @ self.u)

    def value(self, t):
        scale, C, S, p, q = self._parts(t)
        return scale * (C * p + S * q) + self.tau

    def deriv(self, t):
        lam, N, delta = linalg2._split(self.A)
        scale, C, S = linalg2._exp_coeffs(lam, delta, t)
        Au = self.A @ self.u
        return scale * (C * float(self.v @ Au) + S * float(self.v @ N @ Au))

    def magnitude(self, t):
        scale, C, S, p, q = self._parts(t)
        return scale * (np.abs(C * p) + np.abs(S * q)) + abs(self.tau)


ScalarCurve = Union[Affine, ExpPoly, ExpLinear, ExpCos, ExpAffine, MatExpForm]


@dataclass(frozen=True)
class ZeroReport:
    classification: str
    zeros: tuple
    sign_changes: tuple
    max_count: Optional[int]
    bounded: bool
    period: Optional[float] = None
    periodic: bool = False
    form_case: Optional[str] = None
    reduced: Optional[object] = None

    @property
    def unbounded(self) -> bool:
        return not self.bounded

    @property
    def crossing_count(self) -> int:
        return sum(self.sign_changes)


@dataclass(frozen=True)
class _Structure:
    classification: str
    max_count: Optional[int]
    bounded: bool
    period: Optional[float] = None
    periodic: bool = False


def _single_exp(k: float, c: float, z: float) -> _Structure:
    # k e^{lam t} + c with lam != 0, k != 0
    if abs(c) > z and k * c < 0:
        return _Structure(FINITE_ZEROS, 1, False)
    return _Structure(NO_ZEROS, 0, False)


def _constant(c: float, z: float) -> _Structure:
    if abs(c) <= z:
        return _Structure(IDENTICALLY_ZERO, None, True)
    return _Structure(CONSTANT_NONZERO, 0, True)


def _affine(m: float, q: float, z: float) -> _Structure:
    if abs(m) <= z:
        return _constant(q, z)
    return _Structure(FINITE_ZEROS, 1, False)


def _structure(curve, z: float) -> _Structure:
    if isinstance(curve, Affine):
        return _affine(curve.slope, curve.intercept, z)
    if isinstance(curve, ExpPoly):
        c = curve.c
        terms: dict[float, float] = {}
        for k, lam in ((curve.a, curve.l1), (curve.b, curve.l2)):
            if lam == 0.0:
                c += k
            else:
                terms[lam] = terms.get(lam, 0.0) + k
        terms = {lam: k for lam, k in terms.items() if abs(k) > z}
        if not terms:
            return _constant(c, z)
        if len(terms) == 1:
            (k,) = terms.values()
            return _single_exp(k, c, z)
        return _Structure(FINITE_ZEROS, 2, False)
    if isinstance(curve, ExpLinear):
        if curve.lam == 0.0:
            return _affine(curve.a, curve.b + curve.c, z)
        if abs(curve.a) <= z:
            if abs(curve.b) <= z:
                return _constant(curve.c, z)
            return _single_exp(curve.b, curve.c, z)
        return _Structure(FINITE_ZEROS, 2, False)
    if isinstance(curve, ExpAffine):
        if curve.lam == 0.0 or abs(curve.a) <= z:
            c = curve.c + (curve.a if curve.lam == 0.0 else 0.0)
            return _affine(curve.slope, c, z)
        if abs(curve.slope) <= z:
            return _single_exp(curve.a, curve.c, z)
        return _Structure(FINITE_ZEROS, 2, False)
    if isinstance(curve, ExpCos):
        R = abs(curve.amplitude)
        if R <= z:
            return _constant(curve.c, z)
        if abs(curve.freq) <= z:
            k = curve.amplitude * math.cos(curve.phase)
            if curve.lam == 0.0 or abs(k) <= z:
                return _constant(curve.c + (k if curve.lam == 0.0 else 0.0), z)
            return _single_exp(k, curve.c, z)
        period = 2.0 * math.pi / abs(curve.freq)
        if curve.lam == 0.0:
            if abs(curve.c) > R:
                return _Structure(NO_ZEROS, 0, True, period, True)
            return _Structure(INFINITE_DISCRETE, None, True, period, True)
        return _Structure(INFINITE_DISCRETE, None, False, period, False)
    raise TypeError(f"unsupported curve {type(curve).__name__}")


def reduce_matexp(curve: MatExpForm) -> tuple[object, str, float]:
    """Rewrite ``<e^{tA}u, v> + tau`` as an elementary curve.

    Returns ``(reduced, form_case, scale)``; ``scale`` bounds the size of
    the reduced coefficients and sets the identically-zero threshold.
    ``form_case`` is "1.1" or "1.2" for real eigenvalues of ``A`` ("1.2"
    when ``u`` is an eigenvector orthogonal to ``v``, so the curve is the
    constant ``tau``), "2.1" for complex eigenvalues with nonzero real part
    and "2.2" for purely imaginary ones.
    """
    A, u, v, tau = curve.A, curve.u, curve.v, curve.tau
    lam, N, delta = linalg2._split(A)
    p = float(v @ u)
    q = float(v @ N @ u)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    scale = max(1.0, nu * nv * (1.0 + np.linalg.norm(A)))
    split_tol = 1e-12 * max(1.0, float(np.sum(A * A)))
    if 4.0 * delta < -split_tol:
        mu = math.sqrt(-delta)
        case = "2.1" if abs(2.0 * lam) > 1e-12 else "2.2"
        qq = q / mu
        amp = math.hypot(p, qq)
        reduced = ExpCos(amp, lam, -math.atan2(qq, p), tau, mu)
        return reduced, case, scale
    Au = A @ u
    eig = abs(u[0] * Au[1] - u[1] * Au[0]) <= 1e-12 * max(nu * np.linalg.norm(Au), 1e-300)
    orth = abs(p) <= 1e-12 * max(nu * nv, 1e-300)
    case = "1.2" if (eig and orth) or nu == 0.0 or nv == 0.0 else "1.1"
    if 4.0 * delta > split_tol:
        w = math.sqrt(delta)
        reduced = ExpPoly(0.5 * (p + q / w), 0.5 * (p - q / w), tau, lam + w, lam - w)
    else:
        reduced = ExpLinear(q, p, tau, lam)
    return reduced, case, scale


def _bisect(f, a: float, b: float, fa: float) -> float:
    for _ in range(200):
        if b - a <= BISECT_TOL:
            break
        m = 0.5 * (a + b)
        fm = float(f(m))
        if fm == 0.0:
            return m
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _polish(curve, r: float, a: float, b: float) -> float:
    # a few Newton steps past the bisection tolerance, kept inside [a, b]
    fr = float(curve.value(r))
    for _ in range(3):
        d = float(curve.deriv(r))
        if d == 0.0 or fr == 0.0:
            break
        n = r - fr / d
        fn = float(curve.value(n))
        if not a <= n <= b or abs(fn) >= abs(fr):
            break
        r, fr = n, fn
    return r


def locate_zeros(curve, lo: float, hi: float, tol: float = ZERO_TOL,
                 density: int = GRID_DENSITY, freq: float = 1.0):
    """Zeros of ``curve`` in ``[lo, hi]`` with a sign-change flag each.

    The window is split at the critical points of the curve (sign changes
    of the derivative on a grid of ``density`` points per unit length,
    scaled by ``freq``), so every piece is monotone and holds at most one
    simple zero.  A critical point where the curve vanishes is a tangential
    zero and is reported without a sign change.
    """
    if hi < lo:
        return [], []
    if hi == lo:
        val = float(curve.value(lo))
        if abs(val) <= tol * max(1.0, float(curve.magnitude(lo))):
            return [lo], [False]
        return [], []
    n = int(max(density, density * (hi - lo) * max(1.0, freq))) + 1
    ts = np.linspace(lo, hi, n)
    d = curve.deriv(ts)
    crit = []
    for i in np.nonzero(d[:-1] * d[1:] < 0)[0]:
        crit.append(_bisect(curve.deriv, ts[i], ts[i + 1], d[i]))
    for i in np.nonzero(d[1:-1] == 0.0)[0]:
        crit.append(float(ts[i + 1]))
    pts = np.array(sorted(set([lo, hi] + crit)))
    vals = curve.value(pts)
    small = np.abs(vals) <= tol * np.maximum(1.0, curve.magnitude(pts))
    dv = curve.deriv(pts)
    zeros, flags = [], []
    for i, p in enumerate(pts):
        if small[i]:
            zeros.append(float(p))
            at_edge = i == 0 or i == len(pts) - 1
            flags.append(bool(at_edge and abs(dv[i]) > tol * max(1.0, float(curve.magnitude(p)))))
    for i in range(len(pts) - 1):
        if small[i] or small[i + 1]:
            continue
        if vals[i] * vals[i + 1] < 0:
            zeros.append(_polish(curve, _bisect(curve.value, pts[i], pts[i + 1], vals[i]), pts[i], pts[i + 1]))
            flags.append(True)
    order = np.argsort(zeros)
    return [float(zeros[k]) for k in order], [flags[k] for k in order]


def zero_classify(curve, window: tuple[float, float], tol: float = ZERO_TOL,
                  ident_tol: float = IDENT_TOL) -> ZeroReport:
    """Global zero structure of ``curve`` plus its zeros inside ``window``."""
    lo, hi = map(float, window)
    if hi < lo:
        raise ValueError("window must be nonempty")
    form_case = None
    z = ident_tol
    freq = 1.0
    if isinstance(curve, MatExpForm):
        reduced, form_case, scale = reduce_matexp(curve)
        z = ident_tol * scale
        freq = max(1.0, float(np.linalg.norm(curve.A)))
    else:
        reduced = curve
        if isinstance(curve, ExpCos):
            freq = max(1.0, abs(curve.freq))
    st = _structure(reduced, z)
    if st.classification in (IDENTICALLY_ZERO, CONSTANT_NONZERO):
        zeros, flags = [], []
    elif isinstance(reduced, Affine):
        r = -reduced.intercept / reduced.slope
        zeros, flags = ([r], [True]) if lo <= r <= hi else ([], [])
    else:
        zeros, flags = locate_zeros(curve, lo, hi, tol, freq=freq)
    return ZeroReport(
        st.classification, tuple(zeros), tuple(flags), st.max_count, st.bounded,
        st.period, st.periodic, form_case, reduced,
    )
