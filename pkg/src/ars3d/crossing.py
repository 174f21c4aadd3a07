"""How exponential curves and flow lines meet the singular locus.

Both problems reduce to a scalar curve in the elementary forms handled by
:mod:`ars3d.zeros`, whose coefficient-level classification decides between
"never crosses", "crosses discretely" and "stays in the locus".
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg2
from .ars import SimpleARS
from .group import AlgebraElement, GroupElement, group_exp, mul
from .locus import LocusFunction, component_of, F, _rank
from .symmetry import flow
from .zeros import (
    CONSTANT_NONZERO,
    IDENTICALLY_ZERO,
    NO_ZEROS,
    Affine,
    ExpAffine,
    MatExpForm,
    ZeroReport,
    zero_classify,
)

STAYS = "StaysInComponent"
DISCRETE = "DiscreteCrossings"
REMAINS = "RemainsInLocus"


@dataclass(frozen=True, eq=False)
class CrossingProfile:
    behavior: str
    zeros: tuple
    sign_changes: tuple
    base_point: GroupElement
    direction: Optional[AlgebraElement]
    window: tuple
    report: ZeroReport
    components: tuple = ()
    delta: Optional[float] = None
    best_effort: bool = False
    curve: object = None


def _normal(sigma: SimpleARS, u=None) -> np.ndarray:
    return sigma.normal if u is None else linalg2.as_vec2(u)


def exp_curve_value(sigma: SimpleARS, g: GroupElement, Y: AlgebraElement, s: float, u=None) -> float:
    """``F_u(g exp(sY))`` from the closed form, without forming the product."""
    u = _normal(sigma, u)
    th = sigma.theta
    A, xi = sigma.A, sigma.xi
    w = np.asarray(Y.w, dtype=float)
    z = A @ g.v + th.lam_op(g.t) @ xi
    if Y.a == 0.0:
        return float(u @ (th.rho(-g.t) @ z) + s * (u @ (A @ w)))
    a = Y.a
    first = u @ (th.rho(-g.t - a * s) @ z)
    second = u @ (th.lam_op(-a * s) @ (A @ w + a * xi)) / a
    return float(first - second)


def exp_curve_reduce(sigma: SimpleARS, g: GroupElement, Y: AlgebraElement, u=None):
    """``s -> F_u(g exp(sY))`` as an Affine, MatExpForm or ExpAffine curve."""
    u = _normal(sigma, u)
    th = sigma.theta
    A, xi = sigma.A, sigma.xi
    w = np.asarray(Y.w, dtype=float)
    z = A @ g.v + th.lam_op(g.t) @ xi
    p = th.rho(-g.t) @ z
    if Y.a == 0.0:
        return Affine(float(u @ (A @ w)), float(u @ p))
    a = float(Y.a)
    y = A @ w + a * xi
    if th.det != 0.0:
        # Lambda_r = (rho_r - id) theta^-1
        q = linalg2.solve2(th.matrix, y) / a
        return MatExpForm(-a * th.matrix, p - q, u, float(q @ u))
    # theta = diag(1, 0): Lambda_r = diag(e^r - 1, r)
    k = y[0] * u[0] / a
    return ExpAffine(p[0] * u[0] - k, -a, y[1] * u[1], p[1] * u[1] + k)


def _segment_labels(Lf: LocusFunction, point_at, zeros, lo, hi):
    cuts = [lo] + list(zeros) + [hi]
    labels = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b <= a:
            continue
        labels.append(component_of(Lf, point_at(0.5 * (a + b))))
    return tuple(labels)


def _certified_delta(zeros, lo, hi, tol=1e-9) -> float:
    """Distance from 0 to the nearest zero other than 0 itself, capped by
    the window edges."""
    others = [abs(z) for z in zeros if abs(z) > tol]
    edges = [abs(e) for e in (lo, hi) if abs(e) > tol]
    cands = others + edges
    return min(cands) if cands else 0.0


def _behavior(rep: ZeroReport) -> str:
    if rep.classification == IDENTICALLY_ZERO:
        return REMAINS
    if rep.classification in (CONSTANT_NONZERO, NO_ZEROS) or not rep.zeros:
        return STAYS
    return DISCRETE


def exp_curve_profile(sigma: SimpleARS, g: GroupElement, Y: AlgebraElement, window,
                      tol: float = 1e-9) -> CrossingProfile:
    """Classify how ``s -> g exp(sY)`` meets the locus for ``s`` in ``window``.

    With ``A = 0`` the result is flagged ``best_effort``; the trichotomy
    for exponential curves is only established for ``A != 0``.
    """
    lo, hi = map(float, window)
    Lf = LocusFunction(sigma)
    curve = exp_curve_reduce(sigma, g, Y)
    rep = zero_classify(curve, (lo, hi), tol)
    behavior = _behavior(rep)
    on_locus = component_of(Lf, g) == "OnLocus"
    if behavior == REMAINS and not on_locus:
        # a curve through g that vanishes identically passes through g
        raise AssertionError("identically zero crossing curve from a point off the locus")
    zeros = rep.zeros if behavior == DISCRETE else ()
    flags = rep.sign_changes if behavior == DISCRETE else ()

    def point_at(s):
        return mul(sigma.theta, g, group_exp(sigma.theta, Y.scaled(s)))

    labels = (_segment_labels(Lf, point_at, zeros, lo, hi) if behavior != REMAINS else ("OnLocus",))
    delta = None
    if on_locus and behavior != REMAINS:
        delta = _certified_delta(rep.zeros, lo, hi)
    return CrossingProfile(
        behavior, tuple(zeros), tuple(flags), g, Y, (lo, hi), rep, labels, delta,
        best_effort=_rank(sigma.A) == 0, curve=curve,
    )


def flow_curve(sigma: SimpleARS, g: GroupElement, u=None) -> MatExpForm:
    """``s -> F_u(phi_s(g)) = <e^{sA} rho_{-t}(A v + Lambda_t xi), u>``."""
    u = _normal(sigma, u)
    th = sigma.theta
    p = th.rho(-g.t) @ (sigma.A @ g.v + th.lam_op(g.t) @ sigma.xi)
    return MatExpForm(sigma.A, p, u, 0.0)


def flow_crossing(sigma: SimpleARS, g: GroupElement, window, tol: float = 1e-9) -> CrossingProfile:
    lo, hi = map(float, window)
    Lf = LocusFunction(sigma)
    curve = flow_curve(sigma, g)
    rep = zero_classify(curve, (lo, hi), tol)
    d = sigma.line.direction
    Ad = sigma.A @ d
    invariant_line = abs(Ad[0] * d[1] - Ad[1] * d[0]) <= tol * max(1.0, float(np.linalg.norm(Ad)))
    if invariant_line:
        # A^T u is parallel to u, so the curve is e^{s mu} F(g)
        on = abs(curve.value(0.0)) <= tol * (1.0 + float(np.linalg.norm(g.v)))
        behavior = REMAINS if on else STAYS
    else:
        behavior = _behavior(rep)
    zeros = rep.zeros if behavior == DISCRETE else ()
    flags = rep.sign_changes if behavior == DISCRETE else ()

    def point_at(s):
        return flow(sigma.theta, sigma.X, s, g)

    labels = (_segment_labels(Lf, point_at, zeros, lo, hi) if behavior != REMAINS else ("OnLocus",))
    delta = None
    if behavior != REMAINS and component_of(Lf, g) == "OnLocus":
        delta = _certified_delta(rep.zeros, lo, hi)
    return CrossingProfile(
        behavior, tuple(zeros), tuple(flags), g, None, (lo, hi), rep, labels, delta, curve=curve,
    )


def flow_curve_direct(sigma: SimpleARS, g: GroupElement, s: float) -> float:
    return F(LocusFunction(sigma), flow(sigma.theta, sigma.X, s, g))
