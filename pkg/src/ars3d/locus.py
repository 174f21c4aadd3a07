"""The singular locus Z = {F_u = 0} of a simple ARS.

``F_u(t, v) = <rho_{-t}(A v + Lambda_t xi), u>`` with ``u`` the unit normal
of the line of Delta.  For ``A != 0`` the locus is the graph of one of two
explicit homeomorphisms (H when A is invertible, I when A has rank one);
otherwise it is a stack of planes ``{t_k} x R^2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import linalg2
from .ars import SimpleARS
from .errors import SampleNotOnLocus, WrongShape
from .group import GroupElement
from .zeros import (
    FINITE_ZEROS,
    INFINITE_DISCRETE,
    ExpAffine,
    ExpLinear,
    ExpPoly,
    MatExpForm,
    ZeroReport,
    _structure,
    zero_classify,
)

ON_LOCUS_TOL = 1e-9
RANK_CUTOFF = 1e-10

PLANE_STACK = "PlaneStack"
GRAPH_OVER_PLANE = "GraphOverPlane"
HMAP = "Hmap"
IMAP = "Imap"

C_MINUS = "CMinus"
ON_LOCUS = "OnLocus"
C_PLUS = "CPlus"


@dataclass(frozen=True, eq=False)
class LocusFunction:
    sigma: SimpleARS
    u: Optional[np.ndarray] = None

    def __post_init__(self):
        u = self.sigma.normal if self.u is None else linalg2.as_vec2(self.u)
        if abs(np.linalg.norm(u) - 1.0) > 1e-12:
            raise ValueError("normal vector must have unit length")
        if abs(u @ self.sigma.line.direction) > 1e-9:
            raise ValueError("u is not normal to the line of Delta")
        object.__setattr__(self, "u", u)

    @property
    def theta(self):
        return self.sigma.theta

    def __call__(self, g: GroupElement) -> float:
        return F(self, g)


def F(Lf: LocusFunction, g: GroupElement) -> float:
    s = Lf.sigma
    x = s.A @ g.v + s.theta.lam_op(g.t) @ s.xi
    return float(Lf.u @ (s.theta.rho(-g.t) @ x))


def grad_F(Lf: LocusFunction, g: GroupElement) -> tuple[float, np.ndarray]:
    """``(dF/dt, dF/dv)``."""
    s = Lf.sigma
    th = s.theta.matrix
    R = s.theta.rho(-g.t)
    dt = float(Lf.u @ (R @ (s.xi - th @ (s.A @ g.v))))
    dv = (R @ s.A).T @ Lf.u
    return dt, dv


def plane_curve(Lf: LocusFunction):
    """``t -> <rho_{-t} Lambda_t xi, u>`` as a scalar curve.

    This is F restricted to v = 0; when A = 0 it is all of F.
    """
    s = Lf.sigma
    th = s.theta.matrix
    u = Lf.u
    if s.theta.det != 0.0:
        # rho_{-t} Lambda_t = -Lambda_{-t} = (id - rho_{-t}) theta^-1
        y = linalg2.solve2(th, s.xi)
        return MatExpForm(-th, y, -u, float(y @ u))
    # theta = diag(1, 0)
    return ExpAffine(-s.xi[0] * u[0], -1.0, s.xi[1] * u[1], s.xi[0] * u[0])


class AuditReport(NamedTuple):
    min_grad_norm: float
    violations: list
    tangential: list
    samples: int


def regular_value_audit(Lf: LocusFunction, samples, tol: float = 1e-8,
                        grad_tol: Optional[float] = None) -> AuditReport:
    """Check that the gradient of F does not vanish on locus samples.

    When A = 0 (or F does not depend on v) only the time derivative can be
    nonzero; points where it vanishes are tangential zeros of a scalar
    function and are listed under ``tangential`` instead of ``violations``.
    """
    grad_tol = tol if grad_tol is None else grad_tol
    v_free = _depends_only_on_t(Lf)
    min_norm = math.inf
    violations, tangential = [], []
    n = 0
    for g in samples:
        n += 1
        val = F(Lf, g)
        if abs(val) > tol:
            raise SampleNotOnLocus(f"|F| = {abs(val):.3g} > {tol:g} at t={g.t}, v={g.v}")
        dt, dv = grad_F(Lf, g)
        norm = math.hypot(dt, float(np.linalg.norm(dv)))
        min_norm = min(min_norm, norm)
        if norm <= grad_tol:
            (tangential if v_free else violations).append(g)
    return AuditReport(min_norm, violations, tangential, n)


def _rank(A: np.ndarray) -> int:
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > RANK_CUTOFF * max(1.0, s[0])))


def rank_one_basis(Lf: LocusFunction):
    """``(w1, w2, beta)`` with A w2 = 0, A w1 an eigenvector of theta with
    eigenvalue beta and ``<A w1, u> >= 0``."""
    A = Lf.sigma.A
    _, _, Vt = np.linalg.svd(A)
    w2 = Vt[1] / np.linalg.norm(Vt[1])
    w1 = linalg2.perp(w2)
    Aw1 = A @ w1
    if Aw1 @ Lf.u < 0:
        w1 = -w1
        Aw1 = -Aw1
    beta = float(Aw1 @ (Lf.theta.matrix @ Aw1) / (Aw1 @ Aw1))
    return w1, w2, beta


def _depends_only_on_t(Lf: LocusFunction) -> bool:
    A = Lf.sigma.A
    r = _rank(A)
    if r == 0:
        return True
    if r == 2:
        return False
    w1, _, _ = rank_one_basis(Lf)
    Aw1 = A @ w1
    return bool(abs(Aw1 @ Lf.u) <= RANK_CUTOFF * max(1.0, np.linalg.norm(Aw1)))


@dataclass(frozen=True, eq=False)
class LocusDescription:
    shape: str
    connected: bool
    component_count: float
    window: tuple
    times: tuple = ()
    period: Optional[float] = None
    periodic: bool = False
    zero_report: Optional[ZeroReport] = None
    param: Optional[str] = None
    w1: Optional[np.ndarray] = None
    w2: Optional[np.ndarray] = None
    beta: Optional[float] = None
    notes: tuple = field(default_factory=tuple)


def _limit_signs_and_crit(curve):
    """Signs at -inf and +inf and the interior critical point, if any, of a
    curve with at most one critical point."""
    def sgn(x):
        return 0.0 if x == 0 else math.copysign(1.0, x)

    if isinstance(curve, ExpPoly):
        terms = [(k, l) for k, l in ((curve.a, curve.l1), (curve.b, curve.l2)) if k != 0.0]
        c = curve.c
        def lim(direction):
            grow = [(k, l) for k, l in terms if l * direction > 0]
            if grow:
                return sgn(max(grow, key=lambda kl: abs(kl[1]))[0])
            if c != 0.0:
                return sgn(c)
            return sgn(min(terms, key=lambda kl: abs(kl[1]))[0]) if terms else 0.0
        crit = None
        if len(terms) == 2:
            (a, l1), (b, l2) = terms
            r = -b * l2 / (a * l1)
            if r > 0 and l1 != l2:
                crit = math.log(r) / (l1 - l2)
        return lim(-1), lim(1), crit
    if isinstance(curve, ExpLinear):
        a, b, c, lam = curve.a, curve.b, curve.c, curve.lam
        def lim(direction):
            if lam * direction > 0:
                return sgn(a * direction) if a != 0 else sgn(b)
            if c != 0.0:
                return sgn(c)
            return sgn(a * direction) if a != 0 else sgn(b)
        crit = -b / a - 1.0 / lam if a != 0 else None
        return lim(-1), lim(1), crit
    if isinstance(curve, ExpAffine):
        a, lam, m = curve.a, curve.lam, curve.slope
        def lim(direction):
            if lam * direction > 0 and a != 0:
                return sgn(a)
            if m != 0:
                return sgn(m * direction)
            return sgn(curve.c) if curve.c != 0 else sgn(a)
        crit = None
        if a != 0 and m != 0:
            r = -m / (a * lam)
            if r > 0:
                crit = math.log(r) / lam
        return lim(-1), lim(1), crit
    raise TypeError(type(curve).__name__)


def global_zero_count(curve, tol: float = 1e-12) -> int:
    """Exact number of real zeros of an exponential curve with at most one
    critical point (ExpPoly, ExpLinear or ExpAffine)."""
    lo, hi, crit = _limit_signs_and_crit(curve)
    if crit is None:
        return int(lo * hi < 0)
    vc = float(curve.value(crit))
    if abs(vc) <= tol * max(1.0, float(curve.magnitude(crit))):
        return 1
    sc = math.copysign(1.0, vc)
    return int(lo * sc < 0) + int(sc * hi < 0)


def describe_locus(Lf: LocusFunction, window: tuple[float, float]) -> LocusDescription:
    lo, hi = map(float, window)
    if hi < lo:
        raise ValueError("window must be nonempty")
    if not _depends_only_on_t(Lf):
        if _rank(Lf.sigma.A) == 2:
            return LocusDescription(GRAPH_OVER_PLANE, True, 1, (lo, hi), param=HMAP)
        w1, w2, beta = rank_one_basis(Lf)
        return LocusDescription(GRAPH_OVER_PLANE, True, 1, (lo, hi), param=IMAP,
                                w1=w1, w2=w2, beta=beta)
    curve = plane_curve(Lf)
    rep = zero_classify(curve, (lo, hi))
    notes = ()
    if _rank(Lf.sigma.A) != 0:
        notes = ("A has rank one with image equal to the line of Delta; F depends on t only",)
    if rep.classification == INFINITE_DISCRETE:
        count = math.inf
    elif rep.classification == FINITE_ZEROS:
        reduced = rep.reduced
        count = global_zero_count(reduced)
    else:
        count = 0
    return LocusDescription(
        PLANE_STACK, count == 1, count, (lo, hi), times=rep.zeros, period=rep.period,
        periodic=rep.periodic, zero_report=rep, notes=notes,
    )


def H(Lf: LocusFunction, g: GroupElement) -> GroupElement:
    s = Lf.sigma
    th = s.theta
    return GroupElement(g.t, linalg2.solve2(s.A, th.rho(g.t) @ g.v - th.lam_op(g.t) @ s.xi))


def H_inv(Lf: LocusFunction, g: GroupElement) -> GroupElement:
    s = Lf.sigma
    th = s.theta
    return GroupElement(g.t, th.rho(-g.t) @ (s.A @ g.v + th.lam_op(g.t) @ s.xi))


def _imap_shift(Lf: LocusFunction, t: float, w1: np.ndarray) -> float:
    s = Lf.sigma
    th = s.theta
    num = Lf.u @ (th.lam_op(-t) @ s.xi)
    den = Lf.u @ (th.rho(-t) @ (s.A @ w1))
    return float(num / den)


def I(Lf: LocusFunction, g: GroupElement, basis=None) -> GroupElement:
    w1, w2, _ = rank_one_basis(Lf) if basis is None else basis
    c = _imap_shift(Lf, g.t, w1)
    return GroupElement(g.t, (g.v @ w1 + c) * w1 + (g.v @ w2) * w2)


def I_inv(Lf: LocusFunction, g: GroupElement, basis=None) -> GroupElement:
    w1, w2, _ = rank_one_basis(Lf) if basis is None else basis
    c = _imap_shift(Lf, g.t, w1)
    return GroupElement(g.t, (g.v @ w1 - c) * w1 + (g.v @ w2) * w2)


def locus_param(desc: LocusDescription, Lf: LocusFunction, p: tuple[float, float]) -> GroupElement:
    """Point of the locus with plane coordinates ``p = (s, t)``."""
    if desc.shape != GRAPH_OVER_PLANE:
        raise WrongShape("plane stacks have no global parametrization")
    s, t = map(float, p)
    if desc.param == HMAP:
        return H(Lf, GroupElement(t, s * Lf.sigma.line.direction))
    return I(Lf, GroupElement(t, s * desc.w2), (desc.w1, desc.w2, desc.beta))


def component_of(Lf: LocusFunction, g: GroupElement, tol: float = ON_LOCUS_TOL) -> str:
    val = F(Lf, g)
    band = tol * (1.0 + float(np.linalg.norm(g.v)))
    if abs(val) <= band:
        return ON_LOCUS
    return C_PLUS if val > 0 else C_MINUS


class LocusPoint(NamedTuple):
    point: GroupElement
    index: int
    param: tuple


def locus_points(Lf: LocusFunction, window, resolution: int,
                 span: tuple[float, float] = (-5.0, 5.0), desc: Optional[LocusDescription] = None):
    """Labelled locus samples sorted by (t, parameter).

    Graphs are sampled on a ``resolution x resolution`` grid of
    ``(t, s) in window x span``; plane stacks on a grid of ``v in span^2``
    for every plane in the window, labelled by plane index.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    lo, hi = map(float, window)
    if hi < lo:
        return []
    if desc is None:
        desc = describe_locus(Lf, (lo, hi))
    grid = np.linspace(span[0], span[1], resolution)
    out = []
    if desc.shape == GRAPH_OVER_PLANE:
        for t in np.linspace(lo, hi, resolution):
            for s in grid:
                g = locus_param(desc, Lf, (s, t))
                out.append(LocusPoint(g, -1, (float(s),)))
        return out
    for k, t in enumerate(desc.times):
        for x in grid:
            for y in grid:
                out.append(LocusPoint(GroupElement(float(t), np.array([x, y])), k, (float(x), float(y))))
    return out


def locus_sample(Lf: LocusFunction, window, resolution: int,
                 span: tuple[float, float] = (-5.0, 5.0)) -> list[GroupElement]:
    return [p.point for p in locus_points(Lf, window, resolution, span)]
