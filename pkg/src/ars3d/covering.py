"""The quotient of the rotation group by {(2 pi k, 0)}.

For theta = [[0, -1], [1, 0]] the representation rho is 2 pi periodic, so
the subgroup {(2 pi k, 0)} is central and discrete and G(theta) covers
the quotient (S^1 x R^2 as a set).  No other canonical theta has such a
subgroup, and the functions here refuse them.
"""
from __future__ import annotations

import math
from typing import NamedTuple, Optional

import numpy as np

from . import linalg2
from .ars import SimpleARS
from .errors import UnsupportedTheta
from .group import GroupElement, Theta
from .locus import LocusFunction, F, locus_points
from .symmetry import LinearField, flow

TWO_PI = 2.0 * math.pi


class QuotientElement(NamedTuple):
    t_bar: float
    v: np.ndarray


def _require_rotation(theta: Theta):
    if theta != Theta.complex(0.0):
        raise UnsupportedTheta(f"covering only modelled for Complex(0), got {theta}")


def wrap(t: float) -> float:
    r = math.fmod(t, TWO_PI)
    if r < 0:
        r += TWO_PI
    return 0.0 if r >= TWO_PI or r == 0.0 else r


def quotient_element(t_bar, v) -> QuotientElement:
    return QuotientElement(wrap(float(t_bar)), linalg2.as_vec2(v))


def project(theta: Theta, g: GroupElement) -> QuotientElement:
    _require_rotation(theta)
    return quotient_element(g.t, g.v)


def quotient_mul(theta: Theta, p: QuotientElement, q: QuotientElement) -> QuotientElement:
    _require_rotation(theta)
    return quotient_element(p.t_bar + q.t_bar, p.v + theta.rho(p.t_bar) @ q.v)


def circular_distance(a: float, b: float) -> float:
    d = abs(wrap(a) - wrap(b))
    return min(d, TWO_PI - d)


def quotient_distance(p: QuotientElement, q: QuotientElement) -> float:
    return max(circular_distance(p.t_bar, q.t_bar), float(np.max(np.abs(p.v - q.v))))


def quotient_flow(theta: Theta, X: LinearField, s: float, q: QuotientElement) -> QuotientElement:
    """Flow on the quotient, computed on the representative in [0, 2 pi)."""
    _require_rotation(theta)
    g = flow(theta, X, s, GroupElement(q.t_bar, q.v))
    return quotient_element(g.t, g.v)


def flow_descends(theta: Theta, X: LinearField, s: float, g: GroupElement, tol: float = 1e-9) -> bool:
    """``pi(phi_s(g)) == phi_s(pi(g))``."""
    _require_rotation(theta)
    up = project(theta, flow(theta, X, s, g))
    down = quotient_flow(theta, X, s, project(theta, g))
    return quotient_distance(up, down) <= tol * (1.0 + float(np.linalg.norm(up.v)))


class DescentReport(NamedTuple):
    descends: bool
    max_residual: float
    residuals: list
    mismatches: list
    samples: int


def locus_descends(sigma: SimpleARS, samples: Optional[list] = None, shifts=range(-2, 3),
                   tol: float = 1e-9, seed: int = 0) -> DescentReport:
    """Check that locus membership only depends on ``(t mod 2 pi, v)``.

    Default samples: locus points over one period plus random points.
    ``residuals`` holds ``|F(t + 2 pi k, v) - F(t, v)|`` relative to
    ``1 + |F(t, v)|``; ``mismatches`` lists points whose membership
    differs between the two copies.
    """
    _require_rotation(sigma.theta)
    Lf = LocusFunction(sigma)
    if samples is None:
        rng = np.random.default_rng(seed)
        samples = [p.point for p in locus_points(Lf, (0.0, TWO_PI), 4)]
        samples += [GroupElement(float(t), v) for t, v in
                    zip(rng.uniform(-10, 10, 32), rng.uniform(-3, 3, (32, 2)))]
    residuals, mismatches = [], []
    for g in samples:
        f0 = F(Lf, g)
        band = tol * (1.0 + float(np.linalg.norm(g.v)))
        for k in shifts:
            fk = F(Lf, GroupElement(g.t + TWO_PI * k, g.v))
            residuals.append(abs(fk - f0) / (1.0 + abs(f0)))
            if (abs(f0) <= band) != (abs(fk) <= band):
                mismatches.append((g, k))
    worst = max(residuals, default=0.0)
    return DescentReport(not mismatches and worst <= tol, worst, residuals, mismatches, len(samples))
