import math

import numpy as np
import pytest

from ars3d.covering import (
    TWO_PI,
    circular_distance,
    flow_descends,
    locus_descends,
    project,
    quotient_distance,
    quotient_element,
    quotient_flow,
    quotient_mul,
    wrap,
)
from ars3d.errors import UnsupportedTheta
from ars3d.group import GroupElement, Theta, mul
from ars3d.locus import LocusFunction, describe_locus
from ars3d.sampling import random_ars, random_commuting
from ars3d.symmetry import LinearField

ROT = Theta.complex(0.0)


def test_project_examples():
    v = np.array([1.0, -2.0])
    q = project(ROT, GroupElement(TWO_PI, v))
    assert q.t_bar == 0.0 and np.array_equal(q.v, v)
    w = np.array([0.5, 3.0])
    prod = project(ROT, mul(ROT, GroupElement(math.pi, v), GroupElement(math.pi, w)))
    want = quotient_element(0.0, v + ROT.rho(math.pi) @ w)
    assert quotient_distance(prod, want) < 1e-12
    ident = project(ROT, GroupElement(0.0, np.zeros(2)))
    assert ident.t_bar == 0.0 and not np.any(ident.v)


def test_wrap_range():
    for t in (-1e-18, -TWO_PI, 7 * TWO_PI, 3.0, -100.0):
        r = wrap(t)
        assert 0.0 <= r < TWO_PI
    assert circular_distance(0.01, TWO_PI - 0.01) == pytest.approx(0.02)


def test_other_thetas_refused():
    for th in (Theta.complex(0.3), Theta.jordan(), Theta.diagonal(-1.0)):
        with pytest.raises(UnsupportedTheta):
            project(th, GroupElement(1.0, np.zeros(2)))


def test_project_is_homomorphism(rng):
    for _ in range(500):
        g = GroupElement(rng.uniform(-20, 20), rng.normal(size=2))
        h = GroupElement(rng.uniform(-20, 20), rng.normal(size=2))
        lhs = project(ROT, mul(ROT, g, h))
        rhs = quotient_mul(ROT, project(ROT, g), project(ROT, h))
        assert quotient_distance(lhs, rhs) <= 1e-10 * (1 + np.linalg.norm(lhs.v))


def test_flow_descends(rng):
    X = LinearField(ROT, [1.0, 2.0], [[0.5, -1.0], [1.0, 0.5]])
    g = GroupElement(TWO_PI, np.array([1.0, 0.0]))
    assert flow_descends(ROT, X, 0.0, g)
    for s in (-1.0, 0.3, 2.0):
        assert flow_descends(ROT, X, s, g)
    for _ in range(300):
        X = LinearField(ROT, rng.normal(size=2), random_commuting(rng, ROT))
        g = GroupElement(rng.uniform(-20, 20), rng.normal(size=2))
        assert flow_descends(ROT, X, rng.uniform(-2, 2), g)
    q = quotient_flow(ROT, X, 0.0, project(ROT, g))
    assert quotient_distance(q, project(ROT, g)) < 1e-12


def test_example_4_3_planes_periodic(ex43):
    d = describe_locus(LocusFunction(ex43), (-4 * math.pi, 4 * math.pi))
    mods = sorted({round(wrap(t), 8) % round(TWO_PI, 8) for t in d.times})
    np.testing.assert_allclose(mods, [0.0, math.pi / 2], atol=1e-7)


def test_locus_descends(ex43, rotation_linear, rng):
    for sigma in (ex43, rotation_linear):
        rep = locus_descends(sigma)
        assert rep.descends and rep.max_residual <= 1e-9 and not rep.mismatches
    for _ in range(20):
        sigma = random_ars(rng, ROT)
        assert locus_descends(sigma, seed=int(rng.integers(1 << 30))).descends
    with pytest.raises(UnsupportedTheta):
        locus_descends(random_ars(rng, Theta.jordan()))
