import math

import numpy as np
import pytest
from scipy.linalg import expm as dense_expm

from ars3d.errors import InvalidAutomorphism, InvalidLinearField
from ars3d.group import IDENTITY, AlgebraElement, GroupElement, Theta, mul
from ars3d.sampling import random_automorphism, random_commuting, random_theta
from ars3d.symmetry import (
    Automorphism,
    LinearField,
    aut_apply,
    check_automorphism,
    check_derivation,
    field_eval,
    field_singularities_check,
    flow,
    flow_automorphism,
)

JORDAN = Theta.jordan()


def test_check_derivation_examples():
    assert check_derivation(Theta.diagonal(0.3), [1, 2], np.diag([4.0, -7.0]))
    assert check_derivation(JORDAN, [1, 3], [[2, 1], [0, 2]])
    assert not check_derivation(JORDAN, [1, 3], [[2, 1], [1, 2]])
    assert check_derivation(Theta.diagonal(1.0), [0, 0], [[1, 2], [3, 4]])


def test_check_automorphism_examples():
    assert check_automorphism(Theta.diagonal(-1.0), -1, [[0, 1], [1, 0]], [0, 0])
    assert not check_automorphism(Theta.diagonal(-0.5), -1, [[0, 1], [1, 0]], [0, 0])
    assert not check_automorphism(JORDAN, -1, np.eye(2), [0, 0])
    assert not check_automorphism(JORDAN, 1, np.zeros((2, 2)), [0, 0])
    with pytest.raises(InvalidAutomorphism):
        Automorphism(JORDAN, 1, [[1, 0], [1, 1]], [0, 0])


def test_aut_apply_examples():
    g = GroupElement(0.8, np.array([1.0, -2.0]))
    ident = Automorphism.identity(JORDAN)
    np.testing.assert_array_equal(aut_apply(JORDAN, ident, g).as_array(), g.as_array())
    P = np.array([[2.0, 1.0], [0.0, 2.0]])
    phi = Automorphism(JORDAN, 1, P, [3.0, 4.0])
    np.testing.assert_allclose(phi(GroupElement(0.0, np.array([1.0, 1.0]))).v, P @ [1.0, 1.0])
    psi2 = Automorphism(JORDAN, 1, np.eye(2), np.zeros(2) / 1.0)
    np.testing.assert_array_equal(psi2(g).as_array(), g.as_array())


def test_linear_field_validation():
    with pytest.raises(InvalidLinearField):
        LinearField(Theta.complex(0.0), [1, 0], np.diag([1.0, 2.0]))


def test_field_eval_examples():
    X = LinearField(JORDAN, [1, 3], [[2, 1], [0, 2]])
    np.testing.assert_array_equal(field_eval(JORDAN, X, IDENTITY).as_array(), np.zeros(3))
    for t, x, y in [(0.3, 1.0, -2.0), (-1.2, 0.5, 0.7), (2.0, -3.0, 1.0)]:
        e = math.exp(t)
        want = [0.0, 2 * x + y + 3 * t * e - 2 * e + 2, 2 * y + 3 * (e - 1)]
        np.testing.assert_allclose(field_eval(JORDAN, X, GroupElement(t, np.array([x, y]))).as_array(), want,
                                   atol=1e-13)
    rot = Theta.complex(0.0)
    a, b = 0.6, -1.7
    X = LinearField(rot, [a, b], np.zeros((2, 2)))
    for t in (0.4, 2.5, -3.0):
        want = [0.0, a * math.sin(t) + b * (math.cos(t) - 1), a * (1 - math.cos(t)) + b * math.sin(t)]
        np.testing.assert_allclose(field_eval(rot, X, GroupElement(t, np.array([9.0, 9.0]))).as_array(), want,
                                   atol=1e-14)


def test_flow_examples(rng):
    X = LinearField(JORDAN, [1, 3], [[2, 1], [0, 2]])
    g = GroupElement(0.7, np.array([1.0, 2.0]))
    np.testing.assert_allclose(flow(JORDAN, X, 0.0, g).as_array(), g.as_array(), atol=0)
    for s in (-1.0, 0.5, 2.0):
        np.testing.assert_array_equal(flow(JORDAN, X, s, IDENTITY).as_array(), np.zeros(3))
    th = Theta.diagonal(1.0)
    X = LinearField(th, [0, 0], np.eye(2))
    np.testing.assert_allclose(flow(th, X, 0.8, g).as_array(), [0.7, math.exp(0.8), 2 * math.exp(0.8)], rtol=1e-15)


def test_singularity_examples():
    X = LinearField(JORDAN, [1, 3], [[2, 1], [0, 2]])
    assert field_singularities_check(JORDAN, X, IDENTITY)
    th = Theta.diagonal(1.0)
    X = LinearField(th, [0, 0], np.eye(2))
    assert field_singularities_check(th, X, GroupElement(3.0, np.zeros(2)))
    assert not field_singularities_check(th, X, GroupElement(3.0, np.array([1e-3, 0.0])))


def _rk4_flow(th, X, s, g, n=200):
    x = g.as_array()
    h = s / n
    f = lambda y: field_eval(th, X, GroupElement.from_array(y)).as_array()
    for _ in range(n):
        k1 = f(x)
        k2 = f(x + h / 2 * k1)
        k3 = f(x + h / 2 * k2)
        k4 = f(x + h * k3)
        x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return x


def _random_field(rng):
    th = random_theta(rng)
    return th, LinearField(th, rng.normal(size=2), random_commuting(rng, th))


def test_flow_matches_rk4(rng):
    for _ in range(30):
        th, X = _random_field(rng)
        g = GroupElement(rng.uniform(-1, 1), rng.normal(size=2))
        s = rng.uniform(-1, 1)
        np.testing.assert_allclose(flow(th, X, s, g).as_array(), _rk4_flow(th, X, s, g), atol=1e-8)


def test_flow_is_automorphism_and_group(rng):
    for _ in range(200):
        th, X = _random_field(rng)
        g = GroupElement(rng.uniform(-2, 2), rng.normal(size=2))
        h = GroupElement(rng.uniform(-2, 2), rng.normal(size=2))
        s, r = rng.uniform(-1.5, 1.5, 2)
        lhs = flow(th, X, s, mul(th, g, h)).as_array()
        rhs = mul(th, flow(th, X, s, g), flow(th, X, s, h)).as_array()
        assert np.max(np.abs(lhs - rhs)) <= 1e-9 * max(1.0, np.max(np.abs(lhs)))
        np.testing.assert_allclose(flow(th, X, s, flow(th, X, r, g)).as_array(), flow(th, X, s + r, g).as_array(),
                                   atol=1e-9 * max(1.0, np.max(np.abs(lhs))))
        phi = flow_automorphism(th, X, s)
        np.testing.assert_allclose(phi(g).as_array(), flow(th, X, s, g).as_array(), atol=1e-12)


def test_derivation_exponential(rng):
    for _ in range(100):
        th, X = _random_field(rng)
        s = rng.uniform(-2, 2)
        phi = flow_automorphism(th, X, s)
        cols = [phi.differential(IDENTITY, AlgebraElement.from_array(e)).as_array() for e in np.eye(3)]
        np.testing.assert_allclose(np.column_stack(cols), dense_expm(s * X.derivation()), atol=1e-9)


def test_automorphism_homomorphism_including_reversals(rng):
    for th in (Theta.complex(0.0), Theta.diagonal(-1.0), JORDAN, Theta.diagonal(0.2)):
        for _ in range(50):
            psi = random_automorphism(rng, th)
            g = GroupElement(rng.uniform(-2, 2), rng.normal(size=2))
            h = GroupElement(rng.uniform(-2, 2), rng.normal(size=2))
            np.testing.assert_allclose(psi(mul(th, g, h)).as_array(), mul(th, psi(g), psi(h)).as_array(), atol=1e-9)


def test_automorphism_differential_and_inverse(rng):
    th = Theta.complex(0.0)
    for _ in range(30):
        psi = random_automorphism(rng, th)
        g = GroupElement(rng.uniform(-2, 2), rng.normal(size=2))
        Z = AlgebraElement(rng.normal(), rng.normal(size=2))
        h = 1e-6
        fd = (psi(GroupElement.from_array(g.as_array() + h * Z.as_array())).as_array()
              - psi(GroupElement.from_array(g.as_array() - h * Z.as_array())).as_array()) / (2 * h)
        np.testing.assert_allclose(psi.differential(g, Z).as_array(), fd, atol=1e-6)
        back = psi.inverse()(psi(g))
        np.testing.assert_allclose(back.as_array(), g.as_array(), atol=1e-12)
        comp = psi.compose(psi.inverse())
        np.testing.assert_allclose(comp.P, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(comp.eta, 0.0, atol=1e-12)
        Zi = psi.differential_at_identity_inverse(psi.differential(IDENTITY, Z))
        np.testing.assert_allclose(Zi.as_array(), Z.as_array(), atol=1e-12)
