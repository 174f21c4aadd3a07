import math

import numpy as np
import pytest

from ars3d.errors import SampleNotOnLocus, WrongShape
from ars3d.group import GroupElement, Theta
from ars3d.locus import (
    C_MINUS,
    C_PLUS,
    GRAPH_OVER_PLANE,
    HMAP,
    IMAP,
    ON_LOCUS,
    PLANE_STACK,
    F,
    H,
    H_inv,
    I,
    I_inv,
    LocusFunction,
    component_of,
    describe_locus,
    grad_F,
    locus_param,
    locus_points,
    locus_sample,
    rank_one_basis,
    regular_value_audit,
)
from ars3d.sampling import random_ars, random_point, random_theta

TWO_PI = 2 * math.pi


def test_F_examples(ex44, make, rot):
    L = LocusFunction(ex44)
    for t, x in [(0.4, 2.0), (-1.3, -5.0), (2.0, 0.1)]:
        assert abs(F(L, GroupElement(t, np.array([x, 1.5 * (1 - math.exp(t))])))) < 1e-12
    s = make(rot, [1, 0], np.zeros((2, 2)), [[1, 0, 0], [0, 1, 0]])
    L = LocusFunction(s)
    assert abs(F(L, GroupElement(TWO_PI, np.array([3.0, -7.0])))) < 1e-14
    assert abs(F(L, GroupElement(1.0, np.zeros(2)))) > 0.1
    for sigma in (ex44, s):
        assert F(LocusFunction(sigma), GroupElement(0.0, np.zeros(2))) == 0.0


def test_locus_function_rejects_bad_normal(ex44):
    with pytest.raises(ValueError):
        LocusFunction(ex44, np.array([1.0, 0.0]))
    assert F(LocusFunction(ex44, np.array([0.0, -1.0])), GroupElement(0.0, np.array([0.0, 1.0]))) == -2.0


def test_grad_example(ex44):
    dt, dv = grad_F(LocusFunction(ex44), GroupElement(0.0, np.zeros(2)))
    assert dv[1] == pytest.approx(2.0)
    assert dv[0] == pytest.approx(0.0)
    assert dt == pytest.approx(3.0)


def test_grad_matches_central_differences(rng):
    h = 1e-6
    for _ in range(200):
        L = LocusFunction(random_ars(rng))
        g = random_point(rng)
        dt, dv = grad_F(L, g)
        fd_t = (F(L, GroupElement(g.t + h, g.v)) - F(L, GroupElement(g.t - h, g.v))) / (2 * h)
        assert abs(fd_t - dt) <= 1e-6 * max(1.0, abs(dt))
        for i in range(2):
            e = np.eye(2)[i] * h
            fd = (F(L, GroupElement(g.t, g.v + e)) - F(L, GroupElement(g.t, g.v - e))) / (2 * h)
            assert abs(fd - dv[i]) <= 1e-6 * max(1.0, abs(dv[i]))


def test_component_labels(ex44):
    L = LocusFunction(ex44)
    assert component_of(L, GroupElement(0.0, np.array([0.0, 1.0]))) == C_PLUS
    assert component_of(L, GroupElement(0.0, np.zeros(2))) == ON_LOCUS
    assert component_of(L, GroupElement(0.0, np.array([0.0, -1.0]))) == C_MINUS


def test_describe_example_4_3(ex43):
    d = describe_locus(LocusFunction(ex43), (0.0, 4 * math.pi))
    assert d.shape == PLANE_STACK
    assert not d.connected and d.component_count == math.inf
    assert d.periodic and d.period == pytest.approx(TWO_PI)
    np.testing.assert_allclose(d.times, [0, math.pi / 2, TWO_PI, 2.5 * math.pi, 4 * math.pi], atol=1e-9)


def test_example_4_3_gamma_set(make, rot, rng):
    for _ in range(20):
        a, b = rng.normal(size=2)
        s = make(rot, [a, b], np.zeros((2, 2)), [[1, 0, 0], [0, 1, 0]])
        d = describe_locus(LocusFunction(s), (-10.0, 10.0))
        gamma = math.atan2(b, a)
        want = {2 * (gamma - math.pi * k) for k in range(-6, 7)} | {TWO_PI * k for k in range(-3, 4)}
        want = sorted(w for w in want if -10 <= w <= 10)
        got = list(d.times)
        assert len(got) == len(want)
        np.testing.assert_allclose(got, want, atol=1e-8)


def test_describe_graphs(ex44, rank_one):
    d = describe_locus(LocusFunction(ex44), (-2, 2))
    assert d.shape == GRAPH_OVER_PLANE and d.param == HMAP and d.connected
    d = describe_locus(LocusFunction(rank_one), (-2, 2))
    assert d.shape == GRAPH_OVER_PLANE and d.param == IMAP and d.connected
    A = rank_one.A
    np.testing.assert_allclose(A @ d.w2, 0.0, atol=1e-14)
    Aw1 = A @ d.w1
    assert np.linalg.norm(Aw1) > 0
    np.testing.assert_allclose(rank_one.theta.matrix @ Aw1, d.beta * Aw1, atol=1e-14)
    assert Aw1 @ rank_one.normal > 0


def test_rank_one_image_on_line_is_plane_stack(make):
    # Im A = l_Delta, so F depends on t only
    th = Theta.diagonal(0.5)
    s = make(th, [1, 2], np.diag([1.0, 0.0]), [[1, 0, 0], [0, 1, 0]])
    d = describe_locus(LocusFunction(s), (-5, 5))
    assert d.shape == PLANE_STACK
    assert d.component_count == len(d.times) == 1
    assert d.notes


def test_locus_param_example_4_4(ex44, rng):
    L = LocusFunction(ex44)
    d = describe_locus(L, (-2, 2))
    for s, t in rng.uniform(-3, 3, (20, 2)):
        g = locus_param(d, L, (s, t))
        e = math.exp(t)
        x = (s * e - 3 * t * e + 2 * e - 2) / 2 + (3 * e - 3) / 4
        np.testing.assert_allclose(g.v, [x, 1.5 * (1 - e)], atol=1e-12)
        assert g.t == t
    g = locus_param(d, L, (0.0, 0.0))
    np.testing.assert_allclose(g.v, 0.0, atol=1e-15)


def test_locus_param_wrong_shape(ex43):
    L = LocusFunction(ex43)
    with pytest.raises(WrongShape):
        locus_param(describe_locus(L, (0, 1)), L, (0, 0))


def _ars_with_rank(rng, rank):
    while True:
        th = random_theta(rng, "complex" if rank == 2 and rng.random() < 0.3 else None)
        if rank == 1 and th.kind == "complex":
            continue
        s = random_ars(rng, th, rank=rank)
        L = LocusFunction(s)
        d = describe_locus(L, (-1, 1))
        if d.shape == GRAPH_OVER_PLANE:
            return s, L, d


def test_H_identities(rng):
    for _ in range(100):
        s, L, _ = _ars_with_rank(rng, 2)
        g = random_point(rng)
        assert F(L, H(L, g)) == pytest.approx(g.v @ s.normal, abs=1e-9 * (1 + np.linalg.norm(H(L, g).v)))
        np.testing.assert_allclose(H(L, H_inv(L, g)).v, g.v, atol=1e-10 * (1 + np.linalg.norm(g.v)))
        np.testing.assert_allclose(H_inv(L, H(L, g)).v, g.v, atol=1e-10 * (1 + np.linalg.norm(g.v)))


def test_I_identities(rng):
    for _ in range(100):
        s, L, _ = _ars_with_rank(rng, 1)
        w1, w2, beta = rank_one_basis(L)
        g = random_point(rng)
        want = math.exp(-beta * g.t) * (g.v @ w1) * ((s.A @ w1) @ s.normal)
        assert F(L, I(L, g)) == pytest.approx(want, abs=1e-9 * (1 + abs(want)))
        np.testing.assert_allclose(I(L, I_inv(L, g)).v, g.v, atol=1e-10)
        np.testing.assert_allclose(I_inv(L, I(L, g)).v, g.v, atol=1e-10)


def test_locus_sample_residuals(ex44, ex43):
    L = LocusFunction(ex44)
    pts = locus_sample(L, (-2, 2), 50)
    assert len(pts) == 2500
    for g in pts:
        assert abs(F(L, g)) <= 1e-8
        assert 2 * g.v[1] == pytest.approx(3 * (1 - math.exp(g.t)), abs=1e-12)
    L = LocusFunction(ex43)
    pts = locus_sample(L, (0, 4 * math.pi), 3)
    assert sorted({round(g.t, 9) for g in pts}) == pytest.approx([0, math.pi / 2, TWO_PI, 2.5 * math.pi, 4 * math.pi])
    assert locus_sample(L, (1, 0), 5) == []
    with pytest.raises(ValueError):
        locus_sample(L, (0, 1), 1)


def test_locus_points_sorted(ex44):
    pts = locus_points(LocusFunction(ex44), (-1, 1), 5)
    keys = [(p.point.t,) + p.param for p in pts]
    assert keys == sorted(keys)


def test_fiber_sign_check(rng):
    # points 0.1 off the sampled surface along a transversal fiber are off the locus
    for _ in range(30):
        s, L, d = _ars_with_rank(rng, int(rng.choice([1, 2])))
        for g in locus_sample(L, (-1, 1), 5, span=(-2, 2)):
            _, dv = grad_F(L, g)
            n = dv / np.linalg.norm(dv)
            up = F(L, GroupElement(g.t, g.v + 0.1 * n))
            down = F(L, GroupElement(g.t, g.v - 0.1 * n))
            assert up > 0 > down


def test_regular_value_audit(ex44, ex43, rng):
    L = LocusFunction(ex44)
    rep = regular_value_audit(L, locus_sample(L, (-2, 2), 20))
    assert rep.violations == [] and rep.min_grad_norm > 0
    with pytest.raises(SampleNotOnLocus):
        regular_value_audit(L, [GroupElement(0.0, np.array([0.0, 1.0]))])
    rep = regular_value_audit(L, [])
    assert rep.min_grad_norm == math.inf and rep.violations == []
    L = LocusFunction(ex43)
    rep = regular_value_audit(L, locus_sample(L, (0, 4 * math.pi), 2))
    assert rep.violations == []
    for _ in range(30):
        s, L, _ = _ars_with_rank(rng, int(rng.choice([1, 2])))
        rep = regular_value_audit(L, locus_sample(L, (-2, 2), 10))
        assert rep.violations == []


def test_tangential_plane_reported_not_failed(make, rot):
    # xi = (0, 1): <Lambda_{-t} xi, e2> = sin t has simple zeros only;
    # xi = (1, 0): 1 - cos t vanishes to second order at 2 pi k
    s = make(rot, [1, 0], np.zeros((2, 2)), [[1, 0, 0], [0, 1, 0]])
    L = LocusFunction(s)
    rep = regular_value_audit(L, locus_sample(L, (-1, 7), 2))
    assert rep.violations == []
    assert len(rep.tangential) > 0
