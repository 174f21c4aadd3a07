"""Property suites run by ``ars3d verify`` and by the acceptance tests.

A property is a generator of random cases plus a check returning a
nonnegative residual; it passes when every residual is within its
tolerance.  Cases are plain dicts of numbers and arrays so that failing
ones can be shrunk (rounded and scaled) into a readable counterexample.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from types import SimpleNamespace
from typing import Callable, Optional

import numpy as np
from scipy.linalg import expm as dense_expm

from . import linalg2
from .ars import Distribution, SimpleARS, ar_norm, larc, make_ars, normalize, pushforward, delta_line
from .crossing import (
    REMAINS,
    exp_curve_profile,
    exp_curve_reduce,
    exp_curve_value,
    flow_curve,
)
from .errors import ARSError
from .group import (
    IDENTITY,
    AlgebraElement,
    GroupElement,
    Theta,
    dL,
    dR,
    group_exp,
    inv,
    left_invariant,
    mul,
    right_invariant,
)
from .locus import (
    GRAPH_OVER_PLANE,
    H,
    H_inv,
    I,
    I_inv,
    LocusFunction,
    F,
    describe_locus,
    grad_F,
    locus_param,
    locus_sample,
    rank_one_basis,
    regular_value_audit,
)
from .sampling import (
    N_NILP,
    random_ars,
    random_automorphism,
    random_commuting,
    random_matrix_of_kind,
    random_point,
    random_theta,
    random_vector,
)
from .symmetry import Automorphism, LinearField, field_eval, flow, flow_automorphism
from .zeros import (
    FINITE_ZEROS,
    IDENTICALLY_ZERO,
    ExpCos,
    ExpLinear,
    ExpPoly,
    MatExpForm,
    reduce_matexp,
    zero_classify,
)

SUITES = ("lambda", "group", "symmetry", "ars", "locus", "crossing", "covering")
MATRIX_KINDS = ("real_distinct", "real_repeated", "complex")
FAULTS = ("noncommuting",)


@dataclass
class Property:
    name: str
    suite: str
    tol: float
    gen: Callable
    check: Callable


@dataclass
class PropertyResult:
    name: str
    suite: str
    cases: int
    max_residual: float
    tol: float
    passed: bool
    seconds: float
    counterexample: Optional[dict] = None
    skipped: int = 0


REGISTRY: list[Property] = []


def prop(suite: str, name: str, tol: float):
    def deco(gen_check):
        gen, check = gen_check()
        REGISTRY.append(Property(name, suite, tol, gen, check))
        return gen_check
    return deco


def rel(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return float(np.max(np.abs(a - b))) / scale


def _theta(case) -> Theta:
    return Theta(case["theta_kind"], float(case["theta_lam"]))


def _theta_case(theta: Theta) -> dict:
    return {"theta_kind": theta.kind, "theta_lam": theta.lam}


def _g(case, key) -> GroupElement:
    x = np.asarray(case[key], dtype=float)
    return GroupElement(float(x[0]), x[1:3].copy())


def _y(case, key) -> AlgebraElement:
    x = np.asarray(case[key], dtype=float)
    return AlgebraElement(float(x[0]), x[1:3].copy())


def _raw_field(case):
    # deliberately unvalidated so that an injected fault reaches the check
    return SimpleNamespace(xi=np.asarray(case["xi"], float), A=np.asarray(case["A"], float))


# ---------------------------------------------------------------- lambda

def _lambda_gen(kind):
    def gen(rng, fault=None):
        return {
            "M": random_matrix_of_kind(rng, kind),
            "t": float(rng.uniform(-2.0, 2.0)),
            "s": float(rng.uniform(-2.0, 2.0)),
        }
    return gen


def _lambda_checks():
    def p1(c):
        return float(np.max(np.abs(linalg2.lambda_op(c["M"], 0.0))))

    def p2(c):
        M, t = c["M"], c["t"]
        h = 1e-3
        L = lambda x: linalg2.lambda_op(M, x)
        d = (-L(t + 2 * h) + 8 * L(t + h) - 8 * L(t - h) + L(t - 2 * h)) / (12 * h)
        return rel(d, linalg2.expm(M, t))

    def p3(c):
        M, t, s = c["M"], c["t"], c["s"]
        lhs = linalg2.lambda_op(M, t + s)
        rhs = linalg2.lambda_op(M, t) + linalg2.expm(M, t) @ linalg2.lambda_op(M, s)
        return rel(lhs, rhs)

    def p4(c):
        M, t = c["M"], c["t"]
        return rel(linalg2.expm(M, t) - M @ linalg2.lambda_op(M, t), np.eye(2))

    def p5(c):
        M, t, s = c["M"], c["t"], c["s"]
        E, L = linalg2.expm(M, s), linalg2.lambda_op(M, t)
        return rel(E @ L, L @ E)

    def p6(c):
        M, t = c["M"], c["t"]
        if abs(np.linalg.det(M)) < 1e-3:
            return 0.0
        return rel(linalg2.lambda_op(M, t), (linalg2.expm(M, t) - np.eye(2)) @ np.linalg.inv(M))

    return [("property1_zero", p1), ("property2_derivative", p2), ("property3_cocycle", p3),
            ("property4_fundamental", p4), ("property5_commutation", p5), ("property6_invertible", p6)]


LAMBDA_CHECKS = dict(_lambda_checks())

for _kind in MATRIX_KINDS:
    for _name, _chk in _lambda_checks():
        REGISTRY.append(Property(f"{_name}[{_kind}]", "lambda", 1e-9, _lambda_gen(_kind), _chk))


@prop("lambda", "property7_diag_closed_form", 1e-9)
def _():
    def gen(rng, fault=None):
        lam = float(rng.uniform(0.05, 2.0) * rng.choice([-1, 1]))
        return {"lam": lam, "t": float(rng.uniform(-3, 3))}

    def check(c):
        lam, t = c["lam"], c["t"]
        if lam == 0.0:
            return 0.0
        want = np.array([[math.expm1(t * lam) / lam, 0.0], [0.0, t]])
        return rel(linalg2.lambda_op(np.diag([lam, 0.0]), t), want)
    return gen, check


@prop("lambda", "lambda_vs_simpson", 1e-8)
def _():
    def gen(rng, fault=None):
        kind = MATRIX_KINDS[rng.integers(3)]
        return {"M": random_matrix_of_kind(rng, kind, 0.5), "t": float(rng.uniform(-10, 10))}

    def check(c):
        return rel(linalg2.lambda_op(c["M"], c["t"]), linalg2.lambda_oracle(c["M"], c["t"], 4096))
    return gen, check


# ----------------------------------------------------------------- group

def _group_gen(n_points=3, n_vecs=1):
    def gen(rng, fault=None):
        c = _theta_case(random_theta(rng))
        for i in range(n_points):
            c[f"g{i}"] = random_point(rng).as_array()
        for i in range(n_vecs):
            c[f"y{i}"] = random_vector(rng).as_array()
        c["s"] = float(rng.uniform(-2, 2))
        c["r"] = float(rng.uniform(-2, 2))
        return c
    return gen


@prop("group", "associativity", 1e-10)
def _():
    def check(c):
        th = _theta(c)
        g, h, k = _g(c, "g0"), _g(c, "g1"), _g(c, "g2")
        lhs = mul(th, mul(th, g, h), k).as_array()
        rhs = mul(th, g, mul(th, h, k)).as_array()
        return rel(lhs, rhs)
    return _group_gen(), check


@prop("group", "inverse", 1e-10)
def _():
    def check(c):
        th = _theta(c)
        g = _g(c, "g0")
        return max(rel(mul(th, g, inv(th, g)).as_array(), np.zeros(3)),
                   rel(mul(th, inv(th, g), g).as_array(), np.zeros(3)))
    return _group_gen(), check


@prop("group", "exp_one_parameter", 1e-9)
def _():
    def check(c):
        th = _theta(c)
        Y = _y(c, "y0")
        s, r = c["s"], c["r"]
        lhs = group_exp(th, Y.scaled(s + r)).as_array()
        rhs = mul(th, group_exp(th, Y.scaled(s)), group_exp(th, Y.scaled(r))).as_array()
        return rel(lhs, rhs)
    return _group_gen(), check


def rk4_exp(theta: Theta, Y: AlgebraElement, steps: int = 100) -> GroupElement:
    """Integrate the left-invariant field of Y from the identity to s = 1."""
    def f(x):
        return np.concatenate([[Y.a], theta.rho(x[0]) @ Y.w])

    x = np.zeros(3)
    h = 1.0 / steps
    for _ in range(steps):
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
    return GroupElement.from_array(x)


@prop("group", "exp_vs_rk4", 1e-6)
def _():
    def check(c):
        th = _theta(c)
        Y = _y(c, "y0")
        return rel(group_exp(th, Y).as_array(), rk4_exp(th, Y).as_array())
    return _group_gen(), check


@prop("group", "left_invariant_is_dL", 1e-12)
def _():
    def check(c):
        th = _theta(c)
        g, Y = _g(c, "g0"), _y(c, "y0")
        return rel(left_invariant(th, Y, g).as_array(), dL(th, g, Y).as_array())
    return _group_gen(), check


@prop("group", "right_invariant_is_dR", 1e-12)
def _():
    def check(c):
        th = _theta(c)
        g, Y = _g(c, "g0"), _y(c, "y0")
        return rel(right_invariant(th, Y, g).as_array(), dR(th, g, IDENTITY, Y).as_array())
    return _group_gen(), check


# -------------------------------------------------------------- symmetry

def _field_gen(rng, fault=None):
    th = random_theta(rng)
    c = _theta_case(th)
    c["A"] = random_commuting(rng, th)
    if fault == "noncommuting":
        c["A"] = c["A"] + np.array([[0.0, 0.0], [1.0, 0.0]]) * rng.uniform(0.5, 1.0)
    c["xi"] = rng.normal(size=2)
    c["s"] = float(rng.uniform(-2, 2))
    c["r"] = float(rng.uniform(-2, 2))
    c["g0"] = random_point(rng).as_array()
    c["g1"] = random_point(rng).as_array()
    return c


@prop("symmetry", "field_commutes_with_theta", 1e-9)
def _():
    def check(c):
        th = _theta(c).matrix
        A = np.asarray(c["A"], float)
        return float(np.max(np.abs(A @ th - th @ A)))
    return _field_gen, check


@prop("symmetry", "flow_is_automorphism", 1e-9)
def _():
    def check(c):
        th = _theta(c)
        X = _raw_field(c)
        g, h, s = _g(c, "g0"), _g(c, "g1"), c["s"]
        lhs = flow(th, X, s, mul(th, g, h)).as_array()
        rhs = mul(th, flow(th, X, s, g), flow(th, X, s, h)).as_array()
        return rel(lhs, rhs)
    return _field_gen, check


@prop("symmetry", "flow_semigroup", 1e-9)
def _():
    def check(c):
        th = _theta(c)
        X = _raw_field(c)
        g, s, r = _g(c, "g0"), c["s"], c["r"]
        return rel(flow(th, X, s, flow(th, X, r, g)).as_array(), flow(th, X, s + r, g).as_array())
    return _field_gen, check


@prop("symmetry", "flow_derivative_is_field", 1e-6)
def _():
    def check(c):
        th = _theta(c)
        X = _raw_field(c)
        g = _g(c, "g0")
        h = 1e-6
        d = (flow(th, X, h, g).as_array() - flow(th, X, -h, g).as_array()) / (2 * h)
        return rel(d, field_eval(th, X, g).as_array())
    return _field_gen, check


@prop("symmetry", "derivation_exponential", 1e-9)
def _():
    def check(c):
        th = _theta(c)
        X = _raw_field(c)
        s = c["s"]
        D = np.zeros((3, 3))
        D[1:, 0] = X.xi
        D[1:, 1:] = X.A
        want = dense_expm(s * D)
        got = np.zeros((3, 3))
        got[0, 0] = 1.0
        got[1:, 0] = linalg2.lambda_op(X.A, s) @ X.xi
        got[1:, 1:] = linalg2.expm(X.A, s)
        return rel(got, want)
    return _field_gen, check


def _aut_gen(rng, fault=None):
    th = random_theta(rng)
    if rng.random() < 0.3:
        th = [Theta.complex(0.0), Theta.diagonal(-1.0)][rng.integers(2)]
    psi = random_automorphism(rng, th)
    c = _theta_case(th)
    c.update(eps=psi.eps, P=psi.P, eta=psi.eta, g0=random_point(rng).as_array(),
             g1=random_point(rng).as_array())
    return c


@prop("symmetry", "automorphism_homomorphism", 1e-9)
def _():
    def check(c):
        th = _theta(c)
        try:
            psi = Automorphism(th, int(c["eps"]), c["P"], c["eta"])
        except ARSError:
            return math.inf
        g, h = _g(c, "g0"), _g(c, "g1")
        return rel(psi(mul(th, g, h)).as_array(), mul(th, psi(g), psi(h)).as_array())
    return _aut_gen, check


# ------------------------------------------------------------------- ars

def _ars_case(rng, rank=None, gram=True, time_direction=False, theta=None):
    sigma = random_ars(rng, theta=theta, rank=rank, gram=gram, time_direction=time_direction)
    c = _theta_case(sigma.theta)
    c.update(xi=sigma.xi.copy(), A=sigma.A.copy(),
             basis=np.array([b.as_array() for b in sigma.delta.basis]),
             gram=sigma.delta.gram.copy())
    return c


def _ars(c) -> SimpleARS:
    th = _theta(c)
    delta = Distribution.from_rows(np.asarray(c["basis"], float), np.asarray(c["gram"], float))
    return make_ars(th, LinearField(th, c["xi"], c["A"]), delta)


def _isometry_gen(rng, fault=None):
    c = _ars_case(rng)
    psi = random_automorphism(rng, _theta(c))
    c.update(eps=psi.eps, P=psi.P, eta=psi.eta, g0=random_point(rng).as_array(),
             y0=random_vector(rng).as_array())
    return c


@prop("ars", "pushforward_isometry", 1e-8)
def _():
    def check(c):
        th = _theta(c)
        sigma = _ars(c)
        psi = Automorphism(th, int(c["eps"]), c["P"], c["eta"])
        g, Z = _g(c, "g0"), _y(c, "y0")
        sp = pushforward(sigma, psi)
        a = ar_norm(sp, g, Z)
        b = ar_norm(sigma, psi(g), psi.differential(g, Z))
        if math.isinf(a) and math.isinf(b):
            return 0.0
        return abs(a - b) / max(1.0, abs(b))
    return _isometry_gen, check


@prop("ars", "larc_invariant_under_pushforward", 0.0)
def _():
    def check(c):
        th = _theta(c)
        sigma = _ars(c)
        psi = Automorphism(th, int(c["eps"]), c["P"], c["eta"])
        sp = pushforward(sigma, psi)
        return float(larc(th, sp.X, sp.delta).satisfied != larc(th, sigma.X, sigma.delta).satisfied)
    return _isometry_gen, check


@prop("ars", "subalgebra_line_is_A_invariant", 1e-9)
def _():
    def gen(rng, fault=None):
        th = random_theta(rng)
        while th == Theta.diagonal(1.0):
            th = random_theta(rng)
        c = _theta_case(th)
        c["A"] = random_commuting(rng, th)
        c["which"] = int(rng.integers(2))
        return c

    def check(c):
        th = _theta(c)
        A = np.asarray(c["A"], float)
        ev, V = np.linalg.eig(th.matrix)
        if np.iscomplexobj(ev) and np.any(np.abs(ev.imag) > 0):
            return 0.0  # no real eigenline, so no subalgebra
        d = np.real(V[:, int(c["which"])])
        d = d / np.linalg.norm(d)
        Ad = A @ d
        return abs(Ad[0] * d[1] - Ad[1] * d[0]) / max(1.0, np.linalg.norm(Ad))
    return gen, check


@prop("ars", "ar_norm_left_invariant_on_delta", 1e-9)
def _():
    def gen(rng, fault=None):
        c = _ars_case(rng)
        c["coef"] = rng.normal(size=2)
        c["g0"] = random_point(rng).as_array()
        c["g1"] = random_point(rng).as_array()
        return c

    def check(c):
        sigma = _ars(c)
        Lf = LocusFunction(sigma)
        y1, y2 = sigma.delta.orthonormal()
        Y = AlgebraElement(c["coef"][0] * y1.a + c["coef"][1] * y2.a,
                           c["coef"][0] * y1.w + c["coef"][1] * y2.w)
        vals = []
        for key in ("g0", "g1"):
            g = _g(c, key)
            if abs(F(Lf, g)) < 1e-3:
                return 0.0  # locus points use a different representative
            vals.append(ar_norm(sigma, g, left_invariant(sigma.theta, Y, g)))
        return abs(vals[0] - vals[1]) / max(1.0, vals[1])
    return gen, check


@prop("ars", "normalization_exact", 0.0)
def _():
    def gen(rng, fault=None):
        c = _ars_case(rng, rank=2)
        c["prefer"] = int(rng.integers(2))
        return c

    def check(c):
        sigma = _ars(c)
        prefer = ("delta", "xi")[int(c["prefer"])]
        new, psi = normalize(sigma, prefer)
        if prefer == "xi":
            return float(np.max(np.abs(new.xi)))
        hit = [b for b in new.delta.basis if b.a != 0.0 and not np.any(b.w)]
        return 0.0 if hit else 1.0
    return gen, check


# ----------------------------------------------------------------- locus

def _locus_gen(rank):
    def gen(rng, fault=None):
        th = random_theta(rng, "complex" if rank == 2 and rng.random() < 0.3 else None)
        if rank == 1:
            while th.kind == "complex":
                th = random_theta(rng)
        c = _ars_case(rng, rank=rank, theta=th)
        c["g0"] = random_point(rng).as_array()
        return c
    return gen


@prop("locus", "F_of_H_is_linear", 1e-9)
def _():
    def check(c):
        sigma = _ars(c)
        Lf = LocusFunction(sigma)
        g = _g(c, "g0")
        return abs(F(Lf, H(Lf, g)) - float(g.v @ Lf.u))
    return _locus_gen(2), check


@prop("locus", "F_of_I_rank_one", 1e-9)
def _():
    def check(c):
        sigma = _ars(c)
        Lf = LocusFunction(sigma)
        g = _g(c, "g0")
        w1, w2, beta = rank_one_basis(Lf)
        want = math.exp(-beta * g.t) * float(g.v @ w1) * float((sigma.A @ w1) @ Lf.u)
        return abs(F(Lf, I(Lf, g)) - want)
    return _locus_gen(1), check


@prop("locus", "H_inverse", 1e-10)
def _():
    def check(c):
        Lf = LocusFunction(_ars(c))
        g = _g(c, "g0")
        return max(rel(H(Lf, H_inv(Lf, g)).as_array(), g.as_array()),
                   rel(H_inv(Lf, H(Lf, g)).as_array(), g.as_array()))
    return _locus_gen(2), check


@prop("locus", "I_inverse", 1e-10)
def _():
    def check(c):
        Lf = LocusFunction(_ars(c))
        g = _g(c, "g0")
        return max(rel(I(Lf, I_inv(Lf, g)).as_array(), g.as_array()),
                   rel(I_inv(Lf, I(Lf, g)).as_array(), g.as_array()))
    return _locus_gen(1), check


@prop("locus", "grad_matches_finite_differences", 1e-6)
def _():
    def check(c):
        Lf = LocusFunction(_ars(c))
        g = _g(c, "g0")
        h = 1e-6
        dt, dv = grad_F(Lf, g)
        fd = np.zeros(3)
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            fd[i] = (F(Lf, GroupElement.from_array(g.as_array() + e))
                     - F(Lf, GroupElement.from_array(g.as_array() - e))) / (2 * h)
        return rel(np.concatenate([[dt], dv]), fd)
    return _locus_gen(None), check


@prop("locus", "regular_value_on_samples", 1e-8)
def _():
    def gen(rng, fault=None):
        rank = [1, 2][rng.integers(2)]
        return _locus_gen(rank)(rng)

    def check(c):
        Lf = LocusFunction(_ars(c))
        desc = describe_locus(Lf, (-2.0, 2.0))
        pts = locus_sample(Lf, (-2.0, 2.0), 8)
        worst = max(abs(F(Lf, g)) for g in pts)
        rep = regular_value_audit(Lf, pts)
        ok = desc.shape == GRAPH_OVER_PLANE and desc.connected and not rep.violations
        return worst if ok else math.inf
    return gen, check


# -------------------------------------------------------------- crossing

@prop("crossing", "closed_form_vs_product", 1e-9)
def _():
    def gen(rng, fault=None):
        c = _ars_case(rng)
        c.update(g0=random_point(rng).as_array(), y0=random_vector(rng).as_array(),
                 s=float(rng.uniform(-2, 2)))
        if rng.random() < 0.2:
            c["y0"][0] = 0.0
        return c

    def check(c):
        sigma = _ars(c)
        th = sigma.theta
        g, Y, s = _g(c, "g0"), _y(c, "y0"), c["s"]
        direct = F(LocusFunction(sigma), mul(th, g, group_exp(th, Y.scaled(s))))
        return max(abs(exp_curve_value(sigma, g, Y, s) - direct),
                   abs(float(exp_curve_reduce(sigma, g, Y).value(s)) - direct)) / max(1.0, abs(direct))
    return gen, check


def random_scalar_curve(rng):
    k = rng.integers(3)
    if k == 0:
        a, b = rng.normal(size=2)
        if rng.random() < 0.3:
            (a, b) = (a, 0.0) if rng.random() < 0.5 else (0.0, b)
        l1, l2 = rng.uniform(-1, 1, 2)
        return ExpPoly(float(a), float(b), float(rng.normal()), float(l1), float(l2))
    if k == 1:
        a, b, cc = rng.normal(size=3)
        if rng.random() < 0.3:
            a = 0.0
        return ExpLinear(float(a), float(b), float(cc), float(rng.uniform(-1, 1)))
    lam = 0.0 if rng.random() < 0.4 else float(rng.uniform(-0.3, 0.3))
    return ExpCos(float(rng.normal()), lam, float(rng.uniform(-3, 3)), float(rng.normal()))


def sign_scan_count(curve, lo=-20.0, hi=20.0, n=10_000):
    v = curve.value(np.linspace(lo, hi, n + 1))
    s = np.sign(v)
    s = s[s != 0]
    return int(np.sum(s[:-1] != s[1:]))


def ceiling(curve) -> Optional[int]:
    """The zero bound for the elementary forms; None means unbounded."""
    if isinstance(curve, ExpPoly):
        a = curve.a if curve.l1 != 0 else 0.0
        b = curve.b if curve.l2 != 0 else 0.0
        if a == 0.0 and b == 0.0:
            return None if curve.c == 0.0 else 0
        return 1 if a * b == 0.0 else 2
    if isinstance(curve, ExpLinear):
        return 2 if curve.a != 0.0 else 1
    if isinstance(curve, ExpCos):
        return None
    return None


@prop("crossing", "zero_count_ceiling_and_oracle", 0.0)
def _():
    def gen(rng, fault=None):
        cur = random_scalar_curve(rng)
        return {"kind": type(cur).__name__, "params": np.array(list(cur.__dict__.values()), float)}

    def check(c):
        cls = {"ExpPoly": ExpPoly, "ExpLinear": ExpLinear, "ExpCos": ExpCos}[c["kind"]]
        cur = cls(*map(float, c["params"]))
        rep = zero_classify(cur, (-20.0, 20.0))
        cap = ceiling(cur)
        bad = 0.0
        if rep.classification == FINITE_ZEROS and rep.max_count is not None:
            bad += len(rep.zeros) > rep.max_count
        if cap is not None:
            bad += len(rep.zeros) > cap
        bad += abs(rep.crossing_count - sign_scan_count(cur))
        return float(bad)
    return gen, check


@prop("crossing", "degenerate_case_detection", 0.0)
def _():
    def gen(rng, fault=None):
        S = rng.normal(size=(2, 2))
        while abs(np.linalg.det(S)) < 0.2:
            S = rng.normal(size=(2, 2))
        l1, l2 = rng.uniform(-1, 1, 2)
        D = np.diag([l1, l2]) if rng.random() < 0.5 else l1 * np.eye(2) + rng.uniform(0.2, 1) * N_NILP
        A = S @ D @ np.linalg.inv(S)
        # e1 is an eigenvector of D, so S e1 is one of A
        eig_u = bool(rng.random() < 0.5)
        u = S[:, 0] / np.linalg.norm(S[:, 0]) if eig_u else rng.normal(size=2)
        orth = bool(rng.random() < 0.5)
        v = linalg2.perp(u) * rng.normal() if orth else rng.normal(size=2)
        return {"A": A, "u": u, "v": v, "tau": float(rng.normal()), "special": float(eig_u and orth)}

    def check(c):
        _, case, _ = reduce_matexp(MatExpForm(c["A"], c["u"], c["v"], c["tau"]))
        return float((case == "1.2") != bool(c["special"]))
    return gen, check


@prop("crossing", "no_remains_from_off_locus", 0.0)
def _():
    def gen(rng, fault=None):
        c = _ars_case(rng, rank=[1, 2][rng.integers(2)] if rng.random() < 0.3 else 2,
                      theta=random_theta(rng, ["jordan", "diagonal"][rng.integers(2)]))
        c.update(g0=random_point(rng).as_array(), y0=random_vector(rng).as_array())
        return c

    def check(c):
        sigma = _ars(c)
        g = _g(c, "g0")
        if abs(F(LocusFunction(sigma), g)) <= 1e-6:
            return 0.0
        return float(exp_curve_profile(sigma, g, _y(c, "y0"), (-3.0, 3.0)).behavior == REMAINS)
    return gen, check


def on_locus_case(rng, fault=None):
    """An on-locus base point and a direction; a third of the directions
    are built so that the curve vanishes identically."""
    c = _ars_case(rng, rank=2, theta=random_theta(rng))
    sigma = _ars(c)
    Lf = LocusFunction(sigma)
    desc = describe_locus(Lf, (-2, 2))
    g = locus_param(desc, Lf, (float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2))))
    if rng.random() < 1 / 3:
        w = linalg2.solve2(sigma.A, sigma.line.direction) * rng.normal()
        Y = AlgebraElement(0.0, w)
    else:
        Y = random_vector(rng)
    c.update(g0=g.as_array(), y0=Y.as_array())
    return c


@prop("crossing", "on_locus_dichotomy", 0.0)
def _():
    def check(c):
        sigma = _ars(c)
        g, Y = _g(c, "g0"), _y(c, "y0")
        prof = exp_curve_profile(sigma, g, Y, (-3.0, 3.0))
        grid = np.linspace(-3.0, 3.0, 1000)
        vals = np.abs(prof.curve.value(grid))
        scale = float(np.max(prof.curve.magnitude(grid)))
        if prof.behavior == REMAINS:
            return float(np.max(vals) > 1e-9 * max(1.0, scale))
        d = prof.delta
        if d is None or d <= 0:
            return 1.0
        near = np.concatenate([np.linspace(-d, 0, 1001)[1:-1], np.linspace(0, d, 1001)[1:-1]])
        return float(np.any(prof.curve.value(near) == 0.0))
    return on_locus_case, check


@prop("crossing", "flow_remains_when_line_invariant", 1e-9)
def _():
    def gen(rng, fault=None):
        lam = float(rng.uniform(-1, 0.9))
        th = Theta.diagonal(lam)
        A = np.diag(rng.normal(size=2))
        xi = np.array([rng.normal(), rng.choice([-1, 1]) * rng.uniform(0.5, 2)])
        c = _theta_case(th)
        c.update(xi=xi, A=A, basis=np.array([[1.0, 0, 0], [0, 1.0, 0]]), gram=np.eye(2),
                 p=rng.uniform(-2, 2, 2))
        return c

    def check(c):
        sigma = _ars(c)
        Lf = LocusFunction(sigma)
        if abs(np.linalg.det(sigma.A)) < 1e-3:
            return 0.0
        g = locus_param(describe_locus(Lf, (-2, 2)), Lf, tuple(c["p"]))
        cur = flow_curve(sigma, g)
        return float(np.max(np.abs(cur.value(np.linspace(-2, 2, 1000)))))
    return gen, check


# -------------------------------------------------------------- covering

def _rot_gen(rng, fault=None):
    th = Theta.complex(0.0)
    c = _ars_case(rng, theta=th, rank=[0, 2][rng.integers(2)])
    c.update(g0=random_point(rng, 10.0).as_array(), g1=random_point(rng, 10.0).as_array(),
             s=float(rng.uniform(-2, 2)))
    return c


@prop("covering", "project_homomorphism", 1e-10)
def _():
    from .covering import project, quotient_distance, quotient_mul

    def check(c):
        th = _theta(c)
        g, h = _g(c, "g0"), _g(c, "g1")
        up = project(th, mul(th, g, h))
        down = quotient_mul(th, project(th, g), project(th, h))
        return quotient_distance(up, down) / (1.0 + float(np.linalg.norm(up.v)))
    return _rot_gen, check


@prop("covering", "flow_descends", 0.0)
def _():
    from .covering import flow_descends

    def check(c):
        th = _theta(c)
        X = LinearField(th, c["xi"], c["A"])
        return float(not flow_descends(th, X, c["s"], _g(c, "g0")))
    return _rot_gen, check


@prop("covering", "locus_set_invariance", 1e-9)
def _():
    from .covering import locus_descends

    def check(c):
        rep = locus_descends(_ars(c))
        return rep.max_residual if rep.descends else math.inf
    return _rot_gen, check


# ---------------------------------------------------------------- runner

def _evaluate(p: Property, case) -> float:
    try:
        r = float(p.check(case))
    except (ARSError, ArithmeticError, np.linalg.LinAlgError) as exc:
        case["error"] = f"{type(exc).__name__}: {exc}"
        return math.inf
    return r if math.isfinite(r) or r == math.inf else math.inf


def _shrink_value(x, op):
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return x
    if isinstance(x, (float, np.floating)):
        return float(op(np.array(x)))
    if isinstance(x, np.ndarray):
        return op(x)
    return x


_FROZEN = {"theta_kind", "theta_lam", "eps", "kind", "special", "which", "prefer"}


def shrink(p: Property, case: dict, steps: int = 40) -> dict:
    """Greedy shrink: round then scale numeric fields while the case still fails."""
    best = dict(case)
    ops = [lambda a, d=d: np.round(a, d) for d in (0, 1, 2)] + [lambda a: a * 0.5]
    for _ in range(steps):
        improved = False
        for key in list(best):
            if key in _FROZEN:
                continue
            for op in ops:
                trial = dict(best)
                trial[key] = _shrink_value(best[key], op)
                if _same(trial[key], best[key]):
                    continue
                if _evaluate(p, trial) > p.tol and "error" not in trial:
                    best = trial
                    improved = True
                    break
        if not improved:
            break
    return best


def _same(a, b) -> bool:
    try:
        return bool(np.array_equal(np.asarray(a), np.asarray(b)))
    except Exception:
        return False


def run_property(p: Property, rng: np.random.Generator, cases: int, fault: Optional[str] = None) -> PropertyResult:
    t0 = time.perf_counter()
    worst = 0.0
    failing = None
    for _ in range(cases):
        case = p.gen(rng, fault)
        r = _evaluate(p, case)
        if r > worst:
            worst = r
        if r > p.tol and failing is None:
            failing = case
    ce = None
    if failing is not None:
        ce = shrink(p, failing)
        ce["residual"] = _evaluate(p, dict(ce))
    return PropertyResult(p.name, p.suite, cases, worst, p.tol, failing is None,
                          time.perf_counter() - t0, ce)


def run_suite(suite: str = "all", seed: int = 0, cases: int = 100, fault: Optional[str] = None) -> list[PropertyResult]:
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    results = []
    for i, p in enumerate(REGISTRY):
        if suite != "all" and p.suite != suite:
            continue
        # one child stream per property keeps suites independent of each other
        rng = np.random.default_rng([seed, i])
        results.append(run_property(p, rng, cases, fault))
    return results


def properties(suite: str = "all") -> list[Property]:
    return [p for p in REGISTRY if suite == "all" or p.suite == suite]


def get_property(name: str) -> Property:
    for p in REGISTRY:
        if p.name == name:
            return p
    raise KeyError(name)


def format_case(case: dict) -> str:
    parts = []
    for k, v in case.items():
        if isinstance(v, np.ndarray):
            v = np.array2string(v, precision=6, separator=",").replace("\n", "")
        parts.append(f"{k}={v}")
    return " ".join(parts)
