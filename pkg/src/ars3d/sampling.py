"""Random valid objects for property checks.

Everything takes a ``numpy.random.Generator`` so runs are reproducible
from one seed.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from .ars import Distribution, SimpleARS, make_ars
from .errors import ARSError
from .group import AlgebraElement, GroupElement, Theta
from .symmetry import Automorphism, LinearField

FAMILIES = ("jordan", "diagonal", "complex")
N_NILP = np.array([[0.0, 1.0], [0.0, 0.0]])
J_ROT = np.array([[0.0, -1.0], [1.0, 0.0]])


def random_theta(rng: np.random.Generator, family: Optional[str] = None) -> Theta:
    family = family or FAMILIES[rng.integers(3)]
    if family == "jordan":
        return Theta.jordan()
    lam = float(rng.uniform(-1.0, 1.0))
    if family == "diagonal":
        # the endpoints and 0 have their own structure; hit them now and then
        r = rng.random()
        if r < 0.1:
            lam = float(rng.choice([-1.0, 0.0, 1.0]))
        return Theta.diagonal(lam)
    if rng.random() < 0.25:
        lam = 0.0
    return Theta.complex(lam)


def random_matrix_of_kind(rng: np.random.Generator, kind: str, scale: float = 1.0) -> np.ndarray:
    """A random 2x2 matrix with real distinct, real repeated (Jordan) or
    complex eigenvalues."""
    S = rng.normal(size=(2, 2))
    while abs(np.linalg.det(S)) < 0.2:
        S = rng.normal(size=(2, 2))
    l1, l2 = rng.uniform(-1.0, 1.0, 2) * scale
    if kind == "real_distinct":
        D = np.diag([l1, l2 + np.sign(l2 - l1 or 1.0) * 0.1])
    elif kind == "real_repeated":
        D = l1 * np.eye(2) + rng.uniform(0.2, 1.0) * scale * N_NILP
    elif kind == "complex":
        D = l1 * np.eye(2) + rng.uniform(0.2, 1.0) * scale * J_ROT
    else:
        raise ValueError(kind)
    return S @ D @ np.linalg.inv(S)


def commutant_basis(theta: Theta) -> list:
    """A basis of {A : A theta = theta A}."""
    if theta.kind == "jordan":
        return [np.eye(2), N_NILP.copy()]
    if theta.kind == "complex":
        return [np.eye(2), J_ROT.copy()]
    if theta.lam == 1.0:
        return [np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), N_NILP.copy(), N_NILP.T.copy()]
    return [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]


def random_commuting(rng: np.random.Generator, theta: Theta, rank: Optional[int] = None,
                     scale: float = 1.0) -> np.ndarray:
    """Random A commuting with theta, optionally of a given rank.

    Rank one is impossible for complex theta and raises ValueError.
    """
    if rank == 0:
        return np.zeros((2, 2))
    if rank == 1:
        if theta.kind == "complex":
            raise ValueError("no rank-one matrix commutes with a complex theta")
        c = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 1.5) * scale)
        if theta.kind == "jordan":
            return c * N_NILP
        if theta.lam == 1.0:
            x, y = rng.normal(size=2), rng.normal(size=2)
            return np.outer(x, y) * scale / max(np.linalg.norm(x) * np.linalg.norm(y), 1e-3)
        return np.diag([c, 0.0]) if rng.random() < 0.5 else np.diag([0.0, c])
    while True:
        coeffs = rng.normal(size=len(commutant_basis(theta))) * scale
        A = sum(c * B for c, B in zip(coeffs, commutant_basis(theta)))
        if rank is None or abs(np.linalg.det(A)) > 0.05 * scale * scale:
            return A


def random_distribution(rng: np.random.Generator, time_direction: bool = False,
                        gram: bool = False) -> Distribution:
    while True:
        rows = rng.normal(size=(2, 3))
        if time_direction:
            rows[0] = [1.0, 0.0, 0.0]
            rows[1, 0] = 0.0
        G = np.eye(2)
        if gram:
            M = rng.normal(size=(2, 2))
            G = M @ M.T + 0.5 * np.eye(2)
        try:
            D = Distribution.from_rows(rows, G)
            d = rows[0, 0] * rows[1, 1:] - rows[1, 0] * rows[0, 1:]
            if np.linalg.norm(d) > 0.1:
                return D
        except ARSError:
            pass


def random_ars(rng: np.random.Generator, theta: Optional[Theta] = None, rank: Optional[int] = None,
               gram: bool = False, time_direction: bool = False, tries: int = 200) -> SimpleARS:
    """A random simple ARS that passes every validation."""
    theta = theta or random_theta(rng)
    for _ in range(tries):
        A = random_commuting(rng, theta, rank)
        xi = rng.normal(size=2)
        delta = random_distribution(rng, time_direction=time_direction, gram=gram)
        try:
            return make_ars(theta, LinearField(theta, xi, A), delta)
        except ARSError:
            continue
    raise RuntimeError(f"could not sample a valid ARS for {theta}")


def random_automorphism(rng: np.random.Generator, theta: Theta, eps: Optional[int] = None) -> Automorphism:
    """Random automorphism; ``eps = -1`` only exists for traceless theta."""
    if eps is None:
        eps = -1 if theta.trace == 0.0 and rng.random() < 0.5 else 1
    while True:
        if eps == 1:
            P = random_commuting(rng, theta, rank=2)
        elif theta == Theta.complex(0.0):
            a, b = rng.normal(size=2)
            P = np.array([[a, b], [b, -a]])
        elif theta == Theta.diagonal(-1.0):
            a, b = rng.normal(size=2)
            P = np.array([[0.0, a], [b, 0.0]])
        else:
            raise ValueError(f"no orientation-reversing automorphism for {theta}")
        if abs(np.linalg.det(P)) > 0.1:
            return Automorphism(theta, eps, P, rng.normal(size=2))


def random_point(rng: np.random.Generator, t_scale: float = 2.0, v_scale: float = 2.0) -> GroupElement:
    return GroupElement(float(rng.uniform(-t_scale, t_scale)), rng.uniform(-v_scale, v_scale, 2))


def random_vector(rng: np.random.Generator, scale: float = 1.0) -> AlgebraElement:
    return AlgebraElement(float(rng.normal() * scale), rng.normal(size=2) * scale)
