"""Derivations, automorphisms and linear vector fields of G(theta)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg2
from .errors import InvalidAutomorphism, InvalidLinearField
from .group import AlgebraElement, GroupElement, Theta

CONSTRAINT_TOL = 1e-9


def check_derivation(theta: Theta, xi, A, tol: float = CONSTRAINT_TOL) -> bool:
    """True iff ``[[0, 0], [xi, A]]`` is a derivation, i.e. ``A theta = theta A``.

    The tolerance is relative to the size of ``A``.
    """
    A = linalg2.as_mat2(A)
    linalg2.as_vec2(xi)
    th = theta.matrix
    return bool(np.max(np.abs(A @ th - th @ A)) <= tol * (1.0 + np.max(np.abs(A))))


def check_automorphism(theta: Theta, eps: int, P, eta, tol: float = CONSTRAINT_TOL) -> bool:
    """True iff ``(eps, P, eta)`` defines an automorphism of G(theta).

    ``eps = -1`` is only admissible for traceless theta.
    """
    P = linalg2.as_mat2(P)
    linalg2.as_vec2(eta)
    if eps not in (1, -1):
        return False
    if eps == -1 and abs(theta.trace) > tol:
        return False
    if abs(np.linalg.det(P)) <= tol:
        return False
    th = theta.matrix
    return bool(np.max(np.abs(P @ th - eps * (th @ P))) <= tol * (1.0 + np.max(np.abs(P))))


@dataclass(frozen=True, eq=False)
class Automorphism:
    """``(t, v) -> (eps*t, P v + eps*Lambda^theta_{eps t} eta)``."""

    theta: Theta
    eps: int = 1
    P: np.ndarray = field(default_factory=lambda: np.eye(2))
    eta: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        object.__setattr__(self, "P", linalg2.as_mat2(self.P))
        object.__setattr__(self, "eta", linalg2.as_vec2(self.eta))
        if not check_automorphism(self.theta, self.eps, self.P, self.eta):
            raise InvalidAutomorphism(
                f"P theta != eps theta P (eps={self.eps}) or P singular for theta={self.theta}"
            )

    @classmethod
    def identity(cls, theta: Theta) -> "Automorphism":
        return cls(theta)

    def __call__(self, g: GroupElement) -> GroupElement:
        return aut_apply(self.theta, self, g)

    def differential(self, g: GroupElement, Z: AlgebraElement) -> AlgebraElement:
        """``(d phi)_g Z`` in the product chart."""
        e = self.eps
        return AlgebraElement(
            e * Z.a, self.P @ Z.w + Z.a * (self.theta.rho(e * g.t) @ self.eta)
        )

    def differential_at_identity_inverse(self, Z: AlgebraElement) -> AlgebraElement:
        e = self.eps
        return AlgebraElement(e * Z.a, linalg2.solve2(self.P, Z.w - e * Z.a * self.eta))

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self o other``."""
        e1, e2 = self.eps, other.eps
        # d(self o other)_e = [[e1, 0], [eta1, P1]] [[e2, 0], [eta2, P2]]
        return Automorphism(
            self.theta, e1 * e2, self.P @ other.P, e2 * self.eta + self.P @ other.eta
        )

    def inverse(self) -> "Automorphism":
        e = self.eps
        Pi = linalg2.inv2(self.P)
        return Automorphism(self.theta, e, Pi, -e * (Pi @ self.eta))


def aut_apply(theta: Theta, phi: Automorphism, g: GroupElement) -> GroupElement:
    e = phi.eps
    return GroupElement(e * g.t, phi.P @ g.v + e * (theta.lam_op(e * g.t) @ phi.eta))


@dataclass(frozen=True, eq=False)
class LinearField:
    """Linear vector field ``X(t, v) = (0, A v + Lambda^theta_t xi)``."""

    theta: Theta
    xi: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xi", linalg2.as_vec2(self.xi))
        object.__setattr__(self, "A", linalg2.as_mat2(self.A))
        if not check_derivation(self.theta, self.xi, self.A):
            raise InvalidLinearField(f"A does not commute with theta={self.theta}")

    def __call__(self, g: GroupElement) -> AlgebraElement:
        return field_eval(self.theta, self, g)

    def derivation(self) -> np.ndarray:
        D = np.zeros((3, 3))
        D[1:, 0] = self.xi
        D[1:, 1:] = self.A
        return D


def field_eval(theta: Theta, X: LinearField, g: GroupElement) -> AlgebraElement:
    return AlgebraElement(0.0, X.A @ g.v + theta.lam_op(g.t) @ X.xi)


def flow_automorphism(theta: Theta, X: LinearField, s: float) -> Automorphism:
    """The time-``s`` flow of ``X`` as an automorphism."""
    return Automorphism(theta, 1, linalg2.expm(X.A, s), linalg2.lambda_op(X.A, s) @ X.xi)


def flow(theta: Theta, X: LinearField, s: float, g: GroupElement) -> GroupElement:
    return GroupElement(
        g.t, linalg2.expm(X.A, s) @ g.v + theta.lam_op(g.t) @ (linalg2.lambda_op(X.A, s) @ X.xi)
    )


def field_singularities_check(theta: Theta, X: LinearField, g: GroupElement, tol: float = 1e-12) -> bool:
    """True iff ``g`` is a zero of ``X``."""
    return bool(np.linalg.norm(field_eval(theta, X, g).w) <= tol)
