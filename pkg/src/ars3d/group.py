"""The algebra g(theta) = R x_theta R^2 and the group G(theta) = R x_rho R^2.

Points of the group are ``(t, v)`` and tangent vectors are written in the
global product chart as ``(a, w)``; both are plain named tuples holding a
float and a length-2 array.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import linalg2
from .errors import InvalidTheta

JORDAN = "jordan"
DIAGONAL = "diagonal"
COMPLEX = "complex"


@dataclass(frozen=True)
class Theta:
    """One of the three canonical structure matrices.

    Use :meth:`jordan`, :meth:`diagonal` or :meth:`complex`; anything else is
    rejected, since every solvable nonnilpotent 3D algebra is isomorphic to
    one of these.
    """

    kind: str
    lam: float = 0.0

    def __post_init__(self):
        if self.kind not in (JORDAN, DIAGONAL, COMPLEX):
            raise InvalidTheta(f"unknown theta kind {self.kind!r}")
        if not math.isfinite(self.lam):
            raise InvalidTheta("lambda must be finite")
        if self.kind == DIAGONAL and not -1.0 <= self.lam <= 1.0:
            raise InvalidTheta(f"diagonal theta needs lambda in [-1, 1], got {self.lam}")
        if self.kind == JORDAN and self.lam != 0.0:
            raise InvalidTheta("jordan theta takes no parameter")

    @classmethod
    def jordan(cls) -> "Theta":
        return cls(JORDAN)

    @classmethod
    def diagonal(cls, lam: float) -> "Theta":
        return cls(DIAGONAL, float(lam))

    @classmethod
    def complex(cls, lam: float = 0.0) -> "Theta":
        return cls(COMPLEX, float(lam))

    @property
    def matrix(self) -> np.ndarray:
        if self.kind == JORDAN:
            return np.array([[1.0, 1.0], [0.0, 1.0]])
        if self.kind == DIAGONAL:
            return np.array([[1.0, 0.0], [0.0, self.lam]])
        return np.array([[self.lam, -1.0], [1.0, self.lam]])

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix))

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    def rho(self, t: float) -> np.ndarray:
        """``exp(t*theta)``."""
        return linalg2.expm(self.matrix, t)

    def lam_op(self, t: float) -> np.ndarray:
        return linalg2.lambda_op(self.matrix, t)

    def __str__(self):
        if self.kind == JORDAN:
            return "Jordan"
        return f"{self.kind.capitalize()}({self.lam:g})"


class AlgebraElement(NamedTuple):
    a: float
    w: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.w[0], self.w[1]], dtype=float)

    @classmethod
    def from_array(cls, x) -> "AlgebraElement":
        return cls(float(x[0]), np.array([x[1], x[2]], dtype=float))

    def scaled(self, s: float) -> "AlgebraElement":
        return AlgebraElement(s * self.a, s * np.asarray(self.w, dtype=float))


class GroupElement(NamedTuple):
    t: float
    v: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.v[0], self.v[1]], dtype=float)

    @classmethod
    def from_array(cls, x) -> "GroupElement":
        return cls(float(x[0]), np.array([x[1], x[2]], dtype=float))


def algebra_element(a, w) -> AlgebraElement:
    return AlgebraElement(float(a), linalg2.as_vec2(w))


def group_element(t, v) -> GroupElement:
    return GroupElement(float(t), linalg2.as_vec2(v))


IDENTITY = GroupElement(0.0, np.zeros(2))


def bracket(theta: Theta, X: AlgebraElement, Y: AlgebraElement) -> AlgebraElement:
    th = theta.matrix
    w = X.a * (th @ Y.w) - Y.a * (th @ X.w)
    return AlgebraElement(0.0, w)


def mul(theta: Theta, g: GroupElement, h: GroupElement) -> GroupElement:
    return GroupElement(g.t + h.t, g.v + theta.rho(g.t) @ h.v)


def inv(theta: Theta, g: GroupElement) -> GroupElement:
    return GroupElement(-g.t, -(theta.rho(-g.t) @ g.v))


def group_exp(theta: Theta, X: AlgebraElement) -> GroupElement:
    """Exponential map.  Small ``a`` is safe: the Lambda closed form is
    accurate there, so dividing by ``a`` loses nothing."""
    w = np.asarray(X.w, dtype=float)
    if X.a == 0.0:
        return GroupElement(0.0, w.copy())
    return GroupElement(float(X.a), theta.lam_op(X.a) @ w / X.a)


def dL(theta: Theta, g: GroupElement, Y: AlgebraElement) -> AlgebraElement:
    """Differential of left translation by ``g`` (the same at every base point)."""
    return AlgebraElement(Y.a, theta.rho(g.t) @ Y.w)


def dR(theta: Theta, g: GroupElement, at: GroupElement, Y: AlgebraElement) -> AlgebraElement:
    """Differential of right translation by ``g`` evaluated at ``at``."""
    return AlgebraElement(Y.a, Y.w + Y.a * (theta.matrix @ (theta.rho(at.t) @ g.v)))


def left_invariant(theta: Theta, Y: AlgebraElement, g: GroupElement) -> AlgebraElement:
    return AlgebraElement(Y.a, theta.rho(g.t) @ Y.w)


def right_invariant(theta: Theta, Y: AlgebraElement, g: GroupElement) -> AlgebraElement:
    return AlgebraElement(Y.a, Y.w + Y.a * (theta.matrix @ g.v))
