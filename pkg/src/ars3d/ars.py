"""Simple almost-Riemannian structures {X, Delta^L} on G(theta)."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg2
from .errors import (
    CannotNormalize,
    DegenerateDistribution,
    EmptyRegularSet,
    InvalidAutomorphism,
    LarcFailure,
)
from .group import AlgebraElement, GroupElement, Theta, left_invariant
from .symmetry import Automorphism, LinearField

MEMBERSHIP_TOL = 1e-9
SVD_CUTOFF = 1e-10
WITNESS_TOL = 1e-9

NOT_SUBALGEBRA = "NotSubalgebra"
A_OUTSIDE_LINE = "AOutsideLine"
XI_OUTSIDE_LINE = "XiOutsideLine"
DERIVATION_LEAVES_DELTA = "DerivationLeavesDelta"
DERIVATION_PRESERVES_DELTA = "DerivationPreservesDelta"


@dataclass(frozen=True, eq=False)
class Distribution:
    """A 2D subspace of g(theta) with an inner product given by ``gram``
    on the basis ``(b1, b2)``."""

    basis: tuple
    gram: np.ndarray = field(default_factory=lambda: np.eye(2))

    def __post_init__(self):
        b1, b2 = (AlgebraElement(float(b.a), linalg2.as_vec2(b.w)) for b in self.basis)
        object.__setattr__(self, "basis", (b1, b2))
        G = linalg2.as_mat2(self.gram)
        object.__setattr__(self, "gram", G)
        if np.max(np.abs(G - G.T)) > 1e-12 * (1.0 + np.max(np.abs(G))):
            raise DegenerateDistribution("gram matrix is not symmetric")
        if G[0, 0] <= 0 or np.linalg.det(G) <= 0:
            raise DegenerateDistribution("gram matrix is not positive definite")
        if np.linalg.norm(self.normal3()) <= 1e-12 * (
            1.0 + np.linalg.norm(b1.as_array()) * np.linalg.norm(b2.as_array())
        ):
            raise DegenerateDistribution("basis vectors are linearly dependent")

    @classmethod
    def from_rows(cls, rows, gram=None) -> "Distribution":
        """Build from ``[[sigma, u1, u2], [sigma, u1, u2]]``."""
        basis = tuple(AlgebraElement.from_array(r) for r in rows)
        return cls(basis) if gram is None else cls(basis, np.asarray(gram, dtype=float))

    def normal3(self) -> np.ndarray:
        return np.cross(self.basis[0].as_array(), self.basis[1].as_array())

    def contains(self, Z: AlgebraElement, tol: float = MEMBERSHIP_TOL) -> bool:
        n = self.normal3()
        z = Z.as_array()
        return bool(abs(n @ z) <= tol * np.linalg.norm(n) * max(np.linalg.norm(z), 1e-300))

    def orthonormal(self) -> tuple[AlgebraElement, AlgebraElement]:
        """Gram-Schmidt of the basis, in the given order, under ``gram``."""
        G = self.gram
        b1, b2 = (b.as_array() for b in self.basis)
        y1 = b1 / np.sqrt(G[0, 0])
        r = G[0, 1] / G[0, 0]
        y2 = (b2 - r * b1) / np.sqrt(G[1, 1] - r * G[0, 1])
        return AlgebraElement.from_array(y1), AlgebraElement.from_array(y2)


@dataclass(frozen=True, eq=False)
class DeltaLine:
    direction: np.ndarray
    normal: np.ndarray


@dataclass(frozen=True)
class LarcVerdict:
    satisfied: bool
    reason: str


def delta_line(delta: Distribution) -> DeltaLine:
    """The line ``l`` with ``{0} x l = Delta n ({0} x R^2)`` and its unit normal.

    The normal is the direction rotated by +pi/2.
    """
    (s1, u1), (s2, u2) = delta.basis
    d = s1 * u2 - s2 * u1
    n = np.linalg.norm(d)
    scale = max(np.linalg.norm(u1) * abs(s2), np.linalg.norm(u2) * abs(s1), 1.0)
    if n <= 1e-12 * scale:
        raise DegenerateDistribution("Delta = {0} x R^2; the LARC cannot hold")
    d = d / n
    return DeltaLine(d, linalg2.perp(d))


def _parallel(x: np.ndarray, d: np.ndarray, tol: float) -> bool:
    # d is a unit vector
    return bool(abs(x[0] * d[1] - x[1] * d[0]) <= tol * max(1.0, np.linalg.norm(x)))


def is_subalgebra(theta: Theta, delta: Distribution, tol: float = MEMBERSHIP_TOL) -> bool:
    """Delta is a subalgebra iff its line is an eigenspace of theta."""
    d = delta_line(delta).direction
    return _parallel(theta.matrix @ d, d, tol)


def contains_time_direction(delta: Distribution, tol: float = MEMBERSHIP_TOL) -> bool:
    return delta.contains(AlgebraElement(1.0, np.zeros(2)), tol)


def larc(theta: Theta, X: LinearField, delta: Distribution, tol: float = MEMBERSHIP_TOL) -> LarcVerdict:
    line = delta_line(delta)
    d = line.direction
    if not _parallel(theta.matrix @ d, d, tol):
        return LarcVerdict(True, NOT_SUBALGEBRA)
    if contains_time_direction(delta, tol):
        if not _parallel(X.A @ d, d, tol):
            return LarcVerdict(True, A_OUTSIDE_LINE)
        if not _parallel(X.xi, d, tol):
            return LarcVerdict(True, XI_OUTSIDE_LINE)
        return LarcVerdict(False, DERIVATION_PRESERVES_DELTA)
    D = X.derivation()
    for b in delta.basis:
        Db = D @ b.as_array()
        if np.linalg.norm(Db) > tol and not delta.contains(AlgebraElement.from_array(Db), tol):
            return LarcVerdict(True, DERIVATION_LEAVES_DELTA)
    return LarcVerdict(False, DERIVATION_PRESERVES_DELTA)


def _singular_value(theta: Theta, X: LinearField, normal: np.ndarray, g: GroupElement) -> float:
    x = X.A @ g.v + theta.lam_op(g.t) @ X.xi
    return float(normal @ (theta.rho(-g.t) @ x))


def find_witness(theta: Theta, X: LinearField, normal: np.ndarray) -> Optional[GroupElement]:
    """First point of the 11^3 grid over [-5, 5]^3 where X leaves Delta^L."""
    grid = np.linspace(-5.0, 5.0, 11)
    for t, x, y in itertools.product(grid, grid, grid):
        g = GroupElement(float(t), np.array([x, y]))
        if abs(_singular_value(theta, X, normal, g)) > WITNESS_TOL:
            return g
    return None


@dataclass(frozen=True, eq=False)
class SimpleARS:
    """A validated simple ARS.  Build it with :func:`make_ars`."""

    theta: Theta
    X: LinearField
    delta: Distribution
    line: DeltaLine
    larc: LarcVerdict
    witness: GroupElement

    @property
    def xi(self) -> np.ndarray:
        return self.X.xi

    @property
    def A(self) -> np.ndarray:
        return self.X.A

    @property
    def normal(self) -> np.ndarray:
        return self.line.normal

    def F(self, g: GroupElement) -> float:
        return _singular_value(self.theta, self.X, self.line.normal, g)

    def frame(self, g: GroupElement) -> np.ndarray:
        """3x3 matrix whose columns are X(g), Y1^L(g), Y2^L(g)."""
        y1, y2 = self.delta.orthonormal()
        cols = [
            np.concatenate([[0.0], self.X.A @ g.v + self.theta.lam_op(g.t) @ self.X.xi]),
            left_invariant(self.theta, y1, g).as_array(),
            left_invariant(self.theta, y2, g).as_array(),
        ]
        return np.column_stack(cols)


def make_ars(theta: Theta, X: LinearField, delta: Distribution) -> SimpleARS:
    """Validate and assemble a simple ARS.

    Raises DegenerateDistribution, LarcFailure or EmptyRegularSet.
    """
    if X.theta != theta:
        raise ValueError("linear field was built for a different theta")
    line = delta_line(delta)
    verdict = larc(theta, X, delta)
    if not verdict.satisfied:
        raise LarcFailure(f"LARC fails: {verdict.reason}")
    witness = find_witness(theta, X, line.normal)
    if witness is None:
        raise EmptyRegularSet("X(g) lies in Delta^L(g) at every sampled point")
    return SimpleARS(theta, X, delta, line, verdict, witness)


def ar_norm(sigma: SimpleARS, g: GroupElement, Z: AlgebraElement) -> float:
    """Almost-Riemannian norm of the tangent vector ``Z`` at ``g``.

    Off the singular locus the frame has rank 3 and the coefficient vector
    is unique.  On the locus the Euclidean minimum-norm representative is
    used, and vectors outside the span of the frame get +inf.
    """
    Fm = sigma.frame(g)
    z = Z.as_array()
    U, S, Vt = np.linalg.svd(Fm)
    keep = S > SVD_CUTOFF * S[0]
    if keep.all():
        return float(np.linalg.norm(np.linalg.solve(Fm, z)))
    coeffs = (Vt[keep].T / S[keep]) @ (U[:, keep].T @ z)
    resid = np.linalg.norm(Fm @ coeffs - z)
    if resid > 1e-9 * max(1.0, np.linalg.norm(z)):
        return float("inf")
    return float(np.linalg.norm(coeffs))


def _pushforward_parts(sigma: SimpleARS, psi: Automorphism):
    if psi.theta != sigma.theta:
        raise InvalidAutomorphism("automorphism belongs to a different theta")
    Pinv = linalg2.inv2(psi.P)
    xi = Pinv @ (psi.eps * sigma.xi + sigma.A @ psi.eta)
    A = Pinv @ sigma.A @ psi.P
    basis = [psi.differential_at_identity_inverse(b) for b in sigma.delta.basis]
    return xi, A, basis


def pushforward(sigma: SimpleARS, psi: Automorphism) -> SimpleARS:
    """The ARS ``Sigma_psi`` for which ``psi`` is an isometry onto ``sigma``."""
    xi, A, basis = _pushforward_parts(sigma, psi)
    return _assemble(sigma, xi, A, basis)


def _assemble(sigma: SimpleARS, xi, A, basis) -> SimpleARS:
    theta = sigma.theta
    X = LinearField(theta, xi, A)
    delta = Distribution(tuple(basis), sigma.delta.gram.copy())
    return make_ars(theta, X, delta)


def psi1(sigma: SimpleARS) -> Automorphism:
    """``(t, v) -> (t, v - Lambda_t(A^-1 xi))``; needs ``det A != 0``."""
    return Automorphism(sigma.theta, 1, np.eye(2), -linalg2.solve2(sigma.A, sigma.xi))


def psi2(sigma: SimpleARS, index: Optional[int] = None) -> Automorphism:
    """``(t, v) -> (t, v + Lambda_t(u)/sigma)`` for the basis element
    ``(sigma, u)`` of Delta with the largest ``|sigma|`` (or ``index``)."""
    k = _time_index(sigma) if index is None else index
    s, u = sigma.delta.basis[k]
    if s == 0.0:
        raise CannotNormalize("chosen basis element has no time component")
    return Automorphism(sigma.theta, 1, np.eye(2), u / s)


def _time_index(sigma: SimpleARS) -> int:
    sig = [abs(b.a) for b in sigma.delta.basis]
    return int(np.argmax(sig))


def normalize(sigma: SimpleARS, prefer: str = "delta") -> tuple[SimpleARS, Automorphism]:
    """Move ``sigma`` by an automorphism so that ``(1, 0)`` is in Delta
    (``prefer="delta"``) or ``xi = 0`` (``prefer="xi"``, needs ``det A != 0``).

    Returns the normalized ARS and the automorphism ``psi`` used, with
    ``psi`` an isometry from the new ARS onto ``sigma``.
    """
    if prefer not in ("delta", "xi"):
        raise ValueError("prefer must be 'delta' or 'xi'")
    det_ok = abs(np.linalg.det(sigma.A)) > linalg2.SINGULAR_TOL
    if prefer == "xi" and det_ok:
        if not np.any(sigma.xi):
            return sigma, Automorphism.identity(sigma.theta)
        psi = psi1(sigma)
        _, A, basis = _pushforward_parts(sigma, psi)
        return _assemble(sigma, np.zeros(2), A, basis), psi
    if contains_time_direction(sigma.delta, tol=1e-14):
        return sigma, Automorphism.identity(sigma.theta)
    k = _time_index(sigma)
    if sigma.delta.basis[k].a != 0.0:
        psi = psi2(sigma, k)
        xi, A, basis = _pushforward_parts(sigma, psi)
        basis[k] = AlgebraElement(basis[k].a, np.zeros(2))
        return _assemble(sigma, xi, A, basis), psi
    if det_ok:
        return normalize(sigma, prefer="xi")
    raise CannotNormalize("det A = 0 and Delta has no element with a time component")
