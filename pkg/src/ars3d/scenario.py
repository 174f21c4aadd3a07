"""JSON scenario files describing a simple ARS.

A scenario is one JSON object::

    {"name": "...", "description": "...",
     "theta": {"kind": "jordan" | "diagonal" | "complex", "lambda": 0.0},
     "xi": [x1, x2], "A": [[a11, a12], [a21, a22]],
     "delta": {"basis": [[sigma, u1, u2], [sigma, u1, u2]], "gram": [[.., ..], [.., ..]]},
     "tolerances": {"constraint": 1e-9, "locus": 1e-9, "zeroScan": 1e-9}}

``gram`` defaults to the identity and every key except theta, xi, A and
delta is optional.  Structural problems raise :class:`ScenarioError` with
a field path (or line/column for JSON syntax); mathematical problems
surface as the library's own errors when the ARS is built.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .ars import Distribution, SimpleARS, make_ars
from .errors import InvalidInput
from .group import Theta
from .symmetry import LinearField

KINDS = ("jordan", "diagonal", "complex")
TOLERANCE_KEYS = ("constraint", "locus", "zeroScan")
TOP_KEYS = ("name", "description", "theta", "xi", "A", "delta", "tolerances")
BUNDLED = ("example_4_3", "example_4_4", "rotation_linear", "diagonal_rank_one")


class ScenarioError(InvalidInput):
    """Malformed scenario file; ``where`` names the field or position."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass(frozen=True, eq=False)
class Scenario:
    theta_kind: str
    theta_lambda: Optional[float]
    xi: list
    A: list
    basis: list
    gram: Optional[list] = None
    name: Optional[str] = None
    description: Optional[str] = None
    tolerances: Optional[dict] = None

    def theta(self) -> Theta:
        lam = 0.0 if self.theta_lambda is None else self.theta_lambda
        return Theta(self.theta_kind, lam)

    def tolerance(self, key: str, default: float) -> float:
        if self.tolerances and key in self.tolerances:
            return float(self.tolerances[key])
        return default

    def build(self) -> SimpleARS:
        """Validated ARS; raises InvalidTheta, InvalidLinearField,
        DegenerateDistribution, LarcFailure or EmptyRegularSet."""
        th = self.theta()
        X = LinearField(th, self.xi, self.A)
        gram = np.eye(2) if self.gram is None else np.asarray(self.gram, dtype=float)
        delta = Distribution.from_rows(np.asarray(self.basis, dtype=float), gram)
        return make_ars(th, X, delta)

    def to_dict(self) -> dict:
        out: dict = {}
        if self.name is not None:
            out["name"] = self.name
        if self.description is not None:
            out["description"] = self.description
        theta = {"kind": self.theta_kind}
        if self.theta_lambda is not None:
            theta["lambda"] = self.theta_lambda
        out["theta"] = theta
        out["xi"] = list(self.xi)
        out["A"] = [list(r) for r in self.A]
        delta = {"basis": [list(r) for r in self.basis]}
        if self.gram is not None:
            delta["gram"] = [list(r) for r in self.gram]
        out["delta"] = delta
        if self.tolerances is not None:
            out["tolerances"] = dict(self.tolerances)
        return out


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ScenarioError(where, f"expected a number, got {type(x).__name__}")
    if not math.isfinite(x):
        raise ScenarioError(where, "number is not finite")
    return float(x)


def _vector(x, n: int, where: str) -> list:
    if not isinstance(x, list) or len(x) != n:
        raise ScenarioError(where, f"expected a list of {n} numbers")
    return [_number(v, f"{where}[{i}]") for i, v in enumerate(x)]


def _matrix(x, rows: int, cols: int, where: str) -> list:
    if not isinstance(x, list) or len(x) != rows:
        raise ScenarioError(where, f"expected {rows} rows of {cols} numbers")
    return [_vector(r, cols, f"{where}[{i}]") for i, r in enumerate(x)]


def _object(x, where: str) -> dict:
    if not isinstance(x, dict):
        raise ScenarioError(where, "expected an object")
    return x


def from_dict(doc) -> Scenario:
    doc = _object(doc, "<root>")
    for key in doc:
        if key not in TOP_KEYS:
            raise ScenarioError(key, "unknown field")
    for key in ("theta", "xi", "A", "delta"):
        if key not in doc:
            raise ScenarioError(key, "missing required field")
    theta = _object(doc["theta"], "theta")
    for key in theta:
        if key not in ("kind", "lambda"):
            raise ScenarioError(f"theta.{key}", "unknown field")
    kind = theta.get("kind")
    if kind not in KINDS:
        raise ScenarioError("theta.kind", f"expected one of {', '.join(KINDS)}")
    lam = _number(theta["lambda"], "theta.lambda") if "lambda" in theta else None
    delta = _object(doc["delta"], "delta")
    for key in delta:
        if key not in ("basis", "gram"):
            raise ScenarioError(f"delta.{key}", "unknown field")
    if "basis" not in delta:
        raise ScenarioError("delta.basis", "missing required field")
    tolerances = None
    if "tolerances" in doc:
        tol_doc = _object(doc["tolerances"], "tolerances")
        tolerances = {}
        for key, val in tol_doc.items():
            if key not in TOLERANCE_KEYS:
                raise ScenarioError(f"tolerances.{key}", "unknown field")
            v = _number(val, f"tolerances.{key}")
            if v <= 0:
                raise ScenarioError(f"tolerances.{key}", "must be positive")
            tolerances[key] = v
    for key in ("name", "description"):
        if key in doc and not isinstance(doc[key], str):
            raise ScenarioError(key, "expected a string")
    return Scenario(
        theta_kind=kind,
        theta_lambda=lam,
        xi=_vector(doc["xi"], 2, "xi"),
        A=_matrix(doc["A"], 2, 2, "A"),
        basis=_matrix(delta["basis"], 2, 3, "delta.basis"),
        gram=_matrix(delta["gram"], 2, 2, "delta.gram") if "gram" in delta else None,
        name=doc.get("name"),
        description=doc.get("description"),
        tolerances=tolerances,
    )


def loads(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return from_dict(doc)


def load(path) -> Scenario:
    return loads(Path(path).read_text(encoding="utf-8"))


def dumps(sc: Scenario) -> str:
    return json.dumps(sc.to_dict(), indent=2) + "\n"


def save(sc: Scenario, path) -> None:
    Path(path).write_text(dumps(sc), encoding="utf-8", newline="\n")


def bundled_text(name: str) -> str:
    if name not in BUNDLED:
        raise KeyError(name)
    return resources.files("ars3d").joinpath("scenarios", f"{name}.json").read_text(encoding="utf-8")


def bundled(name: str) -> Scenario:
    return loads(bundled_text(name))
