import json

import pytest

from ars3d.errors import DegenerateDistribution, LarcFailure
from ars3d.scenario import BUNDLED, ScenarioError, bundled, bundled_text, dumps, from_dict, load, loads, save


@pytest.mark.parametrize("name", BUNDLED)
def test_round_trip(name, tmp_path):
    sc = bundled(name)
    assert json.loads(dumps(sc)) == json.loads(bundled_text(name))
    path = tmp_path / "s.json"
    save(sc, path)
    assert load(path).to_dict() == sc.to_dict()
    sc.build()


def _doc():
    return json.loads(bundled_text("example_4_4"))


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d.pop("xi"), "xi"),
    (lambda d: d.update(xi=[1, "a"]), "xi[1]"),
    (lambda d: d.update(A=[[1, 0]]), "A"),
    (lambda d: d["theta"].update(kind="rotation"), "theta.kind"),
    (lambda d: d["delta"].update(basis=[[1, 0], [0, 1, 0]]), "delta.basis[0]"),
    (lambda d: d.update(extra=1), "extra"),
    (lambda d: d.update(tolerances={"locus": -1}), "tolerances.locus"),
    (lambda d: d.update(name=3), "name"),
])
def test_field_diagnostics(mutate, where):
    d = _doc()
    mutate(d)
    with pytest.raises(ScenarioError) as exc:
        from_dict(d)
    assert exc.value.where == where


def test_json_syntax_error_position():
    with pytest.raises(ScenarioError) as exc:
        loads('{\n  "xi": [1, 2,\n}')
    assert exc.value.where.startswith("line 3")


def test_math_errors_surface_on_build():
    d = _doc()
    d["delta"]["basis"] = [[0, 1, 0], [0, 0, 1]]
    with pytest.raises(DegenerateDistribution):
        from_dict(d).build()
    d = _doc()
    d["theta"] = {"kind": "diagonal", "lambda": 0.5}
    d["xi"], d["A"] = [0, 1], [[1, 0], [0, 1]]
    d["delta"]["basis"] = [[1, 0, 0], [0, 0, 1]]
    with pytest.raises(LarcFailure):
        from_dict(d).build()


def test_defaults():
    d = _doc()
    del d["delta"]["gram"]
    sc = from_dict(d)
    assert sc.gram is None and "gram" not in sc.to_dict()["delta"]
    assert sc.tolerance("locus", 1e-9) == 1e-9
    assert bundled("rotation_linear").tolerance("locus", 1.0) < 1.0
