from __future__ import annotations

import io
import json
from pathlib import Path

import jsonschema
import pytest

from gwistor.cli import main

DOCS = Path(__file__).resolve().parent.parent / "docs"


def schema(name):
    return json.loads((DOCS / f"{name}.schema.json").read_text())


def validate(data, name):
    form = schema("form")
    registry = None
    try:
        from referencing import Registry, Resource

        registry = Registry().with_resource("form.schema.json", Resource.from_contents(form))
    except ImportError:  # older jsonschema
        pass
    if registry is not None:
        jsonschema.Draft202012Validator(schema(name), registry=registry).validate(data)
    else:
        resolver = jsonschema.RefResolver("", schema(name), store={"form.schema.json": form})
        jsonschema.Draft202012Validator(schema(name), resolver=resolver).validate(data)


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_classify_sigma0():
    code, text = run("classify", "--coeffs", "-1,0,1,0,1", "--format", "json")
    assert code == 0
    data = json.loads(text)
    validate(data, "classify")
    assert data["stable"] and data["sasaki_compatible"]
    assert data["metric"][0] == ["1", "0", "0", "0", "0", "0", "0"]


def test_classify_unstable_is_not_an_error():
    code, text = run("classify", "--coeffs", "1,0,1,0,1", "--format", "json")
    assert code == 0
    data = json.loads(text)
    assert not data["stable"] and data["h"] == "-1"


def test_classify_twisted():
    code, text = run("classify", "--coeffs", "-1,1/2,1,0,1", "--format", "json")
    data = json.loads(text)
    assert data["z"] == "1/2" and not data["sasaki_compatible"]


def test_classify_needs_exact_for_surds():
    code, _ = run("classify", "--coeffs", "sqrt(2)/2,0,1,0,1")
    assert code == 2
    code, _ = run("classify", "--exact", "--coeffs", "-sqrt(2)/2,-sqrt(2)/2,sqrt(2)/2,"
                  "sqrt(2)/2,sqrt(3/2)")
    assert code == 0


@pytest.mark.parametrize("argv", [
    ("classify", "--coeffs", "1,2"),
    ("classify", "--coeffs", "a,b,c,d,e"),
    ("hodge", "--coeffs", "-1,0,1,0,1", "--form", "alpha +"),
    ("derive", "--coeffs", "-1,0,1,0,1", "--curvature", "wobbly"),
    ("verify", "--suite", "nope"),
    ("frobnicate",),
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_hodge_alpha1():
    code, text = run("hodge", "--coeffs", "-1,0,1,0,1", "--form", "alpha1", "--format", "json")
    assert code == 0
    data = json.loads(text)
    validate(data, "hodge")
    assert data["invariant"] == {"theta^alpha2": "-1"}


def test_hodge_theta_is_sixth_of_dtheta_cubed():
    code, text = run("hodge", "--coeffs", "-1,0,1,0,1", "--form", "e0")
    assert text.splitlines()[0] == "e123456"
    assert "(1/6)*dtheta3" in text


def test_hodge_symbolic():
    code, text = run("hodge", "--symbolic", "--form", "theta^dtheta", "--format", "json")
    assert code == 0
    assert json.loads(text)["invariant"] == {"dtheta2": "1/2*t^(1/2)*h^(1/2)*f4^(-1)"}


def test_hodge_unstable():
    assert run("hodge", "--coeffs", "1,0,1,0,1", "--form", "alpha")[0] == 3


def test_derive_sigma0_star():
    code, text = run("derive", "--coeffs", "-1,0,1,0,1", "--curvature", "generic", "--star",
                     "--format", "json")
    data = json.loads(text)
    validate(data, "derive")
    assert data["report"]["cocalibration_condition"] == "einstein"


def test_derive_nearly_parallel():
    code, text = run("derive", "--coeffs",
                     "-sqrt(2)/2,-sqrt(2)/2,sqrt(2)/2,sqrt(2)/2,sqrt(3/2)",
                     "--curvature", "constant:1", "--format", "json")
    assert code == 0
    assert json.loads(text)["report"]["nearly_parallel_c"] == "(sqrt(6))"


def test_derive_pure_w3():
    code, text = run("derive", "--coeffs", "0,-1,0,1,1", "--curvature", "constant:-2",
                     "--format", "json")
    rep = json.loads(text)["report"]
    assert rep["w3_scalar"] == "0" and rep["pure_w3"]


def test_derive_symbolic_curvature_constant():
    code, text = run("derive", "--coeffs", "-1,0,1,0,1", "--curvature", "constant:k")
    assert code == 0 and "k" in text


def test_report_exit_codes():
    assert run("report", "--coeffs", "1,0,1,0,1")[0] == 3
    code, text = run("report", "--coeffs", "-1,0,1,0,1", "--format", "json")
    assert code == 0
    validate(json.loads(text), "classify")


def test_verify_bse1(tmp_path):
    path = tmp_path / "out.json"
    code, text = run("verify", "--suite", "bse1", "--json", str(path), "--seed", "7")
    assert code == 0 and "PASS" in text
    data = json.loads(path.read_text())
    validate(data, "verify")
    assert data["seed"] == 7 and data["passed"]


def test_verify_env_seed(monkeypatch):
    monkeypatch.setenv("GWISTOR_SEED", "99")
    code, text = run("verify", "--suite", "bse1", "--seed", "7", "--format", "json")
    assert json.loads(text)["seed"] == 99


def test_verify_failure_exit_code():
    # the displayed pairing matrix disagrees with the computed one off the diagonal
    assert run("verify", "--suite", "metric")[0] == 1


def test_latex_output():
    code, text = run("hodge", "--coeffs", "-1,0,1,0,1", "--form", "alpha1", "--format", "latex")
    assert "e^{0126}" in text
