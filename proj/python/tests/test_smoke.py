import json
from fractions import Fraction
from pathlib import Path

import pytest

import ecicalc

DATA = Path(__file__).resolve().parents[2] / "data"


def load(name):
    return json.loads((DATA / name).read_text())


def test_worked_derivation():
    r = ecicalc.derive("X, Z _||_ Y | Z", ["X _||_ Y | Z"])
    assert r["derived"] and r["steps"] == 5
    assert r["rules"] == "SEPAROID_FULL"
    assert r["proof"].splitlines()[-1] == "6. X, Z _||_ Y | Z [P1 from 5]"
    assert not ecicalc.derive("X _||_ Y", ["X _||_ Y | Z"])["derived"]


def test_closure_contains_symmetric_statement():
    assert "Y _||_ X" in ecicalc.closure(["X _||_ Y"])


def test_check_on_model_files():
    model = load("ineffective_treatment.json")
    assert ecicalc.check(model, "X _||_ Sigma | T")
    assert not ecicalc.check(load("confounded.json"), "Y _||_ Sigma | T")


def test_counterexample_round_trip():
    cx = ecicalc.search_counterexample("X _||_ Y", ["X _||_ Y | Z"], seed=1)
    assert cx is not None
    assert cx["report"]["goal"]["holds"] is False
    assert ecicalc.verify_counterexample(cx)
    assert ecicalc.search_counterexample("X _||_ Y | Y", seed=1) is None


def test_scan_and_product_space():
    report = ecicalc.scan_axioms(vars=3, trials=10, seed=5)
    assert report["models"] == 10 and report["violations"] == 0
    joint = ecicalc.product_space(load("ineffective_treatment.json"))
    assert "regime" in joint["variables"]


def test_causal_effects():
    r = ecicalc.ace(load("randomized_trial.json"))
    assert r["transfer_valid"]
    assert r["ace_interventional"] == r["ace_observational"] == Fraction(5, 12)
    c = ecicalc.ace(load("confounded.json"))
    assert not c["transfer_valid"] and c["ace_interventional"] != c["ace_observational"]
    value = ecicalc.g_formula(load("dynamic_treatment.json"), load("threshold_strategy.json"),
                              {"0": 0, "1": 1})
    assert value == Fraction(13, 25)


def test_errors_and_cli():
    with pytest.raises(ecicalc.EciError, match="ParseError"):
        ecicalc.derive("X _||_ Y |", [])
    code, out, _ = ecicalc.run_cli(["derive", "X, Z _||_ Y | Z", "-p", "X _||_ Y | Z"])
    assert code == 0 and "in 5 steps" in out
