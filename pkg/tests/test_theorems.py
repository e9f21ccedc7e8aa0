from __future__ import annotations

import json

import pytest

from gwistor.exterior import FormTable, use_table
from gwistor.theorems import (
    MUTATIONS,
    SUITES,
    Verdict,
    nearly_parallel_system,
    resolve_seed,
    stable_samples,
    verify_bse1,
    verify_curvature,
    verify_suite,
)


def test_verdict_json_omits_timing_by_default():
    v = verify_bse1()
    assert v.passed and len(v.certificate) == 14
    data = v.as_dict()
    assert "elapsed" not in data
    assert "elapsed" in v.as_dict(timing=True)
    json.dumps(data)


def test_verdict_is_deterministic():
    a = json.dumps([v.as_dict() for v in verify_suite("bse1")], sort_keys=True)
    b = json.dumps([v.as_dict() for v in verify_suite("bse1")], sort_keys=True)
    assert a == b


def test_failed_entry_fails_verdict():
    v = Verdict("x")
    v.check("one", 1, 1)
    assert v.passed
    v.check("two", 1, 2)
    assert not v.passed and v.failures()[0].claim == "two"


def test_seed_resolution(monkeypatch):
    monkeypatch.delenv("GWISTOR_SEED", raising=False)
    assert resolve_seed(7) == 7
    monkeypatch.setenv("GWISTOR_SEED", "11")
    assert resolve_seed(7) == 11


def test_samples_reproducible():
    assert stable_samples(5, 3) == stable_samples(5, 3)
    assert stable_samples(5, 3) != stable_samples(5, 4)


def test_suite_catalogue():
    assert {"all", "bse1", "circle", "hodge", "w3norm", "cocalib", "np"} <= set(SUITES)
    with pytest.raises(KeyError):
        verify_suite("nope")


def test_nearly_parallel_system_shape():
    eqs = dict(nearly_parallel_system())
    assert len(eqs) == 5
    assert str(eqs["dtheta2"]) in ("f4 - 1/2*c", "-1/2*c + f4")


def test_mutations_break_bse1():
    assert len(MUTATIONS) == 10
    for name, term in MUTATIONS:
        with use_table(FormTable().flip(name, term)):
            broken = not verify_bse1().passed or not verify_curvature().passed
        assert broken, (name, term)
