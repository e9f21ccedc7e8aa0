"""The twelve acceptance criteria, one test each, at their stated tolerances.

Each test prints a single pass/fail line; the lines are also collected into a
terminal summary section.  A failing criterion shows its failed certificate
entries in the assertion message.
"""

from __future__ import annotations

import functools

import pytest

from conftest import ACCEPTANCE_LINES
from gwistor.theorems import run_named, resolve_seed

CRITERIA = [
    (1, "first structure equations under the sigma0 star", "bse1"),
    (2, "metric extraction from the 7-form pairing", "metric"),
    (3, "tilde frames are mutually inverse", "frames"),
    (4, "Hodge closed forms, ** = id, degree 1/3 homogeneity", "hodge"),
    (5, "d sigma never vanishes", "nonvanishing"),
    (6, "cocalibration polynomials", "cocalib"),
    (7, "Sasaki circle metric and circle action", "circle"),
    (8, "W3 and norm on the Sasaki circle", "w3norm"),
    (9, "nearly parallel structures", "np"),
    (10, "curvature atoms", "curvature"),
    (11, "linear independence of the invariant 3-forms", "independence"),
    (12, "mutation suite", "mutation"),
]


@functools.lru_cache(maxsize=None)
def verdict(name: str):
    return run_named(name, resolve_seed())


@pytest.mark.parametrize("number,title,suite", CRITERIA, ids=[c[2] for c in CRITERIA])
def test_criterion(number, title, suite):
    v = verdict(suite)
    ok = sum(e.equal for e in v.certificate)
    line = (f"criterion {number}: {'PASS' if v.passed else 'FAIL'}  {title} "
            f"({ok}/{len(v.certificate)} certificate entries)")
    print(line)
    ACCEPTANCE_LINES.append(line)
    detail = "\n".join(f"  {e.claim}: {e.lhs} != {e.rhs}" for e in v.failures())
    if not v.passed:
        pytest.fail(f"{title}\n{detail}", pytrace=False)
