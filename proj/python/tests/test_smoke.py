import json
import math

import pytest

import rkit


def test_rearrangements():
    assert rkit.decreasing_rearrangement([3, 1, 2]) == [3, 2, 1]
    assert rkit.symmetric_rearrangement([1, 3, 2]) == [1, 3, 2]
    w = rkit.coupled_rearrangement([0, 1, 3, 2, 0], [0, 0, 0], 0.5)
    assert sorted(w, reverse=True)[:3] == [3, 2, 1]
    assert len(w) == 8


def test_norms():
    assert rkit.lp_norm([1, 2], 0.5, 2) == pytest.approx(2.5)
    assert rkit.gradient_seminorm([0, 1, 0], 1.0, 2) == pytest.approx(2.0)


def test_errors_surface_as_rkit_error():
    with pytest.raises(rkit.RkitError):
        rkit.symmetric_rearrangement([1, -1])


def test_duff_tent_equality():
    h = 0.01
    f = [min(k * h, 2 - k * h) for k in range(201)]
    lhs, rhs = rkit.duff_integrals(f, h, 2)
    assert lhs == pytest.approx(rhs, rel=1e-9)
    assert lhs == pytest.approx(0.5, rel=1e-9)


def test_ground_state():
    assert rkit.ground_state_energy(3, 1.0, 0.05) == pytest.approx(-1 / 96, rel=1e-2)


def test_verify_suite():
    ok, text = rkit.verify(["lemma1", "lemma3"], seed=7)
    assert ok
    reports = json.loads(text)
    assert all(r["status"] in ("pass", "skipped") for r in reports)
    assert rkit.verify(["lemma1"], seed=7) == rkit.verify(["lemma1"], seed=7, jobs=2)
