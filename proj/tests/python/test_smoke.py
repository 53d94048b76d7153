import numpy as np
import pytest

import markovmono as mm

TWO = [[0.5, 0.5], [0.25, 0.75]]


def test_two_state_closed_forms():
    p = mm.validate(TWO)
    assert np.allclose(mm.stationary_linear(p), [1 / 3, 2 / 3], atol=1e-12)
    assert mm.expected_return_time(p, 0) == pytest.approx(3.0, abs=1e-12)
    assert mm.expected_hitting_times(p, 0)[1] == pytest.approx(4.0, abs=1e-12)
    assert np.allclose(mm.coupled_derivative_direct(p, 0, 1), [-4.0, -8.0], atol=1e-12)


def test_structure_and_errors():
    s = mm.structure(mm.validate([[0.0, 1.0], [1.0, 0.0]]))
    assert s["irreducible"] and s["period"] == 2
    with pytest.raises(mm.RowSumViolation):
        mm.validate([[0.5, 0.6], [0.5, 0.5]])
    with pytest.raises(mm.NotIrreducible):
        mm.expected_return_time(mm.validate([[1.0, 0.0], [0.5, 0.5]]), 0)
    with pytest.raises(mm.Error):
        mm.validate([[1.0]])


def test_perturbation_raises_target_mass():
    p = mm.validate(np.full((3, 3), 1 / 3))
    q = mm.apply_elementary(p, 1, 0, [0.1, 0.2, 0.0])
    report = mm.check_theorem_conditions(p, q, 1)
    assert report["holds"] and report["strict"]
    assert mm.stationary_linear(q)[1] > mm.stationary_linear(p)[1]
    moves = mm.decompose(p, q, 1)
    assert len(moves) == 1 and moves[0][0] == 0


def test_simulation_matches_exact():
    p = mm.validate(TWO)
    mean, se = mm.simulate_return_time(p, 0, 20000, seed=3, threads=2)
    assert abs(mean - 3.0) <= 4 * se


def test_suite_passes():
    report = mm.run_suite(trials=50, seed=7)
    assert report["pass"] and report["trials"] == 50 and report["failures"] == []
