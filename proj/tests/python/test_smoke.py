import math

import numpy as np
import pytest

import cylbill


def test_reduce_and_counts():
    assert cylbill.reduce("abBA") == "-"
    assert cylbill.reduce("abCcd".replace("d", "a")) == "aba"
    assert [cylbill.count_reduced_words(n) for n in range(4)] == [1, 6, 30, 150]
    assert cylbill.count_reduced_words(40) == 6 * 5**39


def test_free_flight_along_a_channel():
    out = cylbill.simulate([0.5, 0.5, 0.5], [0.0, 0.0, 1.0], 2.3, 0.1)
    assert out["word"] == "cc"
    assert out["collisions"] == 0
    assert out["termination"] == "completed"
    np.testing.assert_allclose(out["final_q"], [0.5, 0.5, 2.8], atol=1e-12)
    speed, direction = cylbill.rotation_vector(out["word"], 2.3)
    assert speed == pytest.approx(2 / 2.3)
    assert direction == "cc"


def test_speed_is_conserved():
    v = np.array([0.3, -0.7, 0.2])
    out = cylbill.simulate([0.5, 0.5, 0.5], v, 50.0, 0.2)
    assert out["collisions"] > 0
    assert np.linalg.norm(out["final_v"]) == pytest.approx(1.0, abs=1e-12)


def test_entropy_bounds():
    f, rate = cylbill.upper_bound(10.0, 0.1)
    assert f == pytest.approx(2 * math.sqrt(3) * 10 / 0.9 + 7)
    assert rate == pytest.approx(f * math.log(12) / 10)
    assert cylbill.lower_bound_words(3.0) == pytest.approx(math.log(6) / 3)


def test_construct_validates_and_slows_down():
    fast = cylbill.construct("abcABCab", 0.05)
    assert fast["validated"]
    assert fast["word"] == "abcABCab"
    assert max(fast["cell_times"]) < 3.0
    slow = cylbill.construct("abcABCab", 0.05, target_speed=0.25)
    assert slow["word"] == "abcABCab"
    assert 8 / slow["duration"] == pytest.approx(0.25, rel=0.02)
    with pytest.raises(ValueError):
        cylbill.construct("aA", 0.05)


def test_cli_exit_codes(tmp_path):
    code, out, _ = cylbill.run_cli(["entropy", "--n", "50", "--T-grid", "5,10", "--out", str(tmp_path)])
    assert code == 0
    assert out
    assert (tmp_path / "entropy.csv").read_text() == out
    code, _, err = cylbill.run_cli(["simulate", "--r0", "0.6"])
    assert code == 2
    assert err
