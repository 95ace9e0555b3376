import math

import pytest
from hypothesis import given, strategies as st

from jumpctl import (
    EventPath,
    SensorSpec,
    discrete_law,
    failure_prob,
    gaussian_mixture_law,
    observe,
    projected_reward,
    uniform_law,
)


def test_sensor_spec_validation():
    SensorSpec(0.0)
    SensorSpec(math.inf)
    with pytest.raises(ValueError):
        SensorSpec(-1.0)


def test_failure_prob_sentinels():
    law = uniform_law(-1, 1)
    assert failure_prob(law, 0.0) == 0.0
    assert failure_prob(law, math.inf) == 1.0


def test_failure_prob_closed_forms():
    assert failure_prob(uniform_law(-1, 1), 0.5) == pytest.approx(0.5)
    assert failure_prob(uniform_law(0.0, 2.0), 1.0) == pytest.approx(0.5)
    disc = discrete_law([(0.5, 0.25), (-0.5, 0.25), (2.0, 0.5)])
    assert failure_prob(disc, 1.0) == pytest.approx(0.5)
    assert failure_prob(disc, 0.5) == 0.0  # strict: |y| < eta
    mix = gaussian_mixture_law([(1.0, 0.0, 1.0)])
    # P(|Y| < 1) for a standard normal
    assert failure_prob(mix, 1.0) == pytest.approx(2 * 0.8413447460685429 - 1, rel=1e-9)


def test_observe_hand_example():
    path = EventPath(0.0, ((1.0, 3.0), (2.0, -1.0)), 5.0)
    obs = observe(path, SensorSpec(2.0))
    assert obs.detected == (True, False)
    assert obs.obs_at == (3.0, 3.0)  # detected shows post, missed shows pre
    assert obs.post == (3.0, 2.0)


def test_observe_sentinel_regimes():
    path = EventPath(1.0, ((0.5, 2.0), (1.5, -0.25)), 4.0)
    perfect = observe(path, SensorSpec(0.0))
    assert perfect.obs_at == perfect.post
    blind = observe(path, SensorSpec(math.inf))
    assert blind.obs_at == (1.0, 3.0)  # always the pre-jump level
    assert blind.detected == (False, False)


def test_projected_reward_sides():
    path = EventPath(0.0, ((math.log(2.0), 3.0),), 5.0)
    obs = observe(path, SensorSpec(1.0))
    t = math.log(2.0)
    assert projected_reward(obs, t, 1.0, "at") == pytest.approx(1.5)  # 3 e^{-ln2}
    assert projected_reward(obs, t, 1.0, "right") == pytest.approx(1.5)
    assert projected_reward(obs, t, 1.0, "left") == 0.0
    missed = observe(path, SensorSpec(10.0))
    assert projected_reward(missed, t, 1.0, "at") == 0.0
    assert projected_reward(missed, t, 1.0, "right") == pytest.approx(1.5)


def test_projected_reward_away_from_events():
    path = EventPath(2.0, ((1.0, 1.0),), 5.0)
    obs = observe(path, SensorSpec(0.5))
    for side in ("left", "at", "right"):
        assert projected_reward(obs, 0.25, 1.0, side) == pytest.approx(2.0 * math.exp(-0.25))
        assert projected_reward(obs, 3.0, 1.0, side) == pytest.approx(3.0 * math.exp(-3.0))
    with pytest.raises(ValueError):
        projected_reward(obs, 7.0, 1.0)


def test_right_side_is_true_post_level():
    path = EventPath(-1.0, ((0.5, 4.0), (2.0, -0.1), (3.0, 0.2)), 5.0)
    obs = observe(path, SensorSpec(1.0))
    level = path.p_tilde
    for k, (t, y) in enumerate(path.events):
        level += y
        assert projected_reward(obs, t, 0.7, "right") == pytest.approx(
            level * math.exp(-0.7 * t)
        )


@given(
    marks=st.lists(
        st.floats(min_value=-5, max_value=5).filter(lambda y: abs(y) > 1e-6),
        min_size=1,
        max_size=8,
    ),
    eta_pair=st.tuples(
        st.floats(min_value=0, max_value=6), st.floats(min_value=0, max_value=6)
    ),
)
def test_detection_monotone_in_eta(marks, eta_pair):
    lo, hi = sorted(eta_pair)
    times = tuple(float(k + 1) for k in range(len(marks)))
    path = EventPath(0.0, tuple(zip(times, marks)), len(marks) + 1.0)
    fine = observe(path, SensorSpec(lo))
    coarse = observe(path, SensorSpec(hi))
    for was, now in zip(fine.detected, coarse.detected):
        assert now <= was  # raising eta never detects more
