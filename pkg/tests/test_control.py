import math

import pytest
from hypothesis import given, settings, strategies as st

from jumpctl import (
    EventPath,
    LadlagControl,
    NEG_INF,
    SensorSpec,
    barrier_path,
    constant_control,
    observe,
    running_sup_control,
    toy_control,
)
from jumpctl import rng as rngmod
from jumpctl.control import BarrierPath
from jumpctl.paths import simulate_path


def test_barrier_path_no_events(tables_small, illustration_params):
    table = tables_small[3.0]
    path = EventPath(illustration_params.p_tilde, (), 5.0)
    obs = observe(path, SensorSpec(3.0))
    L = barrier_path(obs, table)
    assert L.entries == ()
    assert L.l0 == pytest.approx(table.value(illustration_params.p_tilde, 0))


def test_barrier_path_predictable_formula(tables_small, illustration_params, consts_small):
    table = tables_small[math.inf]
    path = EventPath(illustration_params.p_tilde, ((1.0, 4.0), (2.0, -2.0)), 5.0)
    obs = observe(path, SensorSpec(math.inf))
    L = barrier_path(obs, table)
    a, b = consts_small.a, consts_small.b
    level = illustration_params.p_tilde
    for (t, l_at, l_rt), (_, y) in zip(L.entries, path.events):
        assert l_at == pytest.approx(a * (level - b))  # pre-jump line
        level += y
        assert l_rt == pytest.approx(a * (level - b))  # post-jump line


def test_barrier_path_optional_above_b(tables_small, illustration_params, consts_small):
    table = tables_small[0.0]
    jump_to = consts_small.b + 3.0 - illustration_params.p_tilde
    path = EventPath(illustration_params.p_tilde, ((1.0, jump_to),), 5.0)
    obs = observe(path, SensorSpec(0.0))
    L = barrier_path(obs, table)
    t, l_at, l_rt = L.entries[0]
    assert l_at == 0.0  # act-now level at a detected jump above b
    assert l_rt == pytest.approx(consts_small.a * 3.0)


def test_barrier_path_regime_mismatch(tables_small, illustration_params):
    path = EventPath(illustration_params.p_tilde, ((1.0, 4.0),), 5.0)
    obs = observe(path, SensorSpec(6.0))
    with pytest.raises(ValueError):
        barrier_path(obs, tables_small[3.0])
    with pytest.raises(ValueError):
        barrier_path(obs, tables_small[math.inf])


def test_running_sup_constant_when_c0_dominates():
    L = BarrierPath(-5.0, ((1.0, -4.0, -3.0), (2.0, -6.0, -7.0)), 5.0)
    control = running_sup_control(L, 0.0)
    assert control.breakpoints == ()
    assert control.terminal == 0.0


def test_running_sup_double_jump_triples():
    # held at 0 (start at the critical level), detected jump lands above b:
    # proactive hold at 0, post-event move up
    L = BarrierPath(0.0, ((1.0, 0.0, 2.0),), 5.0)
    control = running_sup_control(L, -5.0)
    assert control.breakpoints[0] == (0.0, -5.0, 0.0, 0.0)
    assert control.breakpoints[1] == (1.0, 0.0, 0.0, 2.0)


def test_running_sup_genuine_double_jump():
    # c0 = -5, pre-jump barrier -3, detected jump above b
    L = BarrierPath(-3.0, ((1.0, 0.0, 4.0),), 5.0)
    control = running_sup_control(L, -5.0)
    assert control.breakpoints[0] == (0.0, -5.0, -3.0, -3.0)
    assert control.breakpoints[1] == (1.0, -3.0, 0.0, 4.0)
    assert [k for (_, k, _) in control.increments()] == ["at", "at", "right"]


def test_neg_inf_never_raises():
    L = BarrierPath(NEG_INF, ((1.0, NEG_INF, NEG_INF), (2.0, -1.0, NEG_INF)), 5.0)
    control = running_sup_control(L, 0.0)
    assert control.breakpoints == ()  # every barrier value below the floor
    # with a lower floor the single finite value is the only move
    control = running_sup_control(L, -3.0)
    assert len(control.breakpoints) == 1
    assert control.breakpoints[0] == (2.0, -3.0, -1.0, -1.0)


def test_ladlag_validation_and_levels():
    with pytest.raises(ValueError):
        LadlagControl(0.0, ((1.0, 0.0, -1.0, 0.0),), 5.0)  # at below left
    with pytest.raises(ValueError):
        LadlagControl(0.0, ((1.0, 1.0, 1.0, 1.0),), 5.0)  # left != running
    control = LadlagControl(0.0, ((1.0, 0.0, 1.0, 2.0), (3.0, 2.0, 2.5, 2.5)), 5.0)
    assert control.level_at(0.5) == 0.0
    assert control.level_at(1.0, "left") == 0.0
    assert control.level_at(1.0, "at") == 1.0
    assert control.level_at(1.0, "right") == 2.0
    assert control.level_at(2.0) == 2.0
    assert control.terminal == 2.5


def test_toy_control_signs():
    path = EventPath(0.0, ((1.0, 0.7), (2.0, -0.3), (3.0, -0.9)), 5.0)
    assert toy_control(path, 0.5) == (1, 0, -1)
    assert toy_control(path, 0.0) == (1, -1, -1)
    assert toy_control(path, 2.0) == (0, 0, 0)


def test_constant_control():
    c = constant_control(-2.0, 5.0)
    assert c.breakpoints == () and c.level_at(3.0) == -2.0


def test_csv_export(tmp_path):
    control = LadlagControl(0.0, ((1.0, 0.0, 1.0, 2.0),), 5.0)
    target = tmp_path / "control.csv"
    control.write_csv(target)
    lines = target.read_text().strip().splitlines()
    assert lines[0] == "time,C_left,C_at,C_right"
    assert lines[1].startswith("1.0,0.0,1.0,2.0")


@st.composite
def barrier_paths(draw):
    n = draw(st.integers(min_value=0, max_value=8))
    finite = st.floats(min_value=-50, max_value=50)
    value = st.one_of(st.just(NEG_INF), finite)
    entries = tuple(
        (float(k + 1), draw(value), draw(value)) for k in range(n)
    )
    return BarrierPath(draw(value), entries, float(n + 1))


@given(L=barrier_paths(), c0=st.floats(min_value=-60, max_value=60))
@settings(max_examples=200)
def test_running_sup_monotone_and_flat_off_support(L, c0):
    control = running_sup_control(L, c0)
    run = c0
    for (t, left, at, right) in control.breakpoints:
        assert run <= left <= at <= right
        # moves only happen at a new running maximum of the barrier
        if t == 0.0:
            assert at == L.l0 and right == at
        else:
            entry = next(e for e in L.entries if e[0] == t)
            if at > left:
                assert at == entry[1]
            if right > at:
                assert right == entry[2]
        run = right
    # the terminal level is the running sup joined with the floor
    sup = max([L.l0] + [v for e in L.entries for v in e[1:]])
    assert control.terminal == max(c0, sup)


def test_predictable_control_left_continuous(tables_small, illustration_params):
    table = tables_small[math.inf]
    gen = rngmod.stream(5, "test")
    for _ in range(50):
        path = simulate_path(illustration_params, illustration_params.horizon(), gen)
        obs = observe(path, SensorSpec(math.inf))
        control = running_sup_control(barrier_path(obs, table), illustration_params.c0)
        for (t, left, at, right) in control.breakpoints:
            if t > 0:
                assert left == at  # blind controller never moves at the tick
