import math

import numpy as np
import pytest
from hypothesis import given, strategies as hst

from homorq import stepsize as st
from homorq.stepsize import AdaptiveState, StepPair


def test_golden_ratio_pair():
    p = StepPair([1.0, 1.0], [1.0, 2.0])
    assert st.bb1(p) == pytest.approx(2 / 3, rel=1e-15)
    assert st.bb2(p) == pytest.approx(3 / 5, rel=1e-15)
    assert st.hbb(p) == pytest.approx((math.sqrt(5) - 1) / 2, rel=1e-12)


@pytest.mark.parametrize("c", [0.01, 0.5, 2.0, 300.0])
def test_collinear_pair_gives_inverse_curvature(c):
    s = np.array([1.0, -2.0, 0.5])
    p = StepPair(s, c * s)
    for rule in (st.bb1, st.bb2, st.hbb):
        assert rule(p) == pytest.approx(1 / c, rel=1e-14)


def test_equal_norms_give_one():
    s = np.array([3.0, 4.0])
    y = np.array([5.0, 0.0])
    assert st.hbb(StepPair(s, y)) == 1.0


def test_undefined_flags():
    p = StepPair([1.0, 0.0], [0.0, 1.0])
    assert st.bb1(p) is None and st.hbb(p) is None
    assert st.bb2(p) == 0.0
    assert st.bb2(StepPair([1.0, 0.0], [0.0, 0.0])) is None
    with pytest.raises(ValueError):
        StepPair([1.0], [1.0, 2.0])


def test_interval_and_quadratic(rng):
    for _ in range(2000):
        s, y = rng.standard_normal((2, 6))
        y *= rng.uniform(0.01, 100.0)
        ss, sy, yy = float(s @ s), float(s @ y), float(y @ y)
        b = st.hbb_from_products(ss, sy, yy)
        if sy > 0:
            assert st.bb2_from_products(ss, sy, yy) * (1 - 1e-12) <= b <= st.bb1_from_products(ss, sy, yy) * (1 + 1e-12)
        else:
            assert b < 0
        a = 1 / b
        resid = sy * a * a + (ss - yy) * a - sy
        assert abs(resid) <= 1e-10 * (abs(sy) * a * a + abs(ss - yy) * abs(a) + abs(sy))


@given(hst.floats(-1e3, 1e3).filter(lambda c: abs(c) > 1e-3))
def test_scale_law(c):
    s = np.array([1.0, 2.0, -0.5])
    y = np.array([0.3, 1.7, 0.2])
    assert st.hbb(StepPair(c * s, c * y)) == pytest.approx(st.hbb(StepPair(s, y)), rel=1e-12)


def test_abb_examples():
    state = AdaptiveState()
    state.push(0.5, None)
    assert st.abb(state, 1.0, 0.5) == 0.5
    assert st.abb(state, 1.0, 1.0) == 1.0
    state = AdaptiveState()
    for v in (0.7, 0.4, 0.6):
        state.push(v, None)
    assert st.abb(state, 1.0, 0.6) == 0.4


def test_ahbb_examples():
    state = AdaptiveState()
    state.push(0.1, 0.55)
    assert st.ahbb(state, 1.0, 0.1, 0.55) == 0.55
    assert st.ahbb(state, 1.0, 0.9, 0.55) == 1.0
    state = AdaptiveState()
    for v in (0.9, 0.61, 0.8):
        state.push(0.5, v)
    assert st.ahbb(state, 1.0, 0.5, 0.8) == 0.61


def test_window_replay():
    state = AdaptiveState(m=5)
    seq = [float(k) for k in range(1, 11)]
    for k, v in enumerate(seq, start=1):
        state.push(v, -v)
        assert len(state.hist_bb2) == min(k, 6)
        assert list(state.hist_bb2) == seq[max(0, k - 6):k]
    assert min(state.hist_hbb) == -10.0


def test_state_validation():
    with pytest.raises(ValueError):
        AdaptiveState(eta=1.0)
    with pytest.raises(ValueError):
        AdaptiveState(m=-1)
