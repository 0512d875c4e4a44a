import numpy as np
import pytest
from hypothesis import given, strategies as st

from lsto.multiplier import (
    MultiplierParams, MultiplierState, extended_upper_limit, update_multiplier,
)

P = MultiplierParams()


def test_ramp_start_and_end():
    assert extended_upper_limit(0, 2.0, 2.0, 0.45, 15) == 1.0
    assert extended_upper_limit(15, 2.0, 2.0, 0.45, 15) == 0.45
    assert extended_upper_limit(100, 1.3, 2.0, 0.45, 15) == 0.45


def test_ramp_midpoint():
    assert extended_upper_limit(5, 1.0, 1.0, 0.45, 15) == pytest.approx(1 - 0.55 / 15 * 5, abs=1e-15)
    assert extended_upper_limit(5, 1.0, 1.0, 0.45, 15) == pytest.approx(0.8166667, abs=1e-7)


def test_first_iteration_at_feasibility():
    s = update_multiplier(None, 2.0, 2.0, 1.0, P, 0)
    assert s.LagGvp == 1.0 and s.LagGv == 1.0


def test_update_above_limit():
    s = update_multiplier(MultiplierState(1.0, 1.0), 0.9, 1.0, 0.45, P, 3)
    assert s.LagGvp == pytest.approx(2.0, abs=1e-15)
    assert s.LagGv == pytest.approx(6.0, abs=1e-14)


def test_update_below_limit_hits_floor():
    s = update_multiplier(MultiplierState(0.15, 0.15), 0.225, 1.0, 0.45, P, 3)
    assert s.LagGvp == 0.1
    assert s.LagGv == pytest.approx(0.0, abs=1e-15)


def test_iteration_zero_ignores_previous_state():
    s = update_multiplier(MultiplierState(4.0, 4.0), 1.0, 1.0, 1.0, P, 0)
    assert s.LagGvp == P.LagGvinit


@given(st.floats(0.01, 1.0), st.floats(0.05, 1.0), st.floats(0.1, 5.0))
def test_clamped_and_sign_monotone(frac, limit, prev):
    s = update_multiplier(MultiplierState(prev, prev), frac, 1.0, limit, P, 7)
    assert P.LagGvMin <= s.LagGvp <= P.LagGvMax
    if frac > limit:
        assert s.LagGvp >= prev
    elif frac < limit:
        assert s.LagGvp <= prev


@given(st.floats(0.1, 5.0), st.floats(0.05, 1.0))
def test_extension_identity_at_feasibility(prev, limit):
    s = update_multiplier(MultiplierState(prev, prev), limit, 1.0, limit, P, 4)
    assert s.LagGv == s.LagGvp == prev


def test_params_invariants():
    with pytest.raises(ValueError):
        MultiplierParams(LagGvinit=0.05)
    with pytest.raises(ValueError):
        MultiplierParams(GvLoop=0)


def test_nonpositive_limit_rejected():
    with pytest.raises(ValueError):
        update_multiplier(None, 1.0, 1.0, 0.0, P, 0)
