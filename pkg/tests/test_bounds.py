import math

import numpy as np
import pytest

from fentropy.bounds import (
    audenaert_bound,
    extremal_family,
    extremal_pair,
    f_bound,
    f_bound_grid,
    f_bound_trace_t,
    modulus_of_continuity,
    regime,
)
from fentropy.entropy import binary_entropy, builtin, f_entropy
from fentropy.errors import ParameterError
from fentropy.states import trace_distance

from conftest import builtin_functions

FUNCS = builtin_functions()
ids = [f.label for f in FUNCS]


def test_audenaert_examples():
    assert audenaert_bound(0, 5) == 0
    assert audenaert_bound(0.5, 2) == 1.0
    assert audenaert_bound(0.5, 3) == pytest.approx(1.5, abs=1e-15)
    with pytest.raises(ParameterError):
        audenaert_bound(1.2, 3)
    with pytest.raises(ParameterError):
        audenaert_bound(0.2, 1)


@pytest.mark.parametrize("d", [2, 3, 5, 16])
def test_shannon_bound_is_audenaert(d):
    sh = builtin("shannon")
    for e in np.linspace(0, 1, 101):
        assert abs(f_bound(sh, d, e).value - (binary_entropy(e) + e * math.log2(d - 1))) <= 1e-12


def test_natural_log_variant_is_audenaert_in_nats():
    # same formula up to a factor ln 2
    f = builtin("natural_xlogx")
    for d in (2, 4):
        for e in (0.1, 0.5, 0.9):
            assert f_bound(f, d, e).value == pytest.approx(audenaert_bound(e, d) * math.log(2), abs=1e-12)


def test_tsallis_two_hand_values():
    f = builtin("tsallis", alpha=2)
    # eps (2 - eps) - eps^2 / (d - 1)
    for d in (2, 3, 6):
        for e in (0.1, 0.5, 0.8):
            assert f_bound(f, d, e).value == pytest.approx(e * (2 - e) - e * e / (d - 1), abs=1e-14)
    assert f_bound(f, 2, 0.5).value == pytest.approx(0.5, abs=1e-15)
    assert f_bound(f, 3, 0.5).value == pytest.approx(0.625, abs=1e-15)


@pytest.mark.parametrize("f", FUNCS, ids=ids)
def test_zero_at_zero_and_trace_one_coincidence(f):
    for d in (2, 3, 7):
        res = f_bound(f, d, 0.0)
        assert res.value == 0.0 and res.regime == "rising"
        for e in (0.0, 0.3, 1.0):
            assert f_bound_trace_t(f, d, 1.0, e).value == f_bound(f, d, e).value
        assert f_bound_trace_t(f, d, 0.5, 0.0).value == 0.0


def test_trace_t_hand_value():
    f = builtin("gini_simpson", t_max=2.0)
    assert f_bound_trace_t(f, 2, 2.0, 1.0).value == pytest.approx(2.0, abs=1e-15)


def test_trace_t_errors():
    f = builtin("shannon")
    with pytest.raises(ParameterError):
        f_bound_trace_t(f, 3, 0.5, 0.6)
    with pytest.raises(ParameterError):
        f_bound_trace_t(f, 3, 1.5, 0.6)
    with pytest.raises(ParameterError):
        f_bound(f, 1, 0.1)


def test_regime_labels():
    assert regime(0.5, 2) == "peak"
    assert regime(2 / 3, 3) == "peak"
    assert regime(0.2, 3) == "rising"
    assert regime(0.9, 3) == "falling"
    assert f_bound(builtin("shannon"), 4, 0.75).regime == "peak"


def test_modulus_of_continuity():
    sh = builtin("shannon")
    assert modulus_of_continuity(sh, 2, 1.0) == pytest.approx(1.0)
    assert modulus_of_continuity(sh, 3, 0.0) == 0.0
    for f in FUNCS:
        for d in (2, 3, 5):
            tail = [modulus_of_continuity(f, d, e) for e in np.linspace(1 - 1 / d, 1, 7)]
            assert max(tail) - min(tail) == 0.0
            assert modulus_of_continuity(f, d, 0.2) == f_bound(f, d, 0.2).value


@pytest.mark.parametrize("f", FUNCS, ids=ids)
@pytest.mark.parametrize("d", range(2, 9))
def test_unimodal(f, d):
    grid = np.linspace(0, 1, 1000)
    vals = f_bound_grid(f, d, grid)
    peak = 1 - 1 / d
    rise = vals[grid <= peak]
    fall = vals[grid >= peak]
    assert np.all(np.diff(rise) >= -1e-12)
    assert np.all(np.diff(fall) <= 1e-12)
    assert np.all(vals >= -1e-12)


@pytest.mark.parametrize("f", FUNCS, ids=ids)
def test_monotone_in_t_and_d(f):
    eps = 0.15
    ts = np.round(np.arange(0.2, 1.0001, 0.1), 10)
    for d in range(2, 9):
        by_t = [f_bound_trace_t(f, d, t, eps).value for t in ts]
        assert np.all(np.diff(by_t) >= -1e-12)
    for t in ts:
        by_d = [f_bound_trace_t(f, d, t, eps).value for d in range(2, 9)]
        assert np.all(np.diff(by_d) >= -1e-12)


@pytest.mark.parametrize("f", FUNCS, ids=ids)
@pytest.mark.parametrize("t", [0.5, 1.0])
def test_not_monotone_in_eps(f, t):
    grid = np.linspace(0, t, 201)
    vals = f_bound_grid(f, 2, grid, t=t)
    # some later grid point is strictly lower than an earlier one
    running_max = np.maximum.accumulate(vals)
    assert np.any(running_max - vals > 1e-6)


def test_extremal_family_examples():
    pair = extremal_family(3, 0.6, 1.0)
    np.testing.assert_allclose(pair.p, [1, 0, 0])
    np.testing.assert_allclose(pair.q, [0.4, 0.3, 0.3], atol=1e-15)
    assert pair.eps == pytest.approx(0.6, abs=1e-15)
    pair = extremal_family(2, 0.0, 1.0)
    np.testing.assert_array_equal(pair.p, pair.q)
    pair = extremal_family(2, 0.5, 1.0)
    np.testing.assert_allclose(pair.q, [0.5, 0.5])
    with pytest.raises(ParameterError):
        extremal_family(3, 0.5, 0.4)


def test_extremal_family_reports_actual_distance():
    # (1 - x + eps)/(d - 1) < 1 - x here, so E(p, q) exceeds eps
    pair = extremal_family(4, 0.1, 0.5)
    assert pair.eps == pytest.approx(0.5 * (0.1 + 0.5 - 0.2 + 2 * 0.2), abs=1e-15)
    assert pair.eps > 0.1


def test_extremal_pair_examples():
    r, s = extremal_pair(2, 1.0)
    np.testing.assert_array_equal(r.matrix, np.diag([1.0, 0.0]))
    np.testing.assert_array_equal(s.matrix, np.diag([0.0, 1.0]))
    r, s = extremal_pair(4, 0.3)
    np.testing.assert_allclose(np.diag(s.matrix).real, [0.7, 0.1, 0.1, 0.1], atol=1e-15)
    r, s = extremal_pair(2, 0.0)
    np.testing.assert_array_equal(r.matrix, s.matrix)


@pytest.mark.parametrize("d", [2, 3, 6])
def test_attainment(d):
    for e in np.linspace(0, 1, 11):
        r, s = extremal_pair(d, e)
        assert abs(trace_distance(r, s) - e) <= 1e-12
        for f in FUNCS:
            gap = abs(f_entropy(r, f) - f_entropy(s, f))
            assert abs(gap - f_bound(f, d, e).value) <= 1e-10
