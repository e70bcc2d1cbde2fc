import numpy as np
import pytest

from fentropy import serialize
from fentropy.bounds import audenaert_bound, extremal_family, extremal_pair, f_bound, modulus_of_continuity
from fentropy.entropy import binary_entropy, builtin, f_entropy
from fentropy.errors import ParameterError
from fentropy.states import make_rng, trace_distance_batch
from fentropy.verify import (
    clear_cache,
    oracle_max_Df,
    pairs_at_distance,
    sample_check,
    sample_spectra,
    slacks,
    structured_pairs,
    sweep,
)

from conftest import builtin_functions


def test_sample_check_examples():
    rep = sample_check(builtin("shannon"), 2, 1000, 1)
    assert rep.violations == [] and rep.ok
    assert rep.samples == 1100
    rep = sample_check(builtin("tsallis", alpha=2), 5, 1000, 1)
    assert rep.violations == []
    assert rep.min_slack >= -1e-9
    with pytest.raises(ParameterError):
        sample_check(builtin("shannon"), 3, 0, 1)
    with pytest.raises(ParameterError):
        sample_check(builtin("shannon"), 1, 10, 1)


def test_report_is_reproducible():
    f = builtin("tsallis", alpha=1.5)
    clear_cache()
    a = serialize.dumps(sample_check(f, 4, 3000, 9).to_dict())
    clear_cache()
    b = serialize.dumps(sample_check(f, 4, 3000, 9, workers=3).to_dict())
    assert a == b
    assert "elapsed" not in a


def test_violation_is_recorded_not_raised():
    # a bound that is too small for the pairs must show up as violations
    f = builtin("shannon")
    spectra = sample_spectra(3, 200, 0)
    gap, bound, slack = slacks(f, 3, spectra)
    assert np.all(slack >= -1e-9)
    rep = sample_check(f, 3, 200, 0, tol=-10.0)
    assert not rep.ok and len(rep.violations) == rep.samples


def test_structured_pairs_are_states():
    R, S, kinds = structured_pairs(4, 50, make_rng(3))
    assert set(kinds) == {"commuting", "rank_deficient", "pure_vs_mixed", "near_identical", "near_peak"}
    for M in np.concatenate([R, S]):
        assert abs(np.trace(M).real - 1) < 1e-12
        assert np.linalg.eigvalsh(M).min() > -1e-12
    T = trace_distance_batch(R, S)
    near_peak = np.array([k == "near_peak" for k in kinds])
    assert np.all(np.abs(T[near_peak] - 0.75) <= 1e-3 + 1e-12)


@pytest.mark.parametrize("eps", [0.0, 0.3, 0.75, 1.0])
def test_pairs_at_distance(eps):
    R, S = pairs_at_distance(5, eps, 40, make_rng(1))
    np.testing.assert_allclose(trace_distance_batch(R, S), eps, atol=1e-12)


def test_oracle_examples():
    sh = builtin("shannon")
    res = oracle_max_Df(sh, 2, 0.5)
    assert res.max_Df == pytest.approx(1.0, abs=1e-6)
    assert res.bound == audenaert_bound(0.5, 2)
    np.testing.assert_allclose(res.argmax.p, [1, 0], atol=1e-6)
    np.testing.assert_allclose(res.argmax.q, [0.5, 0.5], atol=1e-6)
    res = oracle_max_Df(builtin("tsallis", alpha=2), 3, 0.5)
    assert res.max_Df == pytest.approx(0.625, abs=1e-4)
    res = oracle_max_Df(sh, 3, 0.0)
    assert res.max_Df == 0 and np.array_equal(res.argmax.p, res.argmax.q)


def test_oracle_errors():
    sh = builtin("shannon")
    with pytest.raises(ParameterError, match=r"d in \{2,3\}"):
        oracle_max_Df(sh, 4, 0.3)
    with pytest.raises(ParameterError):
        oracle_max_Df(sh, 2, 0.3, grid=10)


def test_oracle_without_polish_is_within_grid_tolerance():
    for f in builtin_functions():
        for d in (2, 3):
            res = oracle_max_Df(f, d, 0.35, grid=400, polish=0)
            assert -1e-12 <= res.gap <= 5e-4


def _sorted_pair(p, q):
    order = np.lexsort((-q, -p))
    return p[order], q[order]


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("eps", [0.2, 0.5, 0.8])
def test_oracle_argmax_has_extremal_form(d, eps):
    for f in builtin_functions():
        res = oracle_max_Df(f, d, eps, grid=200)
        p, q = _sorted_pair(res.argmax.p, res.argmax.q)
        fam = extremal_family(d, eps, float(p[0]))
        fp, fq = _sorted_pair(fam.p, fam.q)
        assert np.max(np.abs(p - fp)) <= 1e-3
        assert np.max(np.abs(q - fq)) <= 1e-3
        assert abs(res.argmax.eps - eps) <= 1e-12


def test_tabulated_oracle_respects_bound():
    x = np.linspace(0, 1, 11)
    from fentropy.entropy import tabulated

    f = tabulated(x, x**2 - x, name="pl")
    for d in (2, 3):
        res = oracle_max_Df(f, d, 0.45, grid=120)
        assert -1e-12 <= res.gap <= 1e-6


@pytest.mark.parametrize("d", [2, 3, 5])
def test_modulus_of_continuity_empirically(d):
    spectra = sample_spectra(d, 2000, 17)
    for f in builtin_functions():
        gap, _, _ = slacks(f, d, spectra)
        for e in np.linspace(0.05, 1, 20):
            m = modulus_of_continuity(f, d, e)
            inside = spectra.distance <= e
            if inside.any():
                assert gap[inside].max() <= m + 1e-9
            r, s = extremal_pair(d, min(e, 1 - 1 / d))
            assert abs(abs(f_entropy(r, f) - f_entropy(s, f)) - m) <= 1e-10


def test_sweep_examples():
    sh = builtin("shannon")
    rows = sweep(sh, 2, [0, 0.25, 0.5, 0.75, 1])
    vals = [r.delta for r in rows]
    h = binary_entropy(0.25)
    np.testing.assert_allclose(vals, [0, h, 1, h, 0], atol=1e-15)
    assert rows[1].delta == rows[3].delta
    assert [r.regime for r in rows] == ["rising", "rising", "peak", "falling", "falling"]
    assert sweep(sh, 2, []) == []
    with pytest.raises(ParameterError, match="sorted"):
        sweep(sh, 2, [0.5, 0.2])
    with pytest.raises(ParameterError):
        sweep(sh, 2, [0.5, 1.2])


def test_sweep_optional_columns():
    f = builtin("tsallis", alpha=3)
    rows = sweep(f, 3, np.linspace(0, 1, 6), n=50, seed=4, oracle=True, oracle_grid=100)
    for r in rows:
        assert r.min_slack >= -1e-9
        assert -1e-12 <= r.oracle_gap <= 1e-6
        assert r.delta == f_bound(f, 3, r.eps).value
    rows = sweep(builtin("shannon", t_max=2.0), 3, [0, 0.5, 1.5], t=2.0)
    assert rows[-1].regime == "falling"
    with pytest.raises(ParameterError):
        sweep(builtin("shannon", t_max=2.0), 3, [0.5], t=2.0, n=10)
