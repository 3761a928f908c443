"""Drift classification and exact return-count series against path oracles."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pennerlift import (
    IntMatrix,
    PerronData,
    ReducibleError,
    SeriesCapError,
    ShiftChain,
    Verdict,
    classify_drift,
    entropy,
    lift_stochastic,
    parry,
    perron_eigenpair,
    return_series,
    return_series_verdict,
)

from conftest import heavy_state


def srw_chain():
    return ShiftChain(IntMatrix([[1]]), IntMatrix([[0]]), IntMatrix([[1]]))


def biased_chain():
    return ShiftChain(IntMatrix([[1]]), IntMatrix([[0]]), IntMatrix([[2]]))


def translation_chain():
    return ShiftChain(IntMatrix([[0]]), IntMatrix([[0]]), IntMatrix([[1]]))


def with_pd(chain):
    return chain, perron_eigenpair(chain.base_matrix)


# -- stochastic normalisation ---------------------------------------------------


def test_parry_rows_sum_to_one_and_stationary_is_stationary():
    m = IntMatrix([[2, 1], [1, 1]])
    data = parry(m, perron_eigenpair(m))
    assert np.allclose(data.transition.sum(axis=1), 1.0, atol=1e-12)
    assert np.allclose(data.stationary @ data.transition, data.stationary,
                       atol=1e-12)
    assert data.stationary.sum() == pytest.approx(1.0, abs=1e-12)
    assert (data.stationary > 0).all()


def test_parry_on_corpus_matrices(corpus_chains):
    for name, (chain, pd) in corpus_chains.items():
        data = parry(chain.base_matrix, pd)
        assert np.allclose(data.transition.sum(axis=1), 1.0, atol=1e-12), name
        assert np.allclose(data.stationary @ data.transition,
                           data.stationary, atol=1e-12), name


def test_parry_rejects_unreliable_eigendata():
    m = IntMatrix([[2, 1], [1, 1]])
    sloppy = PerronData(lam=2.6, u=(0.7, 0.4), v=(1.2, 0.8), residual=0.5)
    with pytest.raises(ReducibleError, match="residual"):
        parry(m, sloppy)


def test_parry_dimension_mismatch():
    m = IntMatrix([[2, 1], [1, 1]])
    with pytest.raises(ValueError):
        parry(IntMatrix([[3]]), perron_eigenpair(m))


def test_lift_stochastic_probabilities():
    chain, pd = with_pd(biased_chain())
    walk = lift_stochastic(chain, pd)
    assert walk.p_minus[0, 0] == pytest.approx(1 / 3, abs=1e-12)
    assert walk.p_plus[0, 0] == pytest.approx(2 / 3, abs=1e-12)
    assert walk.p_zero[0, 0] == 0.0


def test_lift_stochastic_row_mass_on_corpus(corpus_stochastic):
    for name, walk in corpus_stochastic.items():
        assert np.allclose(walk.row_mass(), 1.0, atol=1e-12), name


def test_lift_stochastic_dimension_mismatch():
    chain, _ = with_pd(srw_chain())
    _, pd2 = with_pd(ShiftChain(IntMatrix.zeros(2), IntMatrix([[1, 1], [1, 1]]),
                                IntMatrix.zeros(2)))
    with pytest.raises(ValueError):
        lift_stochastic(chain, pd2)


# -- drift classification ---------------------------------------------------------


def test_srw_balanced_and_null_recurrent():
    result = classify_drift(*with_pd(srw_chain()))
    assert result.verdict is Verdict.NULL_RECURRENT
    assert result.drift_left == pytest.approx(1.0, abs=1e-12)
    assert result.drift_right == pytest.approx(1.0, abs=1e-12)
    assert result.exact_balance
    assert result.period == 2
    assert not result.positive_recurrent_possible


def test_biased_drifts_and_transient():
    result = classify_drift(*with_pd(biased_chain()))
    assert result.verdict is Verdict.TRANSIENT
    assert result.drift_left == pytest.approx(1.0, abs=1e-12)
    assert result.drift_right == pytest.approx(2.0, abs=1e-12)
    assert not result.exact_balance


def test_translation_is_reducible():
    result = classify_drift(*with_pd(translation_chain()))
    assert result.verdict is Verdict.REDUCIBLE
    assert result.period is None


def test_balanced_without_structural_symmetry():
    # drifts agree numerically although A+ != A-^T: the float path
    chain = ShiftChain(
        a_minus=IntMatrix([[1, 0], [0, 0]]),
        a_zero=IntMatrix([[0, 1], [1, 0]]),
        a_plus=IntMatrix([[0, 0], [0, 1]]),
    )
    assert not chain.is_level_symmetric()
    result = classify_drift(*with_pd(chain))
    assert result.verdict is Verdict.NULL_RECURRENT
    assert not result.exact_balance
    assert result.drift_left == pytest.approx(result.drift_right, abs=1e-12)


def test_classify_corpus_verdicts(corpus_classifications):
    assert corpus_classifications["srw"].verdict is Verdict.NULL_RECURRENT
    assert corpus_classifications["biased"].verdict is Verdict.TRANSIENT
    assert corpus_classifications["translation"].verdict is Verdict.REDUCIBLE
    assert corpus_classifications[
        "twocurve-lifted"].verdict is Verdict.NULL_RECURRENT
    assert corpus_classifications[
        "genus3-beta"].verdict is Verdict.NULL_RECURRENT


def test_lifted_corpus_entries_balance_exactly(corpus_chains,
                                               corpus_classifications):
    for name in ("twocurve-lifted", "genus3-beta"):
        chain, _ = corpus_chains[name]
        assert chain.is_level_symmetric(), name
        result = corpus_classifications[name]
        assert result.exact_balance, name
        assert result.drift_left == pytest.approx(
            result.drift_right, abs=1e-12), name


def test_genus3_drift_value(corpus_classifications):
    # u A- v for the detour system; frozen against the closed-form run
    result = corpus_classifications["genus3-beta"]
    assert result.drift_left == pytest.approx(0.585410196624968, abs=1e-9)


def test_classify_rejects_bad_tolerance():
    chain, pd = with_pd(srw_chain())
    with pytest.raises(ValueError):
        classify_drift(chain, pd, tol=0.0)


# -- exact return series -----------------------------------------------------------


def brute_force_srw_counts(n_max):
    """Enumerate every +-1 path; count closed ones and first returns."""
    a = [0] * n_max
    f = [0] * n_max
    for n in range(1, n_max + 1):
        for signs in itertools.product((-1, 1), repeat=n):
            partial = list(itertools.accumulate(signs))
            if partial[-1] == 0:
                a[n - 1] += 1
                if 0 not in partial[:-1]:
                    f[n - 1] += 1
    return a, f


def test_srw_series_matches_brute_force():
    chain, pd = with_pd(srw_chain())
    series = return_series(chain, pd, n_max=12)
    a, f = brute_force_srw_counts(12)
    assert list(series.counts) == a
    assert list(series.first_returns) == f
    assert series.counts[0::2] == (0,) * 6  # odd lengths cannot close


def test_srw_small_terms_and_sums():
    chain, pd = with_pd(srw_chain())
    series = return_series(chain, pd, n_max=6)
    assert series.counts == (0, 2, 0, 6, 0, 20)
    assert series.first_returns == (0, 2, 0, 2, 0, 4)
    assert series.partial_sums[1] == pytest.approx(0.5, abs=1e-15)
    assert series.partial_sums[3] == pytest.approx(0.625, abs=1e-15)


def test_srw_partial_sums_match_central_binomial_formula():
    chain, pd = with_pd(srw_chain())
    series = return_series(chain, pd, n_max=64, cap=64)
    for n in range(1, 33):
        want = 1.0 - math.comb(2 * n, n) / 4 ** n
        assert series.partial_sums[2 * n - 1] == pytest.approx(want,
                                                               abs=1e-12)
    assert series.partial_sums[-1] == pytest.approx(0.9006532462520331,
                                                    abs=1e-15)


def weighted_path_oracle(chain, state, n_max):
    """Dict DP over (index, level) with big-int weights; independent of the
    sparse column iteration inside return_series."""
    d = chain.block_dim
    blocks = {-1: chain.a_minus, 0: chain.a_zero, 1: chain.a_plus}
    a = []
    f = []
    front = {state: 1}
    fronts = [front]
    for n in range(1, n_max + 1):
        new = {}
        for (i, lvl), weight in fronts[-1].items():
            for shift, block in blocks.items():
                for j in range(d):
                    x = block[i, j]
                    if x:
                        key = (j, lvl + shift)
                        new[key] = new.get(key, 0) + weight * x
        fronts.append(new)
        a.append(new.get(state, 0))
    for n in range(1, n_max + 1):
        f_n = a[n - 1]
        for k in range(1, n):
            f_n -= f[k - 1] * a[n - k - 1]
        f.append(f_n)
    return a, f


def test_biased_series_matches_weighted_dp():
    chain, pd = with_pd(biased_chain())
    series = return_series(chain, pd, n_max=20)
    a, f = weighted_path_oracle(chain, (0, 0), 20)
    assert list(series.counts) == a
    assert list(series.first_returns) == f


def test_biased_sums_plateau_below_two_thirds():
    # the walk escapes upward with probability 1/3, so the return sum
    # climbs to 2/3 and never crosses it
    chain, pd = with_pd(biased_chain())
    series = return_series(chain, pd, n_max=64, cap=64)
    sums = series.partial_sums
    assert all(s <= 2 / 3 + 1e-12 for s in sums)
    assert sums[-1] == pytest.approx(2 / 3, abs=3e-4)
    assert 2 / 3 - sums[-1] > 1e-5  # strictly short of the limit


def test_lifted_series_matches_weighted_dp(corpus_chains):
    for name in ("twocurve-lifted", "genus3-beta"):
        chain, pd = corpus_chains[name]
        state = heavy_state(chain, pd)
        series = return_series(chain, pd, state=state, n_max=10)
        a, f = weighted_path_oracle(chain, state, 10)
        assert list(series.counts) == a, name
        assert list(series.first_returns) == f, name


def truncated_power_counts(chain, state, n_max):
    """Second oracle: diagonal of powers of a wide finite section."""
    w = n_max + 1
    section = chain.to_laurent().truncate(w).to_float_array().astype(np.int64)
    d = chain.block_dim
    idx = (state[1] + w) * d + state[0]
    out = []
    acc = np.eye(section.shape[0], dtype=np.int64)
    for _ in range(n_max):
        acc = acc @ section
        out.append(int(acc[idx, idx]))
    return out


def test_counts_equal_truncated_section_powers(corpus_chains):
    for name, (chain, pd) in corpus_chains.items():
        state = heavy_state(chain, pd)
        series = return_series(chain, pd, state=state, n_max=8)
        assert list(series.counts) == truncated_power_counts(
            chain, state, 8), name


def test_normalised_counts_are_return_probabilities(corpus_stochastic,
                                                    corpus_chains):
    """(P^n)_xx == a_n / lam^n: the Parry scaling telescopes along loops."""
    for name, (chain, pd) in corpus_chains.items():
        walk = corpus_stochastic[name]
        state = heavy_state(chain, pd)
        w = 9
        d = chain.block_dim
        idx = (state[1] + w) * d + state[0]
        n = d * (2 * w + 1)
        prob = np.zeros((n, n))
        for shift, block in ((-1, walk.p_minus), (0, walk.p_zero),
                             (1, walk.p_plus)):
            for lvl in range(-w, w + 1):
                tgt = lvl + shift
                if -w <= tgt <= w:
                    r, c = (lvl + w) * d, (tgt + w) * d
                    prob[r:r + d, c:c + d] = block
        series = return_series(chain, pd, state=state, n_max=8)
        acc = np.eye(n)
        for step in range(1, 9):
            acc = acc @ prob
            want = series.counts[step - 1] / pd.lam ** step
            assert acc[idx, idx] == pytest.approx(want, rel=1e-10,
                                                  abs=1e-12), name


_chain_grids = st.integers(min_value=1, max_value=2).flatmap(
    lambda d: st.tuples(*[
        st.lists(st.lists(st.integers(min_value=0, max_value=2),
                          min_size=d, max_size=d),
                 min_size=d, max_size=d)
        for _ in range(3)
    ])
)


@settings(max_examples=40, deadline=None)
@given(_chain_grids)
def test_renewal_extraction_is_nonnegative_and_bounded(grids):
    lo, zero, hi = (IntMatrix(g) for g in grids)
    chain = ShiftChain(lo, zero, hi)
    try:
        pd = perron_eigenpair(chain.base_matrix)
    except ReducibleError:
        return
    if pd.lam < 1.0:
        return
    series = return_series(chain, pd, n_max=16)
    assert all(f >= 0 for f in series.first_returns)
    assert all(f <= a for f, a in zip(series.first_returns, series.counts))
    sums = series.partial_sums
    assert all(b >= a - 1e-12 for a, b in zip(sums, sums[1:]))
    assert sums[-1] <= 1.0 + 1e-9


def test_series_rejects_out_of_range_state():
    chain, pd = with_pd(srw_chain())
    with pytest.raises(ValueError):
        return_series(chain, pd, state=(1, 0))
    with pytest.raises(ValueError):
        return_series(chain, pd, n_max=0)


def test_series_cap_enforced():
    chain, pd = with_pd(srw_chain())
    with pytest.raises(SeriesCapError):
        return_series(chain, pd, n_max=65)
    with pytest.raises(SeriesCapError):
        return_series(chain, pd, n_max=20, cap=16)


# -- series verdicts ------------------------------------------------------------


def test_series_verdicts_on_corpus(corpus_chains):
    want = {
        "srw": Verdict.NULL_RECURRENT,
        "biased": Verdict.TRANSIENT,
        "twocurve-lifted": Verdict.NULL_RECURRENT,
        "genus3-beta": Verdict.NULL_RECURRENT,
    }
    for name, verdict in want.items():
        chain, pd = corpus_chains[name]
        series = return_series(chain, pd, state=heavy_state(chain, pd),
                               n_max=64, cap=64)
        assert return_series_verdict(series) is verdict, name


def test_balanced_sum_gap_shrinks_like_inverse_sqrt(corpus_chains):
    # 1 - S_N tracks 1/sqrt(N) for balanced chains: gap at N=64 below 0.15
    # at a heavy state, while the transient entry stays bounded away from 1
    for name in ("srw", "twocurve-lifted", "genus3-beta"):
        chain, pd = corpus_chains[name]
        series = return_series(chain, pd, state=heavy_state(chain, pd),
                               n_max=64, cap=64)
        assert 1.0 - series.partial_sums[-1] < 0.15, name
    chain, pd = corpus_chains["biased"]
    series = return_series(chain, pd, n_max=64, cap=64)
    assert 1.0 - series.partial_sums[-1] > 0.3


def test_window_spectra_increase_to_the_stretch_factor(corpus_chains):
    # finite sections only lose loops, so their eigenvalues climb from
    # below toward the infinite chain's growth rate
    for name in ("srw", "twocurve-lifted"):
        chain, pd = corpus_chains[name]
        previous = 0.0
        for w in (2, 4, 8):
            section = chain.to_laurent().truncate(w)
            lam_w = perron_eigenpair(section).lam
            assert previous - 1e-12 <= lam_w <= pd.lam + 1e-12, name
            previous = lam_w
        assert pd.lam - previous < 0.2, name


# -- entropy ---------------------------------------------------------------------


def test_entropy_is_log_stretch(corpus_chains):
    chain, pd = corpus_chains["srw"]
    assert entropy(pd) == pytest.approx(math.log(2.0), abs=1e-12)
    chain, pd = corpus_chains["twocurve-lifted"]
    assert entropy(pd) == pytest.approx(math.log(3 + 2 * math.sqrt(2)),
                                        abs=1e-10)


def test_entropy_rejects_contracting_data():
    with pytest.raises(ValueError):
        entropy(PerronData(lam=0.5, u=(1.0,), v=(1.0,), residual=0.0))
