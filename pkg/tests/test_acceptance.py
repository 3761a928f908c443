"""Acceptance gate: one test per release criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as they
print.  Criterion 5b is expected to fail: the biased chain's return sum is
still 1.6e-3 away from its limit at N=40, far outside the demanded 1e-6,
and the suite records that honestly (see the strict xfail).
"""

import contextlib
import itertools
import math
import time

import numpy as np
import pytest

from pennerlift import (
    CurveSystem,
    Generator,
    GeneratorKind,
    GeneratorWord,
    IntMatrix,
    BandedVerdict,
    ShiftChain,
    StochasticShiftChain,
    TwistWord,
    Verdict,
    banded_irreducible,
    banded_period,
    classify_drift,
    commutation_type,
    corpus_names,
    diffusion_exponent,
    laurent_eval_one,
    lift_penner_matrix,
    lift_stochastic,
    load_corpus,
    parry,
    penner_matrix,
    perron_eigenpair,
    qbd_fold,
    reblock,
    return_series,
    return_series_verdict,
    return_stats,
    stretch_factor,
)
from pennerlift.cli import main as cli_main
from pennerlift.errors import ReducibleError

from conftest import build_chain, heavy_state

SEED = 42


@contextlib.contextmanager
def announce(number, name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} {name}: FAIL")
        raise
    print(f"ACCEPTANCE {number} {name}: PASS")


def corpus_objects():
    return {name: load_corpus(name) for name in corpus_names()}


def test_criterion_01_stretch_factors():
    with announce("01", "penner stretch factors"):
        t0 = time.perf_counter()
        system = CurveSystem(("c", "d"), ("C", "D"),
                             IntMatrix([[0, 1], [1, 0]]),
                             filling_asserted=True)
        single = stretch_factor(system, TwistWord(((0, 1), (1, -1))))
        assert abs(single.lam - (3 + math.sqrt(5)) / 2) <= 1e-9
        double = stretch_factor(system, TwistWord(((0, 2), (1, -2))))
        assert abs(double.lam - (3 + 2 * math.sqrt(2))) <= 1e-9
        assert time.perf_counter() - t0 < 1.0


def test_criterion_02_eval_at_one_exact():
    with announce("02", "eval-at-1 consistency"):
        t0 = time.perf_counter()
        checked = 0
        for name, sf in corpus_objects().items():
            if sf.mode == "lifted-penner":
                lifted = lift_penner_matrix(sf.lifted_system(),
                                            sf.twist_word(), check=False)
                base = penner_matrix(sf.curve_system(), sf.twist_word(),
                                     check=False)
                assert laurent_eval_one(lifted) == base, name
                checked += 1
            elif sf.mode == "raw-chain":
                chain = sf.shift_chain()
                assert laurent_eval_one(chain.to_laurent()) \
                    == chain.base_matrix, name
                checked += 1
        assert checked == 5
        assert time.perf_counter() - t0 < 1.0


def test_criterion_03_qbd_fold_templates():
    with announce("03", "QBD fold fidelity"):
        rng = np.random.default_rng(SEED)
        for _ in range(100):
            d = int(rng.integers(1, 5))
            lo = rng.integers(0, 6, size=(d, d))
            zero = rng.integers(0, 6, size=(d, d))
            hi = rng.integers(0, 6, size=(d, d))
            chain = ShiftChain(IntMatrix(lo.tolist()),
                               IntMatrix(zero.tolist()),
                               IntMatrix(hi.tolist()))
            got = qbd_fold(chain)
            z = np.zeros((d, d), dtype=np.int64)
            template = {
                "corner": np.block([[zero, hi], [lo, zero]]),
                "down": np.block([[hi, z], [z, lo]]),
                "level": np.block([[zero, z], [z, zero]]),
                "up": np.block([[lo, z], [z, hi]]),
            }
            for key, want in template.items():
                have = np.array(getattr(got, key).to_lists())
                assert np.array_equal(have, want), key
            # stochastic fold follows the same templates bit-exactly
            mass = lo + zero + hi
            if (mass.sum(axis=1) == 0).any():
                continue
            walk = StochasticShiftChain(
                p_minus=lo / mass.sum(axis=1)[:, None],
                p_zero=zero / mass.sum(axis=1)[:, None],
                p_plus=hi / mass.sum(axis=1)[:, None])
            sgot = qbd_fold(walk)
            assert np.array_equal(
                sgot.corner, np.block([[walk.p_zero, walk.p_plus],
                                       [walk.p_minus, walk.p_zero]]))
            assert np.array_equal(
                sgot.down, np.block([[walk.p_plus, z * 0.0],
                                     [z * 0.0, walk.p_minus]]))


def _random_dichotomy_chain(rng):
    """Candidate chains for the dichotomy sweep.

    Half are built exactly level-symmetric (null recurrent by structure);
    the rest are free draws kept only when the drifts differ by a wide
    margin, because a finite series cannot resolve arbitrarily small
    drift from zero drift.
    """
    d = int(rng.integers(1, 4))
    if rng.random() < 0.5:
        a0 = rng.integers(0, 3, size=(d, d))
        a0 = np.minimum(a0 + a0.T, 3)
        ap = rng.integers(0, 3, size=(d, d))
        return ShiftChain(IntMatrix(ap.T.tolist()), IntMatrix(a0.tolist()),
                          IntMatrix(ap.tolist())), True
    blocks = [rng.integers(0, 3, size=(d, d)) for _ in range(3)]
    return ShiftChain(*(IntMatrix(b.tolist()) for b in blocks)), False


def test_criterion_04_drift_dichotomy():
    with announce("04", "drift dichotomy vs return series"):
        rng = np.random.default_rng(SEED)
        kept = 0
        while kept < 500:
            chain, symmetric = _random_dichotomy_chain(rng)
            try:
                pd = perron_eigenpair(chain.base_matrix)
            except ReducibleError:
                continue
            if banded_irreducible(chain) is not BandedVerdict.TRUE:
                continue
            result = classify_drift(chain, pd)
            if result.verdict is Verdict.REDUCIBLE:
                continue
            if not symmetric:
                top = max(result.drift_left, result.drift_right)
                low = min(result.drift_left, result.drift_right)
                if top <= 0 or low / top > 0.45:
                    continue
            # the dichotomy: no third recurrence outcome exists
            assert result.verdict in (Verdict.NULL_RECURRENT,
                                      Verdict.TRANSIENT)
            assert not result.positive_recurrent_possible
            series = return_series(chain, pd,
                                   state=heavy_state(chain, pd),
                                   n_max=64, cap=64)
            assert return_series_verdict(series) is result.verdict
            kept += 1
        assert kept == 500


def brute_force_first_return_probability(n_max):
    """Sign-path enumeration for the balanced walk, probabilities in
    exact dyadic floats."""
    sums = []
    total = 0.0
    for n in range(1, n_max + 1):
        hits = 0
        for signs in itertools.product((-1, 1), repeat=n):
            walk = list(itertools.accumulate(signs))
            if walk[-1] == 0 and 0 not in walk[:-1]:
                hits += 1
        total += hits / 2.0 ** n
        sums.append(total)
    return sums


def test_criterion_05a_srw_series_identity():
    with announce("05a", "balanced-walk return series exact"):
        chain = ShiftChain(IntMatrix([[1]]), IntMatrix([[0]]),
                           IntMatrix([[1]]))
        pd = perron_eigenpair(chain.base_matrix)
        series = return_series(chain, pd, n_max=12)
        oracle = brute_force_first_return_probability(12)
        for n in range(1, 13):
            assert series.partial_sums[n - 1] == oracle[n - 1]
            if n % 2 == 0:
                formula = 1.0 - math.comb(n, n // 2) / 2.0 ** n
                assert series.partial_sums[n - 1] == formula


@pytest.mark.xfail(
    strict=True,
    reason="the biased return sum is still 1.6e-3 short of 2/3 at N=40; "
           "the demanded 1e-6 needs N near 600 (gap shrinks like "
           "(8/9)^n / n^1.5), so the bound as stated cannot hold")
def test_criterion_05b_biased_series_limit():
    with announce("05b", "biased return sum within 1e-6 by N=40"):
        chain = ShiftChain(IntMatrix([[1]]), IntMatrix([[0]]),
                           IntMatrix([[2]]))
        pd = perron_eigenpair(chain.base_matrix)
        series = return_series(chain, pd, n_max=40)
        assert abs(series.partial_sums[-1] - 2 / 3) <= 1e-6


def test_criterion_06_lift_null_recurrence():
    with announce("06", "lifted corpus null recurrence + Monte Carlo"):
        t0 = time.perf_counter()
        lifted_entries = [(name, sf) for name, sf in corpus_objects().items()
                          if sf.mode == "lifted-penner"]
        assert len(lifted_entries) == 2
        for name, sf in lifted_entries:
            assert not sf.lifted_system().degenerate_cross, name
            chain = build_chain(sf)
            pd = perron_eigenpair(chain.base_matrix)
            result = classify_drift(chain, pd)
            top = max(result.drift_left, result.drift_right)
            assert abs(result.drift_left - result.drift_right) \
                <= 1e-9 * top, name
            assert result.verdict is Verdict.NULL_RECURRENT, name
            walk = lift_stochastic(chain, pd)
            anchor = heavy_state(chain, pd)
            stats = return_stats(walk, anchor, 10 ** 6, 2000, SEED)
            assert stats.returned_fraction >= 0.99, name
            exponent = diffusion_exponent(walk, 4096, 2000, SEED,
                                          start=anchor)
            assert abs(exponent - 0.5) <= 0.1, name
        assert time.perf_counter() - t0 < 60.0


def test_criterion_07_parry_on_corpus():
    with announce("07", "stochastic normalisation on corpus"):
        for name, sf in corpus_objects().items():
            matrices = []
            if sf.mode in ("penner", "lifted-penner"):
                matrices.append(penner_matrix(sf.curve_system(),
                                              sf.twist_word(), check=False))
            chain = build_chain(sf)
            if chain is not None:
                matrices.append(chain.base_matrix)
            for m in matrices:
                data = parry(m, perron_eigenpair(m))
                assert np.allclose(data.transition.sum(axis=1), 1.0,
                                   atol=1e-12), name
                assert np.allclose(data.stationary @ data.transition,
                                   data.stationary, atol=1e-12), name


def test_criterion_08_lift_irreducible_aperiodic():
    with announce("08", "lift irreducibility and aperiodicity"):
        for name, sf in corpus_objects().items():
            if sf.mode != "lifted-penner":
                continue
            chain = build_chain(sf)
            for window in (6, 10):
                assert banded_irreducible(chain, window) \
                    is BandedVerdict.TRUE, name
                assert banded_period(chain, window) == 1, name


def test_criterion_09_parity_homomorphism():
    with announce("09", "parity homomorphism exhaustive to length 6"):
        alphabet = (
            Generator(GeneratorKind.TWIST, "c"),
            Generator(GeneratorKind.BOUNDING_PAIR, "beta"),
            Generator(GeneratorKind.INVOLUTION),
        )
        words = [GeneratorWord(())]
        frontier = [GeneratorWord(())]
        for _ in range(6):
            frontier = [GeneratorWord(w.letters + (g,))
                        for w in frontier for g in alphabet]
            words.extend(frontier)
        assert len(words) == sum(3 ** k for k in range(7))
        types = [commutation_type(w) for w in words]
        for w, t in zip(words, types):
            assert commutation_type(w * w).value == "commutes"
        for (w1, t1), (w2, t2) in itertools.product(zip(words, types),
                                                    repeat=2):
            assert commutation_type(w1 * w2) is t1.combined(t2)


def test_criterion_10_deterministic_reports(tmp_path, capsys):
    with announce("10", "byte-identical simulation reports"):
        from pennerlift import corpus_text
        path = tmp_path / "twocurve-lifted.system"
        path.write_text(corpus_text("twocurve-lifted"), encoding="utf-8")
        args = ["simulate", str(path), "--steps", "2048", "--trials", "300",
                "--horizon", "50000", "--seed", str(SEED)]
        outputs = []
        for threads in ("1", "1", "8"):
            code = cli_main(args + ["--threads", threads])
            captured = capsys.readouterr()
            assert code == 0
            assert captured.err == ""
            outputs.append(captured.out)
        assert outputs[0] == outputs[1]
        assert outputs[0] == outputs[2]
