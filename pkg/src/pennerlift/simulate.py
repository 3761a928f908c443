"""Seeded Monte Carlo on stochastic shift chains.

States are pairs ``(index, level)`` with ``index`` in ``0..d-1`` and
``level`` ranging over all integers.  A step looks up the cumulative row of
the ``3d`` successor probabilities ``[P-, P0, P+]`` and inverts one uniform
draw, so trajectories are a pure function of the seed.

Each trial consumes its own Philox stream keyed by ``seed XOR trial``;
results are merged by trial index, which makes every statistic independent
of how trials are sharded across threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ReducibleError
from .lifting import StochasticShiftChain

_MASK64 = (1 << 64) - 1
_FIRST_CHUNK = 256
_CHUNK_GROWTH = 4
_MAX_CHUNK = 65536
_QUANTILE_LEVELS = (0.5, 0.9, 0.99)


@dataclass(frozen=True)
class Trajectory:
    """One sampled path; replay with the same seed is bit-identical."""

    start: tuple[int, int]
    steps: tuple[tuple[int, int], ...]
    seed: int


@dataclass(frozen=True)
class ReturnStats:
    """First-return summary over independent trials, censored at horizon."""

    trials: int
    horizon: int
    returned_fraction: float
    censored_count: int
    return_time_quantiles: tuple[tuple[float, float], ...]
    mean_return_time_censored: float
    tail_exponent_estimate: float


def _cumulative_rows(chain: StochasticShiftChain) -> tuple[np.ndarray, np.ndarray]:
    """Per-state cumulative distribution over the 3d successor columns.

    Column ``c`` encodes target index ``c % d`` and level shift
    ``c // d - 1``.  A state whose row mass vanishes has nowhere to go;
    that only happens off the irreducible part, so it is rejected here.
    """
    d = chain.block_dim
    flat = np.hstack([chain.p_minus, chain.p_zero, chain.p_plus])
    mass = flat.sum(axis=1)
    for i in range(d):
        if mass[i] <= 1e-12:
            raise ReducibleError(
                f"state {i} has zero transition mass (reducible state)")
        if abs(mass[i] - 1.0) > 1e-9:
            raise ValueError(
                f"row {i} mass {mass[i]} is not stochastic")
    cum = np.cumsum(flat, axis=1)
    cum[:, -1] = 1.0
    last_col = np.empty(d, dtype=np.int64)
    for i in range(d):
        nz = np.nonzero(flat[i])[0]
        last_col[i] = nz[-1]
    return cum, last_col


@njit(cache=True, nogil=True)
def _pick_column(row_cum: np.ndarray, u: float, last: int) -> int:
    lo = 0
    hi = row_cum.shape[0]
    while lo < hi:
        mid = (lo + hi) // 2
        if row_cum[mid] > u:
            hi = mid
        else:
            lo = mid + 1
    if lo > last:
        lo = last
    return lo


@njit(cache=True, nogil=True)
def _run_path(cum, last_col, d, idx, lvl, uniforms, out_idx, out_lvl):
    for k in range(uniforms.shape[0]):
        col = _pick_column(cum[idx], uniforms[k], last_col[idx])
        idx = col % d
        lvl += col // d - 1
        out_idx[k] = idx
        out_lvl[k] = lvl
    return idx, lvl


@njit(cache=True, nogil=True)
def _run_until_return(cum, last_col, d, idx, lvl, t, horizon,
                      target_idx, target_lvl, uniforms):
    """Consume uniforms until first return, horizon, or exhaustion.

    Returns ``(idx, lvl, t, return_time)`` with ``return_time = 0`` when
    the walk has not come back yet (0 is never a valid return time).
    """
    for k in range(uniforms.shape[0]):
        if t >= horizon:
            return idx, lvl, t, 0
        col = _pick_column(cum[idx], uniforms[k], last_col[idx])
        idx = col % d
        lvl += col // d - 1
        t += 1
        if idx == target_idx and lvl == target_lvl:
            return idx, lvl, t, t
    return idx, lvl, t, 0


def _trial_generator(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(seed ^ trial) & _MASK64))


def _check_start(chain: StochasticShiftChain, start: tuple[int, int]) -> tuple[int, int]:
    index, level = int(start[0]), int(start[1])
    if not 0 <= index < chain.block_dim:
        raise ValueError(
            f"start index {index} out of range for d={chain.block_dim}")
    return index, level


def simulate(chain: StochasticShiftChain, start: tuple[int, int],
             steps: int, seed: int) -> Trajectory:
    """Sample one trajectory of ``steps`` transitions from ``start``."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    index, level = _check_start(chain, start)
    cum, last_col = _cumulative_rows(chain)
    gen = _trial_generator(seed, 0)
    uniforms = gen.random(steps)
    out_idx = np.empty(steps, dtype=np.int64)
    out_lvl = np.empty(steps, dtype=np.int64)
    _run_path(cum, last_col, chain.block_dim, index, level,
              uniforms, out_idx, out_lvl)
    path = tuple((int(i), int(l)) for i, l in zip(out_idx, out_lvl))
    return Trajectory(start=(index, level), steps=path, seed=seed & _MASK64)


def _return_time_one_trial(cum, last_col, d, index, level, horizon,
                           seed, trial) -> int:
    """First-return time for one trial; 0 when censored at horizon."""
    gen = _trial_generator(seed, trial)
    idx, lvl, t = index, level, 0
    chunk = _FIRST_CHUNK
    while t < horizon:
        budget = min(chunk, horizon - t)
        uniforms = gen.random(budget)
        idx, lvl, t, ret = _run_until_return(
            cum, last_col, d, idx, lvl, t, horizon, index, level, uniforms)
        if ret:
            return ret
        chunk = min(chunk * _CHUNK_GROWTH, _MAX_CHUNK)
    return 0


def return_times(chain: StochasticShiftChain, start: tuple[int, int],
                 horizon: int, trials: int, seed: int,
                 threads: int = 1) -> np.ndarray:
    """Per-trial first-return times; 0 marks a trial censored at horizon.

    Trial ``k`` consumes stream ``seed XOR k`` regardless of sharding, so
    the array is identical for every thread count.
    """
    if horizon < 2:
        raise ValueError("horizon must be at least 2")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    index, level = _check_start(chain, start)
    cum, last_col = _cumulative_rows(chain)
    d = chain.block_dim
    times = np.zeros(trials, dtype=np.int64)

    def run_range(lo: int, hi: int) -> None:
        for trial in range(lo, hi):
            times[trial] = _return_time_one_trial(
                cum, last_col, d, index, level, horizon, seed, trial)

    if threads <= 1:
        run_range(0, trials)
    else:
        shard = -(-trials // threads)
        bounds = [(k * shard, min((k + 1) * shard, trials))
                  for k in range(threads) if k * shard < trials]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda b: run_range(*b), bounds))
    return times


def return_stats(chain: StochasticShiftChain, start: tuple[int, int],
                 horizon: int, trials: int, seed: int,
                 threads: int = 1) -> ReturnStats:
    """First-return times to the exact start state, censored at horizon.

    Censored trials are reported, never dropped; the mean is labeled
    censored because the true mean return time is infinite in the null
    recurrent regime.
    """
    times = return_times(chain, start, horizon, trials, seed, threads)
    censored = int(np.count_nonzero(times == 0))
    capped = np.where(times == 0, horizon, times)
    ordered = np.sort(capped)
    quantiles = []
    for q in _QUANTILE_LEVELS:
        pos = max(0, math.ceil(q * trials) - 1)
        quantiles.append((q, float(ordered[pos])))
    return ReturnStats(
        trials=trials,
        horizon=horizon,
        returned_fraction=(trials - censored) / trials,
        censored_count=censored,
        return_time_quantiles=tuple(quantiles),
        mean_return_time_censored=float(capped.mean()),
        tail_exponent_estimate=_tail_exponent(capped, horizon, trials),
    )


def _tail_exponent(capped: np.ndarray, horizon: int, trials: int) -> float:
    """Slope of the empirical survival function on dyadic times.

    Points need at least 10 exceedances and must sit strictly below the
    horizon, where censoring cannot bias the survival estimate.
    """
    ts, survival = [], []
    t = 2
    while t < horizon:
        s = float(np.count_nonzero(capped > t)) / trials
        if s * trials >= 10:
            ts.append(t)
            survival.append(s)
        t *= 2
    if len(ts) < 3:
        return float("nan")
    slope = np.polyfit(np.log(ts), np.log(survival), 1)[0]
    return float(-slope + 0.0)


@dataclass(frozen=True)
class LevelStats:
    """Dyadic snapshots of mean |level| plus per-trial final levels."""

    checkpoints: tuple[int, ...]
    mean_abs_level: tuple[float, ...]
    final_levels: tuple[int, ...]


def level_stats(chain: StochasticShiftChain, steps: int, trials: int,
                seed: int, start: tuple[int, int] = (0, 0)) -> LevelStats:
    """Mean |level| at dyadic checkpoints over independent trials."""
    if steps < 8:
        raise ValueError("steps must be at least 8")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    index, level = _check_start(chain, start)
    cum, last_col = _cumulative_rows(chain)
    d = chain.block_dim
    checkpoints = []
    n = 8
    while n <= steps:
        checkpoints.append(n)
        n *= 2
    marks = np.array(checkpoints, dtype=np.int64) - 1
    abs_sums = np.zeros(len(checkpoints), dtype=np.float64)
    finals = np.empty(trials, dtype=np.int64)
    out_idx = np.empty(steps, dtype=np.int64)
    out_lvl = np.empty(steps, dtype=np.int64)
    for trial in range(trials):
        gen = _trial_generator(seed, trial)
        uniforms = gen.random(steps)
        _, final_level = _run_path(cum, last_col, d, index, level,
                                   uniforms, out_idx, out_lvl)
        abs_sums += np.abs(out_lvl[marks])
        finals[trial] = final_level
    return LevelStats(checkpoints=tuple(checkpoints),
                      mean_abs_level=tuple(abs_sums / trials),
                      final_levels=tuple(int(x) for x in finals))


def diffusion_exponent(chain: StochasticShiftChain, steps: int, trials: int,
                       seed: int, start: tuple[int, int] = (0, 0)) -> float:
    """Least-squares slope of ``log E|level_n|`` vs ``log n`` on dyadic n.

    Balanced chains diffuse at 0.5; drifting chains are ballistic at 1.0.
    """
    if steps < 1000:
        raise ValueError("steps must be at least 1000")
    stats = level_stats(chain, steps, trials, seed, start)
    xs, ys = [], []
    for n, m in zip(stats.checkpoints, stats.mean_abs_level):
        if m > 0:
            xs.append(math.log(n))
            ys.append(math.log(m))
    if len(xs) < 2:
        raise ValueError("level never moved; cannot fit an exponent")
    slope = np.polyfit(xs, ys, 1)[0]
    return float(slope)
