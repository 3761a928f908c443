"""Command-line front end.

Exit codes: 0 success; 1 parse error (with line/column); 2 validation
failure or missing field; 3 reducible input or unstabilised window checks;
4 exact-series cap exceeded.  No code path prints a stack trace.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys

import numpy as np

from .classify import (classify_drift, entropy as entropy_of, parry,
                       lift_stochastic, return_series, return_series_verdict,
                       SERIES_CAP)
from .corpus import corpus_entries, corpus_text
from .errors import (DecompositionError, InconclusiveError, ParseError,
                     ReducibleError, SeriesCapError, ValidationFailedError)
from .lifting import lift_penner_matrix, reblock
from .penner import commutation_type, CommutationType, penner_matrix, validate
from .perron import perron_eigenpair
from .report import (Report, render_csv, render_json, render_text, svg_chart,
                     TOOL_VERSION)
from .simulate import (diffusion_exponent, level_stats, return_stats,
                       return_times)
from .systemfile import parse as parse_system

_DEFAULT_TOL = 1e-9
_TOL_ENV = "PENNERLIFT_TOL"


def _tol_default() -> float:
    raw = os.environ.get(_TOL_ENV)
    if raw is None:
        return _DEFAULT_TOL
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"{_TOL_ENV}={raw!r} is not a number") from None
    if value <= 0:
        raise ValueError(f"{_TOL_ENV} must be positive")
    return value


def _read_input(path: str) -> tuple[object, str]:
    with open(path, "rb") as fh:
        data = fh.read()
    digest = hashlib.sha256(data).hexdigest()
    return parse_system(data.decode("utf-8")), digest


def _build_chain(sf):
    """Level chain for a description, or None for plain twist systems."""
    if sf.mode == "raw-chain":
        return sf.shift_chain()
    if sf.mode == "lifted-penner":
        word = sf.twist_word()
        lifted = sf.lifted_system()
        return reblock(lift_penner_matrix(lifted, word, check=False))
    return None


def _series_rows(series) -> tuple[tuple[int, int, int, float], ...]:
    return tuple(
        (n + 1, series.counts[n], series.first_returns[n],
         series.partial_sums[n])
        for n in range(len(series.counts)))


def cmd_analyze(args) -> int:
    sf, digest = _read_input(args.path)
    report_kwargs: dict = dict(input_name=sf.name, input_mode=sf.mode,
                               input_digest=digest)

    if sf.mode in ("penner", "lifted-penner"):
        system = sf.curve_system()
        word = sf.twist_word()
        validation = validate(system, word)
        report_kwargs["validation_ok"] = validation.ok
        report_kwargs["validation_issues"] = tuple(
            issue.message for issue in validation.issues)
        if not validation.ok:
            print(render_text(Report(**report_kwargs)), end="")
            return 2
        m_f = penner_matrix(system, word, check=False)
        pd = perron_eigenpair(m_f)
        report_kwargs.update(m_f=m_f, stretch_factor=pd.lam,
                             stretch_tolerance=1e-12,
                             entropy=entropy_of(pd))

    chain = _build_chain(sf)
    if chain is not None:
        pd_chain = perron_eigenpair(chain.base_matrix)
        if sf.mode == "raw-chain":
            report_kwargs.update(stretch_factor=pd_chain.lam,
                                 stretch_tolerance=1e-12,
                                 entropy=entropy_of(pd_chain))
        classification = classify_drift(chain, pd_chain, tol=args.tol,
                                        window_levels=args.window)
        stationary = parry(chain.base_matrix, pd_chain).stationary
        anchor = int(np.argmax(stationary))
        series = return_series(chain, pd_chain, state=(anchor, 0), n_max=32)
        report_kwargs.update(
            chain=chain,
            banded=("false" if classification.verdict.value == "Reducible"
                    else "true"),
            period=classification.period,
            drift_left=classification.drift_left,
            drift_right=classification.drift_right,
            drift_tolerance=classification.tolerance,
            exact_balance=classification.exact_balance,
            verdict_exact=classification.verdict.value,
            series_state=(anchor, 0),
            series_rows=_series_rows(series),
            verdict_series=return_series_verdict(series).value,
        )

    report = Report(**report_kwargs)
    renderer = {"text": render_text, "json": render_json,
                "csv": render_csv}[args.format]
    print(renderer(report), end="")
    return 0


def cmd_series(args) -> int:
    sf, _ = _read_input(args.path)
    chain = _build_chain(sf)
    if chain is None:
        print(f"error: mode {sf.mode!r} has no level chain; series needs "
              "lifted-penner or raw-chain input", file=sys.stderr)
        return 2
    if args.n > SERIES_CAP:
        raise SeriesCapError(
            f"requested {args.n} exact terms, cap is {SERIES_CAP}")
    if args.n < 0:
        print("error: --n must be nonnegative", file=sys.stderr)
        return 2
    print("n,a_n,f_n,partial_sum")
    if args.n == 0:
        return 0
    pd = perron_eigenpair(chain.base_matrix)
    if args.state is not None:
        state = args.state
    else:
        stationary = parry(chain.base_matrix, pd).stationary
        state = (int(np.argmax(stationary)), 0)
    series = return_series(chain, pd, state=state, n_max=args.n)
    for n, a, f, s in _series_rows(series):
        print(f"{n},{a},{f},{s!r}")
    return 0


def cmd_simulate(args) -> int:
    sf, digest = _read_input(args.path)
    chain = _build_chain(sf)
    if chain is None:
        print(f"error: mode {sf.mode!r} has no level chain; simulate needs "
              "lifted-penner or raw-chain input", file=sys.stderr)
        return 2
    pd = perron_eigenpair(chain.base_matrix)
    stochastic = lift_stochastic(chain, pd)
    stationary = parry(chain.base_matrix, pd).stationary
    start = (int(np.argmax(stationary)), 0)
    stats = return_stats(stochastic, start, args.horizon, args.trials,
                         args.seed, threads=args.threads)
    exponent = diffusion_exponent(stochastic, args.steps, args.trials,
                                  args.seed, start=start)
    lines = [
        f"simulation report (tool {TOOL_VERSION})",
        f"input: {sf.name} ({sf.mode}), sha256 {digest[:16]}...",
        f"start state: ({start[0]},{start[1]})",
        f"seed: {args.seed}  trials: {stats.trials}  "
        f"horizon: {stats.horizon}  steps: {args.steps}",
        f"returned_fraction: {stats.returned_fraction!r}",
        f"censored_count: {stats.censored_count}",
        "return_time_quantiles: " + "  ".join(
            f"q{q:g}={v:g}" for q, v in stats.return_time_quantiles),
        f"mean_return_time_censored: {stats.mean_return_time_censored!r}",
        f"tail_exponent_estimate: {stats.tail_exponent_estimate!r}",
        f"diffusion_exponent: {exponent!r}",
    ]
    print("\n".join(lines))
    if args.svg:
        _write_svg(args, stochastic, start)
        print(f"svg written: {args.svg}")
    return 0


def _write_svg(args, stochastic, start) -> None:
    stats = level_stats(stochastic, args.steps, args.trials, args.seed,
                        start=start)
    growth = [(math.log2(n), math.log2(m))
              for n, m in zip(stats.checkpoints, stats.mean_abs_level)
              if m > 0]
    times = return_times(stochastic, start, args.horizon, args.trials,
                         args.seed, threads=args.threads)
    returned = np.sort(times[times > 0])
    cdf = [(math.log10(t), k / len(times))
           for k, t in enumerate(returned, start=1)]
    chart = svg_chart([
        ("log2 E|level| vs log2 n", growth),
        ("return-time CDF over log10 t", cdf),
    ])
    with open(args.svg, "w", encoding="utf-8") as fh:
        fh.write(chart)


def cmd_parity(args) -> int:
    sf, _ = _read_input(args.path)
    word = sf.parsed_generator_word()
    if word is None:
        print("error: input has no generator_word field", file=sys.stderr)
        return 2
    kind = commutation_type(word)
    if kind is CommutationType.COMMUTES:
        print("Commutes")
    else:
        print("AntiCommutes")
        print("note: the square of the word commutes")
    return 0


def cmd_example(args) -> int:
    if args.action == "list":
        for entry in corpus_entries():
            print(f"{entry.name:16s} {entry.summary}")
        return 0
    try:
        print(corpus_text(args.name), end="")
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    return 0


def _parse_state(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("state must be 'index,level'")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError("state must be two integers") from None


def _int_like(text: str) -> int:
    try:
        value = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pennerlift",
        description="Analyze twist systems, their level lifts, and the "
                    "recurrence of the resulting chains.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full pipeline report for one file")
    p.add_argument("path")
    p.add_argument("--tol", type=float, default=None,
                   help=f"drift tolerance (default {_DEFAULT_TOL:g}, "
                        f"or ${_TOL_ENV})")
    p.add_argument("--window", type=int, default=6,
                   help="initial window half-width for banded checks")
    p.add_argument("--format", choices=("text", "json", "csv"),
                   default="text")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("series", help="exact return-count series as CSV")
    p.add_argument("path")
    p.add_argument("--n", type=int, default=32,
                   help=f"number of terms (max {SERIES_CAP})")
    p.add_argument("--state", type=_parse_state, default=None,
                   help="anchor state 'index,level' (default: heaviest)")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("simulate", help="Monte Carlo return statistics")
    p.add_argument("path")
    p.add_argument("--steps", type=_int_like, default=4096,
                   help="steps per trial for the diffusion fit")
    p.add_argument("--trials", type=_int_like, default=1000)
    p.add_argument("--horizon", type=_int_like, default=100000,
                   help="censoring horizon for first returns")
    p.add_argument("--seed", type=_int_like, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--svg", default=None, metavar="OUT",
                   help="write level-growth and return-CDF charts")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("parity", help="commutation type of generator_word")
    p.add_argument("path")
    p.set_defaults(func=cmd_parity)

    p = sub.add_parser("example", help="bundled example corpus")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?", default=None)
    p.set_defaults(func=cmd_example)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) == "example":
        if args.action == "show" and args.name is None:
            print("error: 'example show' needs a name", file=sys.stderr)
            return 2
    if getattr(args, "tol", "absent") is None:
        try:
            args.tol = _tol_default()
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: cannot read {exc.filename}", file=sys.stderr)
        return 1
    except ValidationFailedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DecompositionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InconclusiveError, ReducibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except SeriesCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
