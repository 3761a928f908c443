"""Twist systems on ladder blocks, their level lifts, and the recurrence
classification of the resulting level-homogeneous chains."""

from .classify import (Classification, ParryData, ReturnSeries, SERIES_CAP,
                       Verdict, classify_drift, entropy, lift_stochastic,
                       parry, return_series, return_series_verdict)
from .corpus import (CorpusEntry, corpus_entries, corpus_entry, corpus_names,
                     corpus_text, load_corpus)
from .digraph import is_irreducible, period, strongly_connected
from .errors import (DecompositionError, InconclusiveError,
                     NonConvergenceError, ParseError, PennerliftError,
                     ReducibleError, SeriesCapError, ValidationFailedError)
from .intmatrix import IntMatrix, mat_mul, mat_vec
from .laurent import LaurentBlockMatrix, laurent_eval_one, laurent_mul
from .lifting import (BandedVerdict, LiftedCurveSystem, QbdBlocks, ShiftChain,
                      StochasticShiftChain, banded_irreducible, banded_period,
                      lift_penner_matrix, lift_sigma, qbd_fold, reblock)
from .penner import (CommutationType, CurveSystem, Generator, GeneratorKind,
                     GeneratorWord, TwistWord, ValidationIssue,
                     ValidationReport, commutation_type, penner_matrix,
                     preset_example_family, stretch_factor, validate)
from .perron import PerronData, perron_eigenpair
from .report import (Report, render_csv, render_json, render_text, svg_chart,
                     to_json_obj, SCHEMA_VERSION, TOOL_VERSION)
from .simulate import (LevelStats, ReturnStats, Trajectory,
                       diffusion_exponent, level_stats, return_stats,
                       return_times, simulate)
from .systemfile import SystemFile, parse as parse_system, parse_file

__version__ = TOOL_VERSION

__all__ = [
    "BandedVerdict", "Classification", "CommutationType", "CorpusEntry",
    "CurveSystem", "DecompositionError", "Generator", "GeneratorKind",
    "GeneratorWord", "InconclusiveError", "IntMatrix", "LaurentBlockMatrix",
    "LevelStats", "LiftedCurveSystem", "NonConvergenceError", "ParryData",
    "ParseError", "PennerliftError", "PerronData", "QbdBlocks",
    "ReducibleError", "Report", "ReturnSeries", "ReturnStats",
    "SCHEMA_VERSION", "SERIES_CAP", "SeriesCapError", "ShiftChain",
    "StochasticShiftChain", "SystemFile", "TOOL_VERSION", "Trajectory",
    "TwistWord", "ValidationFailedError", "ValidationIssue",
    "ValidationReport", "Verdict", "banded_irreducible", "banded_period",
    "classify_drift", "commutation_type", "corpus_entries", "corpus_entry",
    "corpus_names", "corpus_text", "diffusion_exponent", "entropy",
    "is_irreducible", "laurent_eval_one", "laurent_mul", "level_stats",
    "lift_penner_matrix", "lift_sigma", "lift_stochastic", "load_corpus",
    "mat_mul", "mat_vec", "parry", "parse_file", "parse_system",
    "penner_matrix", "period", "perron_eigenpair", "preset_example_family",
    "qbd_fold", "reblock", "render_csv", "render_json", "render_text",
    "return_series", "return_series_verdict", "return_stats", "return_times",
    "simulate", "stretch_factor", "strongly_connected", "svg_chart",
    "to_json_obj", "validate",
]
