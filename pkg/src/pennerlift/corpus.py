"""Bundled example corpus: loader and registry.

Each entry names a data file shipped with the package plus the headline
facts the test suite pins for it.  ``expected_verdict`` is the drift
classification of the associated chain, or None for descriptions that do
not produce a chain (plain twist systems).
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .systemfile import SystemFile, parse


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    filename: str
    summary: str
    expected_verdict: str | None


_ENTRIES = (
    CorpusEntry("srw", "srw.chain",
                "balanced walk on the integers, null recurrent",
                "NullRecurrent"),
    CorpusEntry("biased", "biased.chain",
                "right-biased walk, transient with return sum 2/3",
                "Transient"),
    CorpusEntry("translation", "translation.chain",
                "one-way translation, reducible (no return paths)",
                "Reducible"),
    CorpusEntry("twocurve", "twocurve.system",
                "two curves crossing once; stretch factor (3+sqrt(5))/2",
                None),
    CorpusEntry("twocurve-lifted", "twocurve-lifted.system",
                "doubled two-curve system with a level-crossing split, "
                "null recurrent",
                "NullRecurrent"),
    CorpusEntry("genus3-beta", "genus3-beta.system",
                "genus-3 block with a bounding-pair curve, null recurrent",
                "NullRecurrent"),
)

_BY_NAME = {e.name: e for e in _ENTRIES}


def corpus_names() -> tuple[str, ...]:
    return tuple(e.name for e in _ENTRIES)


def corpus_entries() -> tuple[CorpusEntry, ...]:
    return _ENTRIES


def corpus_entry(name: str) -> CorpusEntry:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise KeyError(
            f"no corpus entry {name!r}; available: "
            + ", ".join(corpus_names())) from None


def corpus_text(name: str) -> str:
    """Raw file content; also accepts bundled document names verbatim."""
    filename = _BY_NAME[name].filename if name in _BY_NAME else name
    root = resources.files("pennerlift.data")
    candidate = root / filename
    if not candidate.is_file():
        raise KeyError(f"no bundled file for {name!r}")
    return candidate.read_text(encoding="utf-8")


def load_corpus(name: str) -> SystemFile:
    return parse(corpus_text(name))
