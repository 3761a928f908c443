"""Shared fixtures: corpus objects built once per session."""

from __future__ import annotations

import numpy as np
import pytest

from pennerlift import (classify_drift, corpus_names, lift_penner_matrix,
                        lift_stochastic, load_corpus, parry, perron_eigenpair,
                        reblock)


@pytest.fixture(scope="session")
def corpus_files():
    return {name: load_corpus(name) for name in corpus_names()}


def build_chain(sf):
    if sf.mode == "raw-chain":
        return sf.shift_chain()
    if sf.mode == "lifted-penner":
        return reblock(lift_penner_matrix(sf.lifted_system(), sf.twist_word(),
                                          check=False))
    return None


@pytest.fixture(scope="session")
def corpus_chains(corpus_files):
    """name -> (chain, PerronData) for every corpus entry with a chain."""
    out = {}
    for name, sf in corpus_files.items():
        chain = build_chain(sf)
        if chain is not None:
            out[name] = (chain, perron_eigenpair(chain.base_matrix))
    return out


@pytest.fixture(scope="session")
def corpus_classifications(corpus_chains):
    return {name: classify_drift(chain, pd)
            for name, (chain, pd) in corpus_chains.items()}


@pytest.fixture(scope="session")
def corpus_stochastic(corpus_chains):
    return {name: lift_stochastic(chain, pd)
            for name, (chain, pd) in corpus_chains.items()}


def heavy_state(chain, pd) -> tuple[int, int]:
    """Anchor at the state carrying the most stationary weight."""
    stationary = parry(chain.base_matrix, pd).stationary
    return int(np.argmax(stationary)), 0
