"""Tests for the sample-based certification of the ladder inequalities."""

import numpy as np
import pytest

from bresselab.errors import UnknownLemma, WrongKind
from bresselab.functionals import FunctionalId, check_lemma_inequality, lemma_ids
from bresselab.models.config import default_lyapunov_config
from bresselab.models.parameters import Parameters, SystemKind
from tests.helpers import sampled_trajectories


def test_lemma_ids() -> None:
    assert FunctionalId.S not in lemma_ids(SystemKind.TYPE_I)
    assert lemma_ids(SystemKind.TYPE_III)[-1] is FunctionalId.S
    assert FunctionalId.L not in lemma_ids(SystemKind.TYPE_III)


def test_unknown_lemma(unit_params: Parameters, rng: np.random.Generator) -> None:
    (tr, *_) = sampled_trajectories(unit_params, SystemKind.TYPE_I, rng, xis=(1.0,))
    cfg = default_lyapunov_config(unit_params, SystemKind.TYPE_I)
    with pytest.raises(UnknownLemma):
        check_lemma_inequality("J9", tr, unit_params, cfg)
    with pytest.raises(UnknownLemma):
        check_lemma_inequality("L", tr, unit_params, cfg)


def test_s_lemma_on_type1(unit_params: Parameters, rng: np.random.Generator) -> None:
    (tr, *_) = sampled_trajectories(unit_params, SystemKind.TYPE_I, rng, xis=(1.0,))
    cfg = default_lyapunov_config(unit_params, SystemKind.TYPE_I)
    with pytest.raises(WrongKind):
        check_lemma_inequality("S", tr, unit_params, cfg)


def test_no_trajectories(unit_params: Parameters) -> None:
    cfg = default_lyapunov_config(unit_params, SystemKind.TYPE_I)
    report = check_lemma_inequality("J1", [], unit_params, cfg)
    assert report.n_samples == 0
    assert report.passed


def test_every_inequality_holds(
    kind: SystemKind, params: Parameters, rng: np.random.Generator
) -> None:
    trajectories = sampled_trajectories(params, kind, rng)
    cfg = default_lyapunov_config(params, kind)
    for lemma in lemma_ids(kind):
        report = check_lemma_inequality(lemma, trajectories, params, cfg)
        assert report.passed, report
        assert report.n_samples == sum(len(tr) for tr in trajectories)
        assert report.fitted_constant >= 0


def test_single_trajectory_accepted(unit_params: Parameters, rng: np.random.Generator) -> None:
    (tr, *_) = sampled_trajectories(unit_params, SystemKind.TYPE_III, rng, xis=(2.0,))
    cfg = default_lyapunov_config(unit_params, SystemKind.TYPE_III)
    report = check_lemma_inequality(FunctionalId.S, tr, unit_params, cfg)
    assert report.lemma_id == "S"
    assert report.n_samples == len(tr)
