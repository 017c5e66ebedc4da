import dataclasses

import numpy as np
import pytest

from contextuality import scenarios
from contextuality.cyclic import analyze
from contextuality.errors import DimensionMismatch
from contextuality.generic import analyze_generic
from contextuality.oracle import (
    atoms_from_certificate,
    coupling_mismatch,
    cross_validate,
    cross_validate_generic,
    disagreements,
    verify_coupling,
)


def test_pr_box_coupling_reproduces_bunches():
    system = scenarios.pr_box()
    report = analyze(system)
    atoms = atoms_from_certificate(report.certificates["delta_min"])
    verdict = verify_coupling(system, atoms)
    assert verdict.agreement and verdict.discrepancy <= 1e-8
    assert coupling_mismatch(system, atoms) == pytest.approx(1.0, abs=1e-9)


def test_uniform_atoms_do_not_couple_kcbs():
    verdict = verify_coupling(scenarios.kcbs_quantum(), np.full(1024, 1 / 1024))
    assert not verdict.agreement


def test_deterministic_atom_couples_all_correlated():
    atoms = np.zeros(256)
    atoms[0] = 1.0
    verdict = verify_coupling(scenarios.all_correlated(4), atoms)
    assert verdict.agreement and verdict.discrepancy == 0.0


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        verify_coupling(scenarios.pr_box(), np.zeros(10))


def test_tsirelson_all_agree():
    verdicts = cross_validate(scenarios.tsirelson())
    assert len(verdicts) >= 8
    assert disagreements(verdicts) == []


def test_random_rank_five_all_agree():
    for seed in range(5):
        system = scenarios.random_pr_mixture(5, seed)
        assert disagreements(cross_validate(system)) == []


def test_corrupted_report_flagged():
    system = scenarios.tsirelson()
    report = analyze(system)
    corrupted = dataclasses.replace(report, delta_min_closed=report.delta_min_closed + 0.01)
    bad = disagreements(cross_validate(system, corrupted))
    assert [v.subject for v in bad] == ["Delta_min closed vs LP coupling"]


def test_flipped_verdict_flagged():
    system = scenarios.pr_box()
    report = analyze(system)
    flipped = dataclasses.replace(report, contextual=False)
    assert disagreements(cross_validate(system, flipped))


def test_specker_generic_all_agree():
    system = scenarios.specker()
    report = analyze_generic(system)
    assert report.delta_min_lp == pytest.approx(1.0, abs=1e-9)
    assert report.contextual
    assert disagreements(cross_validate_generic(system, report)) == []
