"""End-to-end verification suites, one test per guaranteed property.

Each test runs the corresponding suite at its default sizes and asserts
the aggregate verdict, so `pytest -v` gives one pass/fail line per
property.
"""

import pytest

from polarmodal.suites import run_suite


@pytest.fixture(scope="module")
def prop21_report():
    # the closed-operator and distribution checks share one suite run
    return run_suite("prop21")


def _check(report):
    assert report.ok, "\n".join(str(f) for f in report.failures)
    assert report.checked > 0


def test_criterion_01_galois_closure_coincidence():
    _check(run_suite("galois"))


def test_criterion_02_concept_lattice_isomorphism():
    _check(run_suite("concepts"))


def test_criterion_03_canonical_closed_operators(prop21_report):
    _check(prop21_report)


def test_criterion_04_join_distribution(prop21_report):
    _check(prop21_report)


def test_criterion_05_translation_equalities():
    _check(run_suite("thm31"))


def test_criterion_06_translation_range_stability():
    _check(run_suite("cor31"))


def test_criterion_07_standard_translation_and_sort_reduction():
    _check(run_suite("prop41"))
    _check(run_suite("sortreduce"))


def test_criterion_08_bisimulation_invariance():
    _check(run_suite("bisim-invariance"))


def test_criterion_09_stability_of_translations():
    _check(run_suite("stability"))


def test_criterion_10_axiom_validity():
    _check(run_suite("axioms"))
