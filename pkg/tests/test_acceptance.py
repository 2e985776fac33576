"""Acceptance gate: each numbered criterion must pass within its budget.

These re-run the full experiments (no caching between tests); the detail
line carries the measured errors and orders so a failure states exactly
which number broke the bound.
"""

import pytest

from subdiff import acceptance


def _check(fn):
    result = fn()
    status = "PASS" if result.passed else "FAIL"
    print(f"[{status}] criterion {result.index}: {result.name} "
          f"({result.runtime_s:.1f}s / limit {result.time_limit_s:.0f}s)")
    print(f"       {result.detail}")
    assert result.passed, f"criterion {result.index}: {result.detail}"


def test_criterion_01_spatial_fourth_order():
    _check(acceptance.criterion_1)


def test_criterion_02_order_collapse_and_restoration():
    _check(acceptance.criterion_2)


def test_criterion_03_temporal_gain_from_smoothing():
    _check(acceptance.criterion_3)


def test_criterion_04_smooth_solution_crossover():
    _check(acceptance.criterion_4)


def test_criterion_05_spectral_high_accuracy():
    _check(acceptance.criterion_5)


def test_criterion_06_severe_low_regularity():
    _check(acceptance.criterion_6)


def test_criterion_07_weight_identities():
    _check(acceptance.criterion_7)


def test_criterion_08_oracle_equivalence():
    _check(acceptance.criterion_8)


def test_criterion_09_basis_gram_identities():
    _check(acceptance.criterion_9)


def test_criterion_10_physical_sanity():
    _check(acceptance.criterion_10)


def test_run_all_covers_every_criterion():
    results = acceptance.run_all([9, 10])
    assert [r.index for r in results] == [9, 10]
    with pytest.raises(ValueError):
        acceptance.run_all([0])
