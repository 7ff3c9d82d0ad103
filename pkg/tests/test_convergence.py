"""
Tests for src/numerics/convergence.py
"""
import pytest

from src.numerics.convergence import (
    CSV_COLUMNS,
    asymptotic_order,
    convergence_study,
    observed_order,
    rows_to_csv,
    rows_to_dicts,
)


def test_quadratic_errors_give_order_two():
    rows = convergence_study(lambda level: (0.5**level, 0.25**level, 0.25**level), 4)
    assert [row.level for row in rows] == [0, 1, 2, 3]
    assert rows[0].observed_order is None
    for row in rows[1:]:
        assert row.observed_order == pytest.approx(2.0)
    assert asymptotic_order(rows) == pytest.approx(2.0)


def test_zero_norms_have_no_order():
    """An identically zero residual reports not-applicable orders."""
    rows = convergence_study(lambda level: (0.5**level, 0.0, 0.0), 3)
    assert all(row.observed_order is None for row in rows)
    assert all(row.monotone for row in rows)


def test_growing_norm_is_flagged():
    norms = [1.0, 2.0, 0.5]
    rows = convergence_study(lambda level: (0.5**level, norms[level], norms[level]), 3)
    assert [row.monotone for row in rows] == [True, False, True]
    assert rows[1].observed_order == pytest.approx(-1.0)


def test_too_few_levels():
    with pytest.raises(ValueError):
        convergence_study(lambda level: (1.0, 1.0, 1.0), 2)


def test_observed_order_guards():
    assert observed_order(1.0, 0.25, 0.2, 0.1) == pytest.approx(2.0)
    assert observed_order(0.0, 0.25, 0.2, 0.1) is None
    assert observed_order(1.0, 0.25, 0.1, 0.1) is None


def test_csv_layout():
    rows = convergence_study(lambda level: (0.5**level, 0.25**level, 0.5**level), 3)
    lines = rows_to_csv(rows).splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS) == "level,h,max_norm,l2_norm,observed_order"
    assert len(lines) == 4
    assert lines[1].endswith(",")
    assert lines[2].split(",")[0] == "1"
    assert float(lines[2].split(",")[4]) == pytest.approx(2.0)


def test_rows_to_dicts():
    rows = convergence_study(lambda level: (0.5**level, 0.25**level, 0.25**level), 3)
    data = rows_to_dicts(rows)
    assert data[0]["observed_order"] is None
    assert data[2]["h"] == 0.25
    assert set(data[0]) == set(CSV_COLUMNS) | {"monotone"}


def test_empty_rows():
    assert asymptotic_order([]) is None
