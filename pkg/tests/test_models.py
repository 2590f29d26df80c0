"""
Tests for the shared data models.
"""
import unittest

import numpy as np
import pytest

from comove.exceptions import SampleSizeError, UnknownColumnError, ValidationError
from comove.models import (
    AlignedPanel, CoherenceField, JohansenReport, ScaleDecomposition, TrendSpec, UnitRootReport,
    UnitRootTest, scale_label,
)
from tests.synthetic import weekly_dates


class TestAlignedPanel(unittest.TestCase):
    """Test cases for AlignedPanel."""

    def setUp(self):
        self.panel = AlignedPanel(
            dates=weekly_dates(10),
            columns={"oil": np.arange(1.0, 11.0), "gold": np.arange(5.0, 15.0)},
        )

    def test_shape_and_names(self):
        self.assertEqual(self.panel.n_obs, 10)
        self.assertEqual(self.panel.names, ["oil", "gold"])
        np.testing.assert_array_equal(self.panel.matrix(["gold", "oil"])[0], [5.0, 1.0])

    def test_columns_are_read_only(self):
        with self.assertRaises(ValueError):
            self.panel.column("oil")[0] = 9.0

    def test_rows_and_select(self):
        part = self.panel.rows(1, 9)
        self.assertEqual(part.n_obs, 8)
        self.assertEqual(part.dates[0], self.panel.dates[1])
        self.assertEqual(self.panel.select(["gold"]).names, ["gold"])

    def test_unknown_column(self):
        with self.assertRaises(UnknownColumnError) as ctx:
            self.panel.column("nifty")
        self.assertIn("available: oil, gold", str(ctx.exception))

    def test_invariants(self):
        with self.assertRaises(ValidationError):
            AlignedPanel(dates=weekly_dates(3), columns={"oil": [1.0, 2.0]})
        with self.assertRaises(ValidationError):
            AlignedPanel(dates=weekly_dates(2), columns={"oil": [1.0, np.nan]})

    def test_minimum_length(self):
        with self.assertRaises(SampleSizeError):
            AlignedPanel(dates=weekly_dates(7), columns={"oil": np.arange(7.0)})
        with self.assertRaises(SampleSizeError):
            self.panel.rows(0, 7)

    def test_dict_round_trip(self):
        restored = AlignedPanel.from_dict(self.panel.to_dict())
        self.assertEqual(restored.dates, self.panel.dates)
        np.testing.assert_array_equal(restored.matrix(), self.panel.matrix())


class TestUnitRootReport(unittest.TestCase):

    def _report(self, **kw):
        values = dict(
            test=UnitRootTest.ADF, statistic=-3.0, p_value=0.03, lags=2, trend=TrendSpec.CONSTANT,
            critical_values={"10%": -2.57, "5%": -2.86, "1%": -3.44}, reject_at=("10%", "5%"),
        )
        values.update(kw)
        return UnitRootReport(**values)

    def test_rejected_means_five_percent(self):
        self.assertTrue(self._report().rejected)
        self.assertFalse(self._report(reject_at=("10%",)).rejected)

    def test_p_value_range(self):
        with self.assertRaises(ValidationError):
            self._report(p_value=1.5)

    def test_trend_codes(self):
        self.assertEqual([t.regression for t in TrendSpec], ["n", "c", "ct"])
        self.assertEqual([t.n_deterministic for t in TrendSpec], [0, 1, 2])
        self.assertEqual(TrendSpec("constant_and_linear").title, "Constant and Linear Trend")


class TestJohansenReport(unittest.TestCase):

    def setUp(self):
        critical = {0: {"10%": 15.66, "5%": 17.95, "1%": 23.52}, 1: {"10%": 6.50, "5%": 8.18, "1%": 11.65}}
        self.make = lambda trace: JohansenReport(
            eigenvalues=np.array([0.2, 0.01]), trace_stats=np.array(trace), critical_values=critical,
            eigenvectors=np.eye(2), lag_order=2,
        )

    def test_sequential_rank(self):
        self.assertEqual(self.make([10.0, 2.0]).rank(), 0)
        self.assertEqual(self.make([30.0, 2.0]).rank(), 1)
        self.assertEqual(self.make([30.0, 9.0]).rank(), 2)
        self.assertEqual(self.make([30.0, 9.0]).rank("1%"), 1)

    def test_rejects(self):
        report = self.make([18.0, 2.0])
        self.assertTrue(report.rejects(0))
        self.assertFalse(report.rejects(0, "1%"))


def test_coherence_field_cone_and_significance():
    field = CoherenceField(
        values=np.full((2, 3), 0.5), scales=np.array([2.0, 4.0]), periods=np.array([2.0, 4.0]),
        coi=np.array([1.0, 5.0, 3.0]),
    )
    np.testing.assert_array_equal(field.inside_coi(), [[False, True, True], [False, True, False]])
    p = np.zeros((2, 3))
    flagged = field.with_significance(p)
    assert flagged.significance is p
    assert flagged.values is field.values


def test_scale_decomposition_shape_checks():
    with pytest.raises(ValidationError):
        ScaleDecomposition(details=np.zeros((2, 8)), smooth=np.zeros(8), J=3)
    with pytest.raises(ValidationError):
        ScaleDecomposition(details=np.zeros((2, 8)), smooth=np.zeros(7), J=2)
    assert scale_label(1) == "Scale 1 (2-4 weeks)"
