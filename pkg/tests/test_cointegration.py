"""
Tests for the Johansen trace test and portfolio construction.
"""
import unittest

import numpy as np

from comove.cointegration import TRACE_CRITICAL_VALUES, johansen_trace, portfolio_series
from comove.exceptions import ArgumentError, SampleSizeError, UnsupportedSpecError
from comove.models import AlignedPanel, TrendSpec
from comove.unitroot import adf_test
from tests.synthetic import cointegrated_pair, random_walk, weekly_dates


def _panel(**columns) -> AlignedPanel:
    n = len(next(iter(columns.values())))
    return AlignedPanel(dates=weekly_dates(n), columns=columns)


class TestJohansenTrace(unittest.TestCase):
    """Test cases for johansen_trace."""

    def setUp(self):
        self.rng = np.random.default_rng(31)
        x, y = cointegrated_pair(self.rng, 1000, beta=2.0)
        self.panel = _panel(y=y, x=x)

    def test_planted_pair_has_rank_one(self):
        report = johansen_trace(self.panel, lag_order=2)

        self.assertTrue(report.rejects(0))
        self.assertLess(report.trace_stats[1], report.critical_values[1]["1%"])
        self.assertEqual(report.variables, ("y", "x"))
        self.assertEqual(report.n_obs, 1000 - 2)

    def test_vector_recovers_planted_weights(self):
        report = johansen_trace(self.panel, lag_order=2)
        vector = report.eigenvectors[:, 0]
        self.assertEqual(vector[0], 1.0)
        self.assertAlmostEqual(vector[1], -2.0, delta=0.2)

    def test_eigenvalues_sorted_and_trace_decreasing(self):
        report = johansen_trace(self.panel, lag_order=3)
        self.assertTrue(np.all(np.diff(report.eigenvalues) <= 0))
        self.assertTrue(np.all((report.eigenvalues >= 0) & (report.eigenvalues < 1)))
        self.assertTrue(np.all(np.diff(report.trace_stats) <= 0))
        self.assertTrue(np.all(report.trace_stats >= 0))

    def test_scale_invariance(self):
        base = johansen_trace(self.panel)
        scaled = johansen_trace(_panel(y=1e3 * self.panel.column("y"), x=0.01 * self.panel.column("x")))
        np.testing.assert_allclose(scaled.trace_stats, base.trace_stats, rtol=1e-8)
        np.testing.assert_allclose(scaled.eigenvalues, base.eigenvalues, rtol=1e-8)

    def test_independent_walks_mostly_not_cointegrated(self):
        rng = np.random.default_rng(32)
        kept = sum(
            not johansen_trace(_panel(a=random_walk(rng, 400), b=random_walk(rng, 400))).rejects(0)
            for _ in range(20)
        )
        self.assertGreaterEqual(kept, 15)

    def test_critical_values_follow_k_minus_r(self):
        report = johansen_trace(_panel(a=random_walk(self.rng, 200), b=random_walk(self.rng, 200),
                                       c=random_walk(self.rng, 200)))
        for r in range(3):
            with self.subTest(r=r):
                self.assertEqual(dict(report.critical_values[r]), TRACE_CRITICAL_VALUES[3 - r])

    def test_rank_uses_sequential_procedure(self):
        report = johansen_trace(self.panel)
        expected = next((r for r in range(2) if not report.rejects(r)), 2)
        self.assertEqual(report.rank(), expected)

    def test_to_dict(self):
        data = johansen_trace(self.panel).to_dict()
        self.assertEqual(data["variables"], ["y", "x"])
        self.assertEqual(set(data["critical_values"]), {"0", "1"})
        self.assertEqual(len(data["eigenvectors"]), 2)

    def test_errors(self):
        with self.subTest("trend"):
            with self.assertRaises(UnsupportedSpecError):
                johansen_trace(self.panel, trend="none")
        with self.subTest("lag order"):
            with self.assertRaises(ArgumentError):
                johansen_trace(self.panel, lag_order=0)
        with self.subTest("single variable"):
            with self.assertRaises(ArgumentError):
                johansen_trace(_panel(y=self.panel.column("y")))
        with self.subTest("too many variables"):
            columns = {f"v{i}": random_walk(self.rng, 100) for i in range(6)}
            with self.assertRaises(UnsupportedSpecError):
                johansen_trace(_panel(**columns))
        with self.subTest("too short"):
            with self.assertRaises(SampleSizeError):
                johansen_trace(_panel(y=self.panel.column("y")[:14], x=self.panel.column("x")[:14]))


class TestPortfolioSeries(unittest.TestCase):
    """Test cases for portfolio_series."""

    def setUp(self):
        self.panel = _panel(a=np.array([1.0, 2.0, 3.0]), b=np.array([10.0, 20.0, 40.0]))

    def test_linear_combination(self):
        np.testing.assert_allclose(portfolio_series(self.panel, [1.0, -0.1]), [0.0, 0.0, -1.0])

    def test_unit_weights_sum_columns(self):
        np.testing.assert_allclose(portfolio_series(self.panel, [1, 1]), [11.0, 22.0, 43.0])

    def test_weight_count_must_match(self):
        with self.assertRaises(ArgumentError):
            portfolio_series(self.panel, [1.0])


def test_planted_panel_portfolio_is_stationary(planted):
    panel = _panel(nifty=planted.column("nifty"), oil=planted.column("oil"), gold=planted.column("gold"))
    report = johansen_trace(panel, lag_order=2)
    assert report.rejects(0)
    portfolio = portfolio_series(panel, report.eigenvectors[:, 0])
    assert adf_test(portfolio, TrendSpec.CONSTANT).rejected
