"""
Tests for loading, currency conversion and alignment of weekly price series.
"""
import shutil
import tempfile
import unittest
from datetime import date, timedelta
from pathlib import Path

import numpy as np
import pytest

from comove.exceptions import (
    AlignmentError, ArgumentError, ConfigError, ParseError, SampleSizeError, UnknownColumnError,
    ValidationError,
)
from comove.ingest import (
    align_panel, build_analysis_panel, convert_currency, difference, load_csv, match_dates,
)
from comove.models import AlignedPanel, RawSeries
from tests.synthetic import weekly_dates


class TestLoadCsv(unittest.TestCase):
    """Test cases for load_csv."""

    def setUp(self):
        self.test_dir = Path(tempfile.mkdtemp(prefix="test_ingest_"))

    def tearDown(self):
        shutil.rmtree(self.test_dir, ignore_errors=True)

    def write(self, text: str, name: str = "series.csv") -> Path:
        path = self.test_dir / name
        path.write_text(text, encoding="utf-8")
        return path

    def test_three_rows(self):
        path = self.write("date,value\n2020-01-05,10.0\n2020-01-12,11.0\n2020-01-19,12.0\n")
        series = load_csv(path, "value")

        self.assertEqual(len(series), 3)
        np.testing.assert_array_equal(series.values, [10.0, 11.0, 12.0])
        self.assertEqual(series.dates[0], date(2020, 1, 5))
        self.assertEqual(series.name, "value")

    def test_rows_out_of_order_are_sorted(self):
        path = self.write("date,value\n2020-01-19,12.0\n2020-01-05,10.0\n2020-01-12,11.0\n")
        series = load_csv(path, "value")

        self.assertEqual(series.dates, (date(2020, 1, 5), date(2020, 1, 12), date(2020, 1, 19)))
        np.testing.assert_array_equal(series.values, [10.0, 11.0, 12.0])

    def test_unparsable_number_names_row(self):
        path = self.write("date,value\n2020-01-05,10.0\n2020-01-12,abc\n2020-01-19,12.0\n")
        with self.assertRaises(ParseError) as ctx:
            load_csv(path, "value")
        self.assertEqual(ctx.exception.row, 2)
        self.assertIn("row 2", str(ctx.exception))

    def test_unparsable_date_names_row(self):
        path = self.write("date,value\n2020-01-05,10.0\n05/01/2020,11.0\n")
        with self.assertRaises(ParseError) as ctx:
            load_csv(path, "value")
        self.assertEqual(ctx.exception.row, 2)

    def test_date_format_override(self):
        path = self.write("date,value\n05/01/2020,10.0\n12/01/2020,11.0\n")
        series = load_csv(path, "value", date_format="%d/%m/%Y")
        self.assertEqual(series.dates[1], date(2020, 1, 12))

    def test_duplicate_dates_rejected(self):
        path = self.write("date,value\n2020-01-05,10.0\n2020-01-05,11.0\n2020-01-12,12.0\n")
        with self.assertRaises(ValidationError) as ctx:
            load_csv(path, "value")
        self.assertIn("2020-01-05", str(ctx.exception))

    def test_empty_files_rejected(self):
        for text in ("", "date,value\n"):
            with self.subTest(text=text):
                with self.assertRaises(ValidationError):
                    load_csv(self.write(text), "value")

    def test_single_observation_rejected(self):
        with self.assertRaises(ValidationError):
            load_csv(self.write("date,value\n2020-01-05,10.0\n"), "value")

    def test_missing_file_is_config_error(self):
        missing = self.test_dir / "nope.csv"
        with self.assertRaises(ConfigError) as ctx:
            load_csv(missing, "value")
        self.assertEqual(ctx.exception.path, str(missing))

    def test_value_column_choice(self):
        path = self.write("date,open,close\n2020-01-05,1,2\n2020-01-12,3,4\n")
        with self.assertRaises(ValidationError):
            load_csv(path)
        series = load_csv(path, "close", name="nifty")
        self.assertEqual(series.name, "nifty")
        np.testing.assert_array_equal(series.values, [2.0, 4.0])

    def test_single_value_column_is_picked(self):
        path = self.write("date,close\n2020-01-05,1\n2020-01-12,3\n")
        self.assertEqual(load_csv(path).name, "close")


class TestConvertCurrency(unittest.TestCase):
    """Test cases for convert_currency."""

    def setUp(self):
        self.dates = weekly_dates(2)

    def test_identity_rate(self):
        asset = RawSeries("gold", self.dates, [100.0, 200.0])
        fx = RawSeries("usdinr", self.dates, [1.0, 1.0])
        np.testing.assert_array_equal(convert_currency(asset, fx).values, [100.0, 200.0])

    def test_one_multiplication(self):
        asset = RawSeries("gold", self.dates[:1], [50.0])
        fx = RawSeries("usdinr", self.dates[:1], [70.5])
        np.testing.assert_array_equal(convert_currency(asset, fx).values, [3525.0])

    def test_elementwise_product_over_long_series(self):
        rng = np.random.default_rng(1)
        dates = weekly_dates(1188)
        gold = RawSeries("gold", dates, 300.0 + rng.random(1188) * 1000.0)
        fx = RawSeries("usdinr", dates, 35.0 + rng.random(1188) * 40.0)
        out = convert_currency(gold, fx)

        self.assertEqual(len(out), 1188)
        np.testing.assert_array_equal(out.values, gold.values * fx.values)

    def test_tolerance_matches_shifted_quotes(self):
        shifted = tuple(d + timedelta(days=2) for d in self.dates)
        asset = RawSeries("gold", self.dates, [10.0, 20.0])
        fx = RawSeries("usdinr", shifted, [2.0, 3.0])
        np.testing.assert_array_equal(convert_currency(asset, fx).values, [20.0, 60.0])

    def test_missing_rate_lists_dates(self):
        asset = RawSeries("gold", weekly_dates(3), [1.0, 2.0, 3.0])
        fx = RawSeries("usdinr", weekly_dates(1), [70.0])
        with self.assertRaises(AlignmentError) as ctx:
            convert_currency(asset, fx)
        self.assertEqual(ctx.exception.dates, list(weekly_dates(3)[1:]))


class TestMatchDates(unittest.TestCase):
    """Test cases for nearest-date matching."""

    def test_nearest_wins_and_ties_go_earlier(self):
        targets = [date(2020, 1, 8)]
        self.assertEqual(match_dates(targets, [date(2020, 1, 6), date(2020, 1, 9)]), [1])
        self.assertEqual(match_dates(targets, [date(2020, 1, 6), date(2020, 1, 10)]), [0])

    def test_beyond_tolerance_is_none(self):
        self.assertEqual(match_dates([date(2020, 1, 1)], [date(2020, 1, 5)], tolerance_days=3), [None])

    def test_negative_tolerance_rejected(self):
        with self.assertRaises(ArgumentError):
            match_dates([date(2020, 1, 1)], [date(2020, 1, 1)], tolerance_days=-1)


class TestAlignPanel(unittest.TestCase):
    """Test cases for align_panel."""

    def setUp(self):
        self.weeks = weekly_dates(30)

    def test_full_overlap(self):
        a = RawSeries("a", self.weeks[:10], np.arange(10.0))
        b = RawSeries("b", self.weeks[:10], np.arange(10.0) * 2)
        panel = align_panel([a, b])

        self.assertEqual(panel.n_obs, 10)
        self.assertEqual(panel.names, ["a", "b"])

    def test_intersection(self):
        a = RawSeries("a", self.weeks[:20], np.arange(20.0))
        b = RawSeries("b", self.weeks[10:], np.arange(20.0) + 100)
        panel = align_panel([a, b])

        self.assertEqual(panel.dates, self.weeks[10:20])
        np.testing.assert_array_equal(panel.column("a"), np.arange(10.0, 20.0))
        np.testing.assert_array_equal(panel.column("b"), np.arange(100.0, 110.0))

    def test_intersection_matches_set_oracle(self):
        rng = np.random.default_rng(3)
        weeks = weekly_dates(300)
        series = []
        for name in ("x", "y", "z"):
            keep = np.sort(rng.choice(300, size=250, replace=False))
            series.append(RawSeries(name, [weeks[i] for i in keep], rng.random(250)))
        panel = align_panel(series)

        common = set(series[0].dates) & set(series[1].dates) & set(series[2].dates)
        self.assertEqual(panel.dates, tuple(sorted(common)))

    def test_idempotent(self):
        a = RawSeries("a", self.weeks[:20], np.arange(20.0))
        b = RawSeries("b", self.weeks[6:], np.arange(24.0))
        panel = align_panel([a, b])
        again = align_panel([panel.as_series("a"), panel.as_series("b")])

        self.assertEqual(again.dates, panel.dates)
        for name in panel.names:
            np.testing.assert_array_equal(again.column(name), panel.column(name))

    def test_disjoint_series(self):
        a = RawSeries("a", self.weeks[:10], np.arange(10.0))
        b = RawSeries("b", self.weeks[20:], np.arange(10.0))
        with self.assertRaises(AlignmentError):
            align_panel([a, b])

    def test_short_overlap(self):
        a = RawSeries("a", self.weeks[:10], np.arange(10.0))
        b = RawSeries("b", self.weeks[5:], np.arange(25.0))
        with self.assertRaises(SampleSizeError):
            align_panel([a, b])

    def test_argument_checks(self):
        a = RawSeries("a", self.weeks[:5], np.arange(5.0))
        with self.assertRaises(ArgumentError):
            align_panel([a])
        with self.assertRaises(ArgumentError):
            align_panel([a, a])


class TestDifference(unittest.TestCase):
    """Test cases for first differences."""

    def panel(self, values) -> AlignedPanel:
        return AlignedPanel(dates=weekly_dates(len(values)), columns={"x": values})

    def test_hand_examples(self):
        with self.subTest("constant"):
            np.testing.assert_array_equal(difference(self.panel([1.0] * 8), "x"), np.zeros(7))
        with self.subTest("hand"):
            np.testing.assert_array_equal(
                difference(self.panel([1.0, 3.0, 2.0, 2.0, 2.0, 2.0, 2.0, 5.0]), "x"), [2.0, -1.0, 0.0, 0.0, 0.0, 0.0, 3.0]
            )

    def test_cumsum_round_trip(self):
        noise = np.random.default_rng(5).standard_normal(400)
        levels = np.concatenate([[0.0], np.cumsum(noise)])
        np.testing.assert_allclose(difference(self.panel(levels), "x"), noise, rtol=0, atol=1e-12)

    def test_product_rule_residual(self):
        rng = np.random.default_rng(8)
        a = 100.0 + rng.random(50)
        f = 70.0 + rng.random(50)
        panel = AlignedPanel(dates=weekly_dates(50), columns={"af": a * f, "a": a})
        naive = difference(panel, "a") * f[1:]
        residual = difference(panel, "af") - naive
        np.testing.assert_allclose(residual, a[:-1] * np.diff(f), rtol=1e-9)
        self.assertGreater(np.max(np.abs(residual)), 1e-3)

    def test_unknown_column(self):
        with self.assertRaises(UnknownColumnError):
            difference(self.panel(np.arange(8.0)), "y")
        with self.assertRaises(KeyError):
            difference(self.panel(np.arange(8.0)), "y")


def test_build_analysis_panel_converts_to_inr():
    dates = weekly_dates(10)
    nifty = RawSeries("nifty", dates, np.linspace(1000, 1100, 10))
    gold = RawSeries("gold", dates, np.full(10, 400.0))
    wti = RawSeries("wti", dates, np.full(10, 20.0))
    fx = RawSeries("usdinr", dates, np.linspace(40, 49, 10))

    panel = build_analysis_panel(nifty, gold, wti, fx)

    assert panel.names == ["oil", "gold", "nifty"]
    np.testing.assert_allclose(panel.column("gold"), 400.0 * fx.values)
    np.testing.assert_allclose(panel.column("oil"), 20.0 * fx.values)
    np.testing.assert_array_equal(panel.column("nifty"), nifty.values)


def test_build_analysis_panel_drops_weeks_without_rate():
    dates = weekly_dates(12)
    nifty = RawSeries("nifty", dates, np.arange(12.0) + 1)
    gold = RawSeries("gold", dates, np.arange(12.0) + 1)
    wti = RawSeries("wti", dates, np.arange(12.0) + 1)
    fx = RawSeries("usdinr", dates[2:], np.full(10, 2.0))

    panel = build_analysis_panel(nifty, gold, wti, fx)

    assert panel.dates == dates[2:]
    np.testing.assert_array_equal(panel.column("gold"), 2.0 * (np.arange(2.0, 12.0) + 1))


def test_load_csv_fixture_round_trip(csv_writer):
    path = csv_writer("nifty.csv", [1.5, 2.5, 3.5], value_column="close")
    series = load_csv(path)
    assert series.name == "close"
    assert series.values.tolist() == [1.5, 2.5, 3.5]


def test_raw_series_invariants():
    dates = weekly_dates(3)
    with pytest.raises(ValidationError):
        RawSeries("x", dates, [1.0, np.nan, 2.0])
    with pytest.raises(ValidationError):
        RawSeries("x", (dates[1], dates[0]), [1.0, 2.0])
    with pytest.raises(ValidationError):
        RawSeries("x", dates, [1.0, 2.0])
