"""
Tests for table rendering, data files and the manifest.
"""
import hashlib
import json
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pytest

from comove.cointegration import johansen_trace, portfolio_series
from comove.cwt import default_scales, wavelet_coherence
from comove.exceptions import ArgumentError, ReportCompletenessError
from comove.models import PortfolioResult, TrendSpec, UnitRootRow, UnitRootTest
from comove.report import (
    MANIFEST_NAME, ReportBundle, csv_table, file_sha256, format_real, markdown_table, pgm_bytes,
    render_tables, write_data_files, write_grid_csv, write_manifest,
)
from comove.stats import windowed_correlations
from comove.unitroot import adf_test, pp_test
from comove.vargranger import SIGNIFICANCE_LEGEND, scale_granger_matrix
from comove.wavelets import haar_atrous_decompose


@pytest.mark.parametrize(
    "value, text",
    [
        (1.0, "1.00000"),
        (-2.5, "-2.50000"),
        (0.1234565, "0.123456"),
        (0.1234575, "0.123458"),
        (123456789.0, "1.23457e+08"),
        (999999.5, "1.00000e+06"),
        (1e-6, "1.00000e-06"),
        (0.00001, "0.0000100000"),
        (0.0, "0"),
        (-0.0, "0"),
        (float("nan"), "NA"),
        (float("inf"), "Inf"),
        (float("-inf"), "-Inf"),
    ],
)
def test_format_real(value, text):
    assert format_real(value) == text


def _bundle(panel) -> ReportBundle:
    unitroot = {
        trend: [
            UnitRootRow(
                series=name,
                reports={
                    UnitRootTest.ADF: adf_test(panel.column(name), trend, lags=2),
                    UnitRootTest.PP: pp_test(panel.column(name), trend),
                },
            )
            for name in ("oil", "gold", "nifty")
        ]
        for trend in (TrendSpec.NONE, TrendSpec.CONSTANT)
    }
    decompositions = {name: haar_atrous_decompose(panel.column(name), J=3) for name in panel.names}
    johansen = johansen_trace(panel, lag_order=2)
    weights = johansen.eigenvectors[:, 0]
    series = portfolio_series(panel, weights)
    return ReportBundle(
        correlation=windowed_correlations(panel, [(0, 256), (256, 512)]),
        unitroot=unitroot,
        johansen=johansen,
        portfolio=PortfolioResult(
            weights=weights, series=series, adf=adf_test(series, TrendSpec.CONSTANT),
            variables=tuple(panel.names),
        ),
        dwt=decompositions,
        granger=scale_granger_matrix(decompositions, lag_order=2),
    )


class TestTables(unittest.TestCase):

    def test_markdown_table(self):
        text = markdown_table(["a", "b"], [[1, 0.5], [True, "x"]])
        self.assertEqual(text, "| a | b |\n|---|---|\n| 1 | 0.500000 |\n| yes | x |\n")

    def test_csv_table(self):
        text = csv_table(["a", "b"], [[np.int64(3), float("nan")]])
        self.assertEqual(text, "a,b\n3,NA\n")


class TestRenderTables(unittest.TestCase):
    """Test cases for render_tables."""

    @pytest.fixture(autouse=True)
    def _inject(self, planted, tmp_path):
        self.bundle = _bundle(planted)
        self.tmp_path = tmp_path

    def test_empty_bundle_writes_nothing(self):
        out = self.tmp_path / "empty"
        self.assertEqual(render_tables(ReportBundle(), "markdown", out), [])
        self.assertFalse(out.exists())

    def test_file_per_section(self):
        written = render_tables(self.bundle, "markdown", self.tmp_path)
        names = [p.name for p in written]
        self.assertEqual(
            names,
            ["correlation.md", "unitroot_none.md", "unitroot_constant.md", "johansen.md", "dwt.md", "granger.md"],
        )

    def test_unitroot_rows_keep_series_order(self):
        path = render_tables(self.bundle, "csv", self.tmp_path, sections=["unitroot"])[0]
        lines = path.read_text(encoding="utf-8").splitlines()
        self.assertEqual(lines[0], "test,series,statistic,p_value,lags,cv_10,cv_5,cv_1,reject_at")
        self.assertEqual([line.split(",")[:2] for line in lines[1:]], [
            ["ADF", "oil"], ["ADF", "gold"], ["ADF", "nifty"], ["PP", "oil"], ["PP", "gold"], ["PP", "nifty"],
        ])

    def test_granger_markdown_has_legend_and_scale_titles(self):
        (path,) = render_tables(self.bundle, "markdown", self.tmp_path, sections=["granger"])
        text = path.read_text(encoding="utf-8")
        self.assertIn(SIGNIFICANCE_LEGEND, text)
        self.assertIn("### Scale 1 (2-4 weeks)", text)
        self.assertIn("| Oil | NSE-Nifty |", text)

    def test_johansen_labels_and_portfolio(self):
        (path,) = render_tables(self.bundle, "markdown", self.tmp_path, sections=["johansen"])
        text = path.read_text(encoding="utf-8")
        self.assertIn("Oil.l2", text)
        self.assertIn("| r <= 2 |", text)
        self.assertIn("Portfolio: s = ", text)

    def test_byte_identical_output(self):
        first = [p.read_bytes() for p in render_tables(self.bundle, "csv", self.tmp_path / "a")]
        second = [p.read_bytes() for p in render_tables(self.bundle, "csv", self.tmp_path / "b")]
        self.assertEqual(first, second)

    def test_errors(self):
        with self.assertRaises(ArgumentError):
            render_tables(self.bundle, "html", self.tmp_path)
        with self.assertRaises(ArgumentError):
            render_tables(self.bundle, "csv", self.tmp_path, sections=["nope"])
        with self.assertRaises(ReportCompletenessError) as ctx:
            render_tables(self.bundle, "csv", self.tmp_path, sections=["mwc", "anova"])
        self.assertEqual(ctx.exception.missing, ["anova", "mwc"])
        self.assertEqual(ctx.exception.exit_code, 4)


class TestDataFiles(unittest.TestCase):

    def setUp(self):
        rng = np.random.default_rng(81)
        x = rng.standard_normal(64)
        self.field = wavelet_coherence(x, x + rng.standard_normal(64), default_scales(64, voices=2))

    def test_pgm_header_and_size(self):
        data = pgm_bytes(self.field.values)
        height, width = self.field.values.shape
        header = f"P5\n{width} {height}\n255\n".encode("ascii")
        self.assertTrue(data.startswith(header))
        self.assertEqual(len(data), len(header) + width * height)

    def test_pgm_maps_nan_to_zero(self):
        data = pgm_bytes(np.array([[np.nan, 1.0], [0.5, 0.0]]))
        self.assertEqual(data[-4:], bytes([0, 255, 128, 0]))

    def test_grid_csv_order(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_grid_csv(self.field, Path(tmp) / "grid.csv")
            lines = path.read_text(encoding="utf-8").splitlines()
        self.assertEqual(lines[0], "time,period,value")
        self.assertEqual(len(lines), 1 + self.field.values.size)
        self.assertEqual(lines[1].split(",")[:2], ["0", format_real(self.field.periods[0])])
        self.assertEqual(lines[65].split(",")[:2], ["0", format_real(self.field.periods[1])])


def test_write_data_files_and_manifest(planted, tmp_path):
    bundle = _bundle(planted)
    bundle.coherence = {"nifty_gold": wavelet_coherence(
        planted.column("nifty"), planted.column("gold"), default_scales(512, voices=2)
    )}
    written = write_data_files(bundle, tmp_path, dates=planted.dates)
    names = sorted(p.name for p in written)
    assert "portfolio.csv" in names
    assert "dwt_oil.csv" in names
    assert {"coherence_nifty_gold.csv", "coherence_nifty_gold.pgm"} <= set(names)
    assert (tmp_path / "portfolio.csv").read_text(encoding="utf-8").startswith("date,portfolio\n1995-11-05,")

    manifest_path = write_manifest(tmp_path, written, {"ingest": "ok"}, True, {"seed": 7})
    assert manifest_path.name == MANIFEST_NAME
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    assert manifest["complete"] is True
    assert manifest["seed"] == 7
    assert manifest["stages"] == {"ingest": "ok"}
    expected = hashlib.sha256((tmp_path / "dwt_oil.csv").read_bytes()).hexdigest()
    assert manifest["artifacts"]["dwt_oil.csv"] == expected == file_sha256(tmp_path / "dwt_oil.csv")
