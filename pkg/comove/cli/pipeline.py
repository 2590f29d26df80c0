"""
End-to-end analysis run: ingest, time-domain tests, scale-wise causality,
frequency scan and wavelet coherence, then tables, data files and manifest.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..cointegration import johansen_trace, portfolio_series
from ..cwt import band_mean, default_scales, multiple_wavelet_coherence, significance, wavelet_coherence
from ..exceptions import ComoveError, ConfigError
from ..ingest import build_analysis_panel, display_name, load_csv
from ..models import (
    AlignedPanel, CoherenceField, PortfolioResult, TrendSpec, UnitRootReport, UnitRootRow, UnitRootTest,
)
from ..report import ReportBundle, render_tables, write_data_files, write_manifest
from ..spectral import frequency_scan, index_grid
from ..stats import ols_anova, windowed_correlations
from ..unitroot import adf_test, kpss_test, pp_test
from ..utils.rng import SeedStreams
from ..vargranger import DEFAULT_GRANGER_PAIRS, scale_granger_matrix
from ..wavelets import haar_atrous_decompose
from .config import RunConfig

logger = logging.getLogger(__name__)

STAGES = (
    "ingest", "correlation", "anova", "unitroot", "johansen",
    "dwt", "granger", "fourier", "coherence", "mwc", "summary",
)
MWC_TARGET = "nifty"
MWC_PREDICTORS = ("oil", "gold")


@dataclass
class PipelineResult:
    """Outcome of a run: the bundle built so far, stage status and artifacts."""
    bundle: ReportBundle
    stages: Dict[str, str]
    artifacts: List[Path] = field(default_factory=list)
    manifest: Optional[Path] = None
    failed_stage: Optional[str] = None
    error: Optional[ComoveError] = None

    @property
    def complete(self) -> bool:
        return self.failed_stage is None

    @property
    def exit_code(self) -> int:
        return 0 if self.error is None else self.error.exit_code


def pair_key(names: Sequence[str]) -> str:
    return "_".join(names)


class Pipeline:
    """Runs the requested stages in order over one aligned panel."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.streams = SeedStreams(config.seed)
        self.bundle = ReportBundle()
        self.panel: Optional[AlignedPanel] = None
        self._scales: Optional[np.ndarray] = None

    def run(self, stages: Optional[Sequence[str]] = None) -> PipelineResult:
        """Execute stages; a failing stage stops the run and is recorded, not raised."""
        requested = list(STAGES) if stages is None else ["ingest"] + [s for s in stages if s != "ingest"]
        unknown = [s for s in requested if s not in STAGES]
        if unknown:
            raise ConfigError(f"Unknown stages: {', '.join(unknown)}")
        if "granger" in requested and "dwt" not in requested:
            requested.insert(requested.index("granger"), "dwt")
        ordered = [s for s in STAGES if s in requested]

        status = {s: "pending" for s in ordered}
        result = PipelineResult(bundle=self.bundle, stages=status)
        for stage in ordered:
            handler: Callable[[], None] = getattr(self, f"_stage_{stage}")
            logger.info("Running stage '%s'", stage)
            try:
                handler()
            except ComoveError as e:
                logger.error("stage '%s' failed: %s", stage, e)
                status[stage] = "failed"
                result.failed_stage, result.error = stage, e
                break
            status[stage] = "ok"
        for stage, state in status.items():
            if state == "pending":
                status[stage] = "skipped"

        self._write_outputs(result)
        return result

    def _write_outputs(self, result: PipelineResult) -> None:
        out_dir = Path(self.config.output_dir)
        artifacts: List[Path] = []
        try:
            for fmt in self.config.formats:
                artifacts += render_tables(self.bundle, fmt, out_dir)
            dates = self.panel.dates if self.panel is not None else None
            artifacts += write_data_files(self.bundle, out_dir, dates=dates)
        except ComoveError as e:
            logger.error("stage 'report' failed: %s", e)
            result.stages["report"] = "failed"
            if result.error is None:
                result.failed_stage, result.error = "report", e
        result.artifacts = artifacts
        clamped = {
            f"{prefix}_{name}": f.clamped
            for prefix, fields_ in (("coherence", self.bundle.coherence), ("mwc", self.bundle.mwc))
            for name, f in (fields_ or {}).items()
        }
        result.manifest = write_manifest(
            out_dir, artifacts, result.stages, result.complete,
            extra={"seed": self.config.seed, "clamped_cells": clamped},
        )
        logger.info("Wrote %d artifacts and manifest to %s", len(artifacts), out_dir)

    def _stage_ingest(self) -> None:
        missing = self.config.missing_inputs()
        if missing:
            raise ConfigError(f"Missing input files: {', '.join(missing)}")
        cfg = self.config
        series = {
            name: load_csv(
                path, value_column=cfg.value_column, date_column=cfg.date_column,
                date_format=cfg.date_format, name=name,
            )
            for name, path in cfg.input_paths().items()
        }
        self.panel = build_analysis_panel(
            series["nifty"], series["gold_usd"], series["wti_usd"], series["usdinr"],
            tolerance_days=cfg.tolerance_days,
        )
        logger.info("Aligned panel: %d weeks, columns %s", self.panel.n_obs, self.panel.names)

    def _stage_correlation(self) -> None:
        self.bundle.correlation = windowed_correlations(self.panel, self.config.windows)

    def _stage_anova(self) -> None:
        cfg = self.config
        self.bundle.anova = ols_anova(
            self.panel.column(cfg.anova_dependent), self.panel.matrix(cfg.anova_regressors),
            dependent=cfg.anova_dependent, regressors=cfg.anova_regressors,
        )

    def _unit_root_reports(self, x: np.ndarray, trend: TrendSpec) -> Dict[UnitRootTest, UnitRootReport]:
        cfg = self.config
        reports: Dict[UnitRootTest, UnitRootReport] = {}
        for test in cfg.unitroot_tests:
            if test is UnitRootTest.ADF:
                reports[test] = adf_test(x, trend, max_lags=cfg.adf_max_lags, lags=cfg.adf_lags)
            elif test is UnitRootTest.PP:
                reports[test] = pp_test(x, trend, bandwidth=cfg.pp_bandwidth)
            elif trend is not TrendSpec.NONE:
                reports[test] = kpss_test(x, trend, bandwidth=cfg.kpss_bandwidth)
        return reports

    def _stage_unitroot(self) -> None:
        columns = self.config.unitroot_columns or self.panel.names
        tables: Dict[TrendSpec, List[UnitRootRow]] = {}
        for trend in self.config.trends:
            rows = []
            for name in columns:
                levels = self.panel.column(name)
                rows.append(UnitRootRow(display_name(name), self._unit_root_reports(levels, trend)))
                rows.append(UnitRootRow(f"Δ{display_name(name)}", self._unit_root_reports(np.diff(levels), trend)))
            tables[trend] = rows
        self.bundle.unitroot = tables

    def _stage_johansen(self) -> None:
        report = johansen_trace(self.panel, lag_order=self.config.johansen_lag_order)
        weights = report.eigenvectors[:, 0]
        series = portfolio_series(self.panel, weights)
        adf = adf_test(series, TrendSpec.CONSTANT, max_lags=self.config.adf_max_lags, lags=self.config.adf_lags)
        self.bundle.johansen = report
        self.bundle.portfolio = PortfolioResult(
            weights=weights, series=series, adf=adf, variables=tuple(report.variables),
        )
        logger.info("Johansen rank at 5%%: %d; portfolio ADF p=%.4f", report.rank("5%"), adf.p_value)

    def _stage_dwt(self) -> None:
        self.bundle.dwt = {
            name: haar_atrous_decompose(self.panel.column(name), J=self.config.levels, boundary=self.config.boundary)
            for name in self.panel.names
        }

    def _stage_granger(self) -> None:
        pairs = [p for p in DEFAULT_GRANGER_PAIRS if all(n in self.bundle.dwt for n in p)]
        self.bundle.granger = scale_granger_matrix(
            self.bundle.dwt, pairs=pairs,
            lag_order=self.config.granger_lag_order, max_lags=self.config.granger_max_lags,
        )

    def _stage_fourier(self) -> None:
        name = self.config.fourier_column
        x = self.panel.column(name)
        grid = index_grid(x.size, self.config.fourier_max_index)
        self.bundle.periodogram = {name: frequency_scan(x, grid, demean=self.config.demean)}

    @property
    def scales(self) -> np.ndarray:
        if self._scales is None:
            cfg = self.config
            self._scales = default_scales(
                self.panel.n_obs, voices=cfg.voices, min_scale=cfg.min_scale,
                max_period=cfg.max_period, omega0=cfg.omega0,
            )
        return self._scales

    def _cwt_kwargs(self) -> Dict[str, float]:
        cfg = self.config
        return dict(omega0=cfg.omega0, time_smoothing=cfg.time_smoothing, scale_smoothing=cfg.scale_smoothing)

    def _with_significance(self, observed: CoherenceField, series: List[np.ndarray], stream: str) -> CoherenceField:
        p_values = significance(
            series, self.scales, n_surrogates=self.config.n_surrogates,
            seed=self.streams.sequence(stream), progress=self.config.progress,
            observed=observed, **self._cwt_kwargs(),
        )
        return observed.with_significance(p_values)

    def _stage_coherence(self) -> None:
        fields: Dict[str, CoherenceField] = {}
        for a, b in self.config.pairs:
            x, y = self.panel.column(a), self.panel.column(b)
            key = pair_key((a, b))
            observed = wavelet_coherence(x, y, self.scales, **self._cwt_kwargs())
            fields[key] = self._with_significance(observed, [x, y], f"coherence.{key}")
        self.bundle.coherence = fields

    def _stage_mwc(self) -> None:
        names = (MWC_TARGET,) + MWC_PREDICTORS
        series = [self.panel.column(n) for n in names]
        key = pair_key(names)
        observed = multiple_wavelet_coherence(*series, scales=self.scales, **self._cwt_kwargs())
        self.bundle.mwc = {key: self._with_significance(observed, series, f"mwc.{key}")}

    def _stage_summary(self) -> None:
        self.bundle.summary = summarize(self.bundle)


def summarize(bundle: ReportBundle) -> List[Tuple[str, str]]:
    """One finding per completed analysis, in run order."""
    lines: List[Tuple[str, str]] = []
    if bundle.correlation:
        strongest = max(
            ((k, row[k], row) for row in bundle.correlation for k in row if k.startswith("r_")),
            key=lambda item: abs(item[1]),
        )
        key, r, row = strongest
        a, b = key[2:].split("_", 1)
        lines.append((
            "Correlation",
            f"strongest |r| = {r:.3f} between {display_name(a)} and {display_name(b)} "
            f"in weeks {row['start']}-{row['end']}",
        ))
    if bundle.anova is not None:
        lines.append(("Regression", f"R-squared {bundle.anova.r_squared:.3f}, F p-value {bundle.anova.f_p_value:.3g}"))
    if bundle.unitroot:
        constant = bundle.unitroot.get(TrendSpec.CONSTANT) or next(iter(bundle.unitroot.values()))
        nonstationary = [
            row.series for row in constant
            if UnitRootTest.ADF in row.reports and not row.reports[UnitRootTest.ADF].rejected
        ]
        lines.append((
            "Unit roots",
            "ADF fails to reject a unit root for: " + (", ".join(nonstationary) if nonstationary else "none"),
        ))
    if bundle.johansen is not None:
        rank = bundle.johansen.rank("5%")
        lines.append(("Cointegration", f"Johansen trace rank at 5%: {rank}" + (" (no cointegration)" if rank == 0 else "")))
    if bundle.granger:
        hits = [
            f"{display_name(r.independent)} -> {display_name(r.dependent)} (scale {j})"
            for j in sorted(bundle.granger) for r in bundle.granger[j] if r.p_value <= 0.05
        ]
        lines.append(("Scale Granger causality", "significant at 5%: " + ("; ".join(hits) if hits else "none")))
    if bundle.periodogram:
        for name, pg in sorted(bundle.periodogram.items()):
            lines.append(("Periodogram", f"{display_name(name)} peaks at frequency {pg.peak_frequency():.4g}"))
    for title, fields_ in (("Wavelet coherence", bundle.coherence), ("Multiple wavelet coherence", bundle.mwc)):
        for name, f in sorted((fields_ or {}).items()):
            low = band_mean(f, (64.0, 512.0))
            high = band_mean(f, (2.0, 16.0))
            lines.append((title, f"{name}: mean {low:.3f} at 64-512 weeks vs {high:.3f} at 2-16 weeks"))
    return lines


def run_pipeline(config: RunConfig, stages: Optional[Sequence[str]] = None) -> PipelineResult:
    """Run the analysis and write every artifact under config.output_dir.

    Args:
        config: Validated run configuration
        stages: Subset of STAGES to run; all of them when omitted. Ingest
            always runs, and granger pulls in dwt.

    Returns:
        PipelineResult with the bundle and an exit code (0 on success)
    """
    return Pipeline(config).run(stages)
