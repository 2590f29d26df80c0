"""
Deterministic rendering of analysis results: markdown/CSV tables, data CSVs,
PGM heatmaps and the artifact manifest.

Reals are printed with 6 significant digits, rounding half to even, without
any locale dependence.
"""
import hashlib
import json
import logging
from dataclasses import dataclass, fields
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .cwt import band_mean
from .exceptions import ArgumentError, ReportCompletenessError
from .ingest import display_name
from .models import (
    SIGNIFICANCE_LEVELS, CoherenceField, GrangerReport, JohansenReport, Periodogram,
    PortfolioResult, RegressionReport, ScaleDecomposition, TrendSpec, UnitRootRow, UnitRootTest,
    scale_band, scale_label, significance_code,
)
from .vargranger import SIGNIFICANCE_LEGEND
from .wavelets import decomposition_frame

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 6
FORMATS = ("markdown", "csv")
MANIFEST_NAME = "manifest.json"
_EXT = {"markdown": ".md", "csv": ".csv"}


@dataclass
class ReportBundle:
    """Named result sections of one pipeline run; unset sections are None."""
    correlation: Optional[List[Dict[str, Any]]] = None
    anova: Optional[RegressionReport] = None
    unitroot: Optional[Dict[TrendSpec, List[UnitRootRow]]] = None
    johansen: Optional[JohansenReport] = None
    portfolio: Optional[PortfolioResult] = None
    dwt: Optional[Dict[str, ScaleDecomposition]] = None
    granger: Optional[Dict[int, List[GrangerReport]]] = None
    periodogram: Optional[Dict[str, Periodogram]] = None
    coherence: Optional[Dict[str, CoherenceField]] = None
    mwc: Optional[Dict[str, CoherenceField]] = None
    summary: Optional[List[Tuple[str, str]]] = None

    @classmethod
    def section_names(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    def present(self) -> List[str]:
        return [name for name in self.section_names() if getattr(self, name) is not None]


def format_real(value: float, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Format a real with `digits` significant digits, half-even rounding.

    Fixed notation for magnitudes in [1e-5, 1e6), scientific otherwise.
    """
    value = float(value)
    if np.isnan(value):
        return "NA"
    if np.isinf(value):
        return "Inf" if value > 0 else "-Inf"
    d = Decimal(repr(value))
    if d.is_zero():
        return "0"
    exponent = d.adjusted()
    rounded = d.quantize(Decimal(1).scaleb(exponent - digits + 1), rounding=ROUND_HALF_EVEN)
    if rounded.adjusted() != exponent:
        exponent = rounded.adjusted()
        rounded = d.quantize(Decimal(1).scaleb(exponent - digits + 1), rounding=ROUND_HALF_EVEN)
    if -5 <= exponent < 6:
        return format(rounded, 'f')
    mantissa = rounded.scaleb(-exponent)
    return f"{format(mantissa, 'f')}e{exponent:+03d}"


def _cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "yes" if value else "no"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_real(value)
    return str(value)


def markdown_table(headers: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    lines = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
    for row in rows:
        lines.append("| " + " | ".join(_cell(v) for v in row) + " |")
    return "\n".join(lines) + "\n"


def csv_table(headers: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    frame = pd.DataFrame([[_cell(v) for v in row] for row in rows], columns=list(headers))
    return frame.to_csv(index=False, lineterminator="\n")


class _Doc:
    """Accumulates titled tables for one output file."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.parts: List[str] = []

    def text(self, line: str) -> None:
        if self.fmt == "markdown":
            self.parts.append(line + "\n")

    def table(self, headers: Sequence[str], rows: Iterable[Sequence[Any]], title: Optional[str] = None) -> None:
        if self.fmt == "markdown":
            if title:
                self.parts.append(f"### {title}\n")
            self.parts.append(markdown_table(headers, rows))
        else:
            self.parts.append(csv_table(headers, rows))

    def render(self) -> str:
        return "\n".join(self.parts) if self.fmt == "markdown" else "".join(self.parts)


def _pair_value(row: Mapping[str, Any], a: str, b: str) -> Any:
    return row.get(f"r_{a}_{b}", row.get(f"r_{b}_{a}", float('nan')))


def _render_correlation(rows: List[Dict[str, Any]], fmt: str) -> Dict[str, str]:
    pairs = [k[2:].split("_", 1) for k in rows[0] if k.startswith("r_")] if rows else []
    preferred = [("nifty", "gold"), ("gold", "oil"), ("nifty", "oil")]
    names = {n for pair in pairs for n in pair}
    if names == {"nifty", "gold", "oil"}:
        pairs = [list(p) for p in preferred]
    headers = ["Period"] + [f"r({display_name(a)}, {display_name(b)})" for a, b in pairs]
    body = [[f"{r['start']}-{r['end']} weeks"] + [_pair_value(r, a, b) for a, b in pairs] for r in rows]
    doc = _Doc(fmt)
    doc.table(headers, body, title="Windowed correlations")
    return {"correlation": doc.render()}


def _render_anova(rep: RegressionReport, fmt: str) -> Dict[str, str]:
    doc = _Doc(fmt)
    rows = [["(Intercept)", rep.intercept, float('nan'), float('nan'), float('nan'), ""]]
    for name, b, se, t, p in zip(rep.regressors, rep.coefficients, rep.std_errors, rep.t_values, rep.p_values):
        rows.append([display_name(name), b, se, t, p, _stars(p)])
    doc.table(["Term", "Estimate", "Std. Error", "t value", "Pr(>|t|)", ""], rows,
              title=f"OLS: {display_name(rep.dependent)} on {', '.join(display_name(r) for r in rep.regressors)}")
    doc.table(
        ["Statistic", "Value"],
        [
            ["Observations", rep.n_obs],
            ["R-squared", rep.r_squared],
            ["Adj. R-squared", rep.adj_r_squared],
            ["F-statistic", rep.f_statistic],
            ["df", f"{rep.df_model}, {rep.df_resid}"],
            ["Prob (F-statistic)", rep.f_p_value],
            ["Durbin-Watson", rep.durbin_watson],
        ],
        title="ANOVA summary",
    )
    return {"anova": doc.render()}


def _stars(p: float) -> str:
    return significance_code(p).strip()


def _render_unitroot(tables: Dict[TrendSpec, List[UnitRootRow]], fmt: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for trend in TrendSpec:
        if trend not in tables:
            continue
        rows = tables[trend]
        doc = _Doc(fmt)
        doc.text(f"Trend: {trend.title}")
        if fmt == "csv":
            body = []
            for test in UnitRootTest:
                for row in rows:
                    rep = row.reports.get(test)
                    if rep is None:
                        continue
                    body.append([
                        test.value, row.series, rep.statistic, _p_text(rep), rep.lags,
                        *[rep.critical_values[lv] for lv in SIGNIFICANCE_LEVELS],
                        " ".join(rep.reject_at),
                    ])
            doc.table(["test", "series", "statistic", "p_value", "lags", "cv_10", "cv_5", "cv_1", "reject_at"], body)
        else:
            for test in UnitRootTest:
                reps = [(row.series, row.reports[test]) for row in rows if test in row.reports]
                if not reps:
                    continue
                doc.table(
                    ["Time Series", f"{test.value} Statistic", "p.value", "lags"],
                    [[s, r.statistic, _p_text(r), r.lags] for s, r in reps],
                    title=f"{test.value} test",
                )
                cv = reps[0][1].critical_values
                doc.table(["Level of Significance", "Critical Value"], [[lv, cv[lv]] for lv in SIGNIFICANCE_LEVELS])
        out[f"unitroot_{trend.value}"] = doc.render()
    return out


def _p_text(rep) -> str:
    text = format_real(rep.p_value)
    return f"{rep.p_value_bound}{text}" if rep.p_value_bound else text


def _render_johansen(rep: JohansenReport, portfolio: Optional[PortfolioResult], fmt: str) -> Dict[str, str]:
    k = len(rep.eigenvalues)
    labels = [f"{display_name(v)}.l{rep.lag_order}" for v in rep.variables] or [f"v{i + 1}" for i in range(k)]
    doc = _Doc(fmt)
    doc.text("Test type: trace statistic, with linear trend")
    doc.table([f"lambda{i + 1}" for i in range(k)], [list(rep.eigenvalues)], title="Eigenvalues")
    rows = []
    for r in reversed(range(k)):
        hyp = "r = 0" if r == 0 else f"r <= {r}"
        rows.append([hyp, rep.trace_stats[r]] + [rep.critical_values[r][lv] for lv in SIGNIFICANCE_LEVELS])
    doc.table(["Hypothesis", "test", "10pct", "5pct", "1pct"], rows, title="Trace statistics and critical values")
    doc.table(
        [""] + labels,
        [[labels[i]] + list(rep.eigenvectors[i]) for i in range(k)],
        title="Eigenvectors, normalised to first row (cointegration relations)",
    )
    if portfolio is not None:
        terms = " ".join(
            f"{'+' if w >= 0 else '-'} {format_real(abs(w))}*{display_name(v)}"
            for w, v in zip(portfolio.weights, portfolio.variables)
        )
        doc.text(f"Portfolio: s = {terms.lstrip('+ ')}")
        doc.table(
            ["Series", "ADF Statistic", "p.value", "lags"],
            [["Portfolio", portfolio.adf.statistic, _p_text(portfolio.adf), portfolio.adf.lags]],
            title="Portfolio ADF test",
        )
    return {"johansen": doc.render()}


def _render_granger(table: Dict[int, List[GrangerReport]], fmt: str) -> Dict[str, str]:
    doc = _Doc(fmt)
    if fmt == "csv":
        body = [
            [j, r.dependent, r.independent, r.lag_order, r.f_statistic, r.p_value, r.significance_code.strip()]
            for j in sorted(table) for r in table[j]
        ]
        doc.table(["scale", "dependent", "independent", "lag_order", "f_statistic", "p_value", "signif"], body)
    else:
        doc.text(SIGNIFICANCE_LEGEND)
        for j in sorted(table):
            doc.table(
                ["Dependent Variable", "Independent Variable", "F-stat", "Prob."],
                [[display_name(r.dependent), display_name(r.independent), r.f_statistic,
                  f"{format_real(r.p_value)} {r.significance_code}".rstrip()] for r in table[j]],
                title=scale_label(j),
            )
    return {"granger": doc.render()}


def _render_periodogram(periodograms: Dict[str, Periodogram], fmt: str, top: int = 10) -> Dict[str, str]:
    doc = _Doc(fmt)
    rows = []
    for name in sorted(periodograms):
        pg = periodograms[name]
        order = np.lexsort((pg.frequencies, -pg.power))[:top]
        for rank, i in enumerate(order, start=1):
            rows.append([display_name(name), rank, pg.frequencies[i], pg.power[i], bool(pg.aliased[i])])
    doc.table(["Series", "Rank", "Frequency (1/week)", "Power", "Aliased"], rows, title="Largest periodogram ordinates")
    return {"periodogram": doc.render()}


def _band_rows(fields_: Dict[str, CoherenceField]) -> List[List[Any]]:
    rows = []
    for name in sorted(fields_):
        f = fields_[name]
        for j in range(1, 9):
            lo, hi = scale_band(j)
            value = band_mean(f, (lo, hi))
            if not np.isnan(value):
                rows.append([name, f"{lo}-{hi}", value, f.clamped])
    return rows


def _render_coherence(fields_: Dict[str, CoherenceField], fmt: str, section: str) -> Dict[str, str]:
    doc = _Doc(fmt)
    doc.table(["Pair", "Period band (weeks)", "Mean inside COI", "Clamped cells"], _band_rows(fields_),
              title="Band-averaged coherence" if section == "coherence" else "Band-averaged multiple coherence")
    return {section: doc.render()}


def _render_dwt(decompositions: Dict[str, ScaleDecomposition], fmt: str) -> Dict[str, str]:
    doc = _Doc(fmt)
    rows = []
    for name in sorted(decompositions):
        d = decompositions[name]
        total = float(np.sum(d.details ** 2))
        for j in range(1, d.J + 1):
            energy = float(np.sum(d.detail(j) ** 2))
            rows.append([display_name(name), scale_label(j), energy, energy / total if total else float('nan')])
    doc.table(["Series", "Scale", "Detail energy", "Share"], rows, title="Detail energy by scale")
    return {"dwt": doc.render()}


def _render_summary(lines: List[Tuple[str, str]], fmt: str) -> Dict[str, str]:
    doc = _Doc(fmt)
    doc.table(["Analysis", "Finding"], lines, title="Summary of analysis")
    return {"summary": doc.render()}


def render_tables(
    bundle: ReportBundle,
    fmt: str,
    out_dir,
    sections: Optional[Sequence[str]] = None,
) -> List[Path]:
    """Write one file per table section (unit-root: one per trend).

    Args:
        bundle: Results to render
        fmt: 'markdown' or 'csv'
        out_dir: Destination directory
        sections: Sections to render; every present section when omitted

    Returns:
        Paths written, in section order

    Raises:
        ArgumentError: For an unknown format or section name
        ReportCompletenessError: If a requested section is absent from the bundle
    """
    if fmt not in FORMATS:
        raise ArgumentError(f"Unknown report format '{fmt}'; expected one of {FORMATS}")
    requested = list(sections) if sections is not None else bundle.present()
    unknown = [s for s in requested if s not in ReportBundle.section_names()]
    if unknown:
        raise ArgumentError(f"Unknown report sections: {', '.join(unknown)}")
    missing = [s for s in requested if getattr(bundle, s) is None]
    if missing:
        raise ReportCompletenessError(missing)

    out_dir = Path(out_dir)
    if requested:
        out_dir.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []
    for section in ReportBundle.section_names():
        if section not in requested or (section == "portfolio" and "johansen" in requested):
            continue
        for stem, text in _render_section(bundle, section, fmt).items():
            path = out_dir / f"{stem}{_EXT[fmt]}"
            _write_text(path, text)
            written.append(path)
    logger.info("Rendered %d %s table files", len(written), fmt)
    return written


def _render_section(bundle: ReportBundle, section: str, fmt: str) -> Dict[str, str]:
    value = getattr(bundle, section)
    if section == "correlation":
        return _render_correlation(value, fmt)
    if section == "anova":
        return _render_anova(value, fmt)
    if section == "unitroot":
        return _render_unitroot(value, fmt)
    if section == "johansen":
        return _render_johansen(value, bundle.portfolio, fmt)
    if section == "portfolio":
        doc = _Doc(fmt)
        doc.table(["Series", "ADF Statistic", "p.value", "lags"],
                  [["Portfolio", value.adf.statistic, _p_text(value.adf), value.adf.lags]], title="Portfolio ADF test")
        return {"portfolio": doc.render()}
    if section == "dwt":
        return _render_dwt(value, fmt)
    if section == "granger":
        return _render_granger(value, fmt)
    if section == "periodogram":
        return _render_periodogram(value, fmt)
    if section in ("coherence", "mwc"):
        return _render_coherence(value, fmt, section)
    return _render_summary(value, fmt)


def _write_text(path: Path, text: str) -> None:
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)


def write_grid_csv(field: CoherenceField, path) -> Path:
    """CSV with time,period,value rows, shortest period first."""
    path = Path(path)
    n_scales, n_times = field.values.shape
    lines = ["time,period,value"]
    for i in range(n_scales):
        period = format_real(field.periods[i])
        for t in range(n_times):
            lines.append(f"{t},{period},{format_real(field.values[i, t])}")
    _write_text(path, "\n".join(lines) + "\n")
    return path


def pgm_bytes(values: np.ndarray) -> bytes:
    """8-bit binary PGM (P5) of a [0, 1] grid; row 0 is the first grid row, NaN maps to 0."""
    values = np.asarray(values, dtype=float)
    height, width = values.shape
    pixels = np.rint(255.0 * np.clip(np.nan_to_num(values, nan=0.0), 0.0, 1.0)).astype(np.uint8)
    return f"P5\n{width} {height}\n255\n".encode('ascii') + pixels.tobytes()


def write_pgm(field: CoherenceField, path) -> Path:
    path = Path(path)
    with open(path, 'wb') as f:
        f.write(pgm_bytes(field.values))
    return path


def write_periodogram_csv(periodogram: Periodogram, path) -> Path:
    path = Path(path)
    rows = [[f, p] for f, p in zip(periodogram.frequencies, periodogram.power)]
    _write_text(path, csv_table(["frequency", "power"], rows))
    return path


def write_decomposition_csv(decomposition: ScaleDecomposition, path) -> Path:
    path = Path(path)
    frame = decomposition_frame(decomposition)
    _write_text(path, csv_table(list(frame.columns), frame.itertuples(index=False)))
    return path


def write_series_csv(values: np.ndarray, path, column: str = "value", dates: Optional[Sequence] = None) -> Path:
    path = Path(path)
    if dates is not None:
        rows = [[d.isoformat(), v] for d, v in zip(dates, values)]
        _write_text(path, csv_table(["date", column], rows))
    else:
        _write_text(path, csv_table([column], [[v] for v in values]))
    return path


def write_data_files(bundle: ReportBundle, out_dir, dates: Optional[Sequence] = None) -> List[Path]:
    """Write decompositions, periodograms, the portfolio series and coherence grids."""
    out_dir = Path(out_dir)
    written: List[Path] = []
    if bundle.dwt or bundle.periodogram or bundle.portfolio is not None or bundle.coherence or bundle.mwc:
        out_dir.mkdir(parents=True, exist_ok=True)
    for name in sorted(bundle.dwt or {}):
        written.append(write_decomposition_csv(bundle.dwt[name], out_dir / f"dwt_{name}.csv"))
    for name in sorted(bundle.periodogram or {}):
        written.append(write_periodogram_csv(bundle.periodogram[name], out_dir / f"periodogram_{name}.csv"))
    if bundle.portfolio is not None:
        written.append(write_series_csv(bundle.portfolio.series, out_dir / "portfolio.csv", "portfolio", dates))
    for prefix, grids in (("coherence", bundle.coherence), ("mwc", bundle.mwc)):
        for name in sorted(grids or {}):
            written.append(write_grid_csv(grids[name], out_dir / f"{prefix}_{name}.csv"))
            written.append(write_pgm(grids[name], out_dir / f"{prefix}_{name}.pgm"))
            if grids[name].significance is not None:
                p_field = CoherenceField(
                    values=grids[name].significance, scales=grids[name].scales,
                    periods=grids[name].periods, coi=grids[name].coi,
                )
                written.append(write_grid_csv(p_field, out_dir / f"{prefix}_{name}_pvalues.csv"))
    return written


def file_sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(
    out_dir, artifacts: Sequence[Path], stages: Mapping[str, str], complete: bool, extra: Optional[Mapping[str, Any]] = None
) -> Path:
    """JSON manifest listing every artifact with its SHA-256, plus stage status."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = {}
    for path in artifacts:
        path = Path(path)
        entries[_artifact_key(path, out_dir)] = file_sha256(path)
    manifest = {
        "complete": complete,
        "stages": dict(stages),
        "artifacts": entries,
    }
    if extra:
        manifest.update(extra)
    path = out_dir / MANIFEST_NAME
    _write_text(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _artifact_key(path: Path, out_dir: Path) -> str:
    try:
        return path.resolve().relative_to(out_dir.resolve()).as_posix()
    except ValueError:
        return path.name
