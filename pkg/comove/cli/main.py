#!/usr/bin/env python3
"""
Command-line front end: the full run plus one subcommand per analysis stage.
"""
import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from dotenv import load_dotenv

from ..exceptions import ComoveError
from ..models import BoundaryRule, TrendSpec, UnitRootTest
from .config import build_run_config
from .pipeline import run_pipeline

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# subcommand -> pipeline stages (ingest always runs first)
COMMAND_STAGES: Dict[str, Optional[Tuple[str, ...]]] = {
    "run": None,
    "corr": ("correlation",),
    "anova": ("anova",),
    "unitroot": ("unitroot",),
    "johansen": ("johansen",),
    "dwt": ("dwt",),
    "granger": ("dwt", "granger"),
    "fourier": ("fourier",),
    "coherence": ("coherence",),
    "mwc": ("mwc",),
}


def setup_logging(level: str = "INFO", log_dir: Optional[str] = None) -> None:
    """Configure application logging.

    Args:
        level: Root log level name
        log_dir: When given, also log to <log_dir>/comove.log
    """
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        handlers.append(logging.FileHandler(os.path.join(log_dir, 'comove.log'), encoding='utf-8'))
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT, handlers=handlers, force=True)


def _pair(text: str) -> Tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}")
    return parts[0], parts[1]


def _window(text: str) -> Tuple[int, int]:
    try:
        start, end = (int(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'start:end', got {text!r}") from None
    return start, end


def _add_common(parser: argparse.ArgumentParser) -> None:
    inputs = parser.add_argument_group("inputs")
    inputs.add_argument("--nifty", dest="inputs.nifty", type=Path, help="NSE-Nifty weekly closes (INR)")
    inputs.add_argument("--gold", dest="inputs.gold_usd", type=Path, help="Gold weekly closes (USD)")
    inputs.add_argument("--oil", dest="inputs.wti_usd", type=Path, help="WTI crude weekly closes (USD)")
    inputs.add_argument("--usdinr", dest="inputs.usdinr", type=Path, help="USD/INR weekly rates")
    inputs.add_argument("--date-column", dest="ingest.date_column", help="Date column name (default: date)")
    inputs.add_argument("--value-column", dest="ingest.value_column", help="Value column name")
    inputs.add_argument("--date-format", dest="ingest.date_format", help="strptime format for vendor exports")
    inputs.add_argument("--tolerance-days", dest="ingest.tolerance_days", type=int,
                        help="Maximum date distance when matching weeks")

    run = parser.add_argument_group("run")
    run.add_argument("--config", type=Path, help="YAML settings file (flags override it)")
    run.add_argument("--output-dir", dest="run.output_dir", type=Path,
                     help="Artifact directory (default: $COMOVE_OUTPUT_DIR or ./comove-output)")
    run.add_argument("--seed", dest="run.seed", type=int, help="Run seed for all Monte-Carlo draws")
    run.add_argument("--format", dest="run.formats", action="append", choices=("markdown", "csv"),
                     help="Table format; repeat for several (default: both)")
    run.add_argument("--no-progress", dest="run.progress", action="store_const", const=False,
                     help="Hide surrogate progress bars")
    run.add_argument("--log-level", default="INFO", choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    run.add_argument("--log-dir", help="Also write comove.log into this directory")


def _add_correlation(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--window", dest="correlation.windows", action="append", type=_window,
                        help="Half-open row window start:end; repeat for several")


def _add_unitroot(parser: argparse.ArgumentParser, filters: bool) -> None:
    group = parser.add_argument_group("unit-root tests")
    group.add_argument("--trend", dest="unitroot.trends", action="append", choices=[t.value for t in TrendSpec],
                       help="Deterministic terms; repeat for several (default: all)")
    if filters:
        group.add_argument("--test", dest="unitroot.tests", action="append", type=str.upper,
                           choices=[t.value for t in UnitRootTest], help="Test to run; repeat for several")
        group.add_argument("--column", dest="unitroot.columns", action="append",
                           help="Panel column (oil, gold, nifty); repeat for several")
    group.add_argument("--lags", dest="unitroot.adf_lags", type=int, help="Fixed ADF lag count (skips AIC)")
    group.add_argument("--adf-max-lags", dest="unitroot.adf_max_lags", type=int, help="Largest ADF lag tried by AIC")
    group.add_argument("--pp-bandwidth", dest="unitroot.pp_bandwidth", type=int, help="Phillips-Perron bandwidth")
    group.add_argument("--kpss-bandwidth", dest="unitroot.kpss_bandwidth", type=int, help="KPSS bandwidth")


def _add_johansen(parser: argparse.ArgumentParser, flag: str) -> None:
    parser.add_argument(flag, dest="johansen.lag_order", type=int, help="VAR order in levels (default: 2)")


def _add_dwt(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--levels", dest="dwt.levels", type=int, help="Number of detail scales J (default: 7)")
    parser.add_argument("--boundary", dest="dwt.boundary", choices=[b.value for b in BoundaryRule])


def _add_granger(parser: argparse.ArgumentParser, flag: str) -> None:
    parser.add_argument(flag, dest="granger.lag_order", help="Granger lag order or 'aic' (default: 3)")
    parser.add_argument("--granger-max-lags", dest="granger.max_lags", type=int, help="Largest order tried by 'aic'")


def _add_fourier(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--fourier-column", dest="fourier.column", help="Series to scan (default: nifty)")
    parser.add_argument("--max-index", dest="fourier.max_index", type=int, help="Scan k/N for k = 0..max (default: 500)")
    parser.add_argument("--demean", dest="fourier.demean", action="store_const", const=True,
                        help="Subtract the mean before scanning")


def _add_cwt(parser: argparse.ArgumentParser, pairs: bool) -> None:
    group = parser.add_argument_group("wavelet coherence")
    if pairs:
        group.add_argument("--pair", dest="cwt.pairs", action="append", type=_pair,
                           help="Column pair a,b; repeat for several")
    group.add_argument("--voices", dest="cwt.voices", type=int, help="Scales per octave (default: 8)")
    group.add_argument("--max-period", dest="cwt.max_period", type=float, help="Longest period in weeks")
    group.add_argument("--surrogates", dest="cwt.n_surrogates", type=int, help="AR(1) surrogates (min 100)")
    group.add_argument("--time-smoothing", dest="cwt.time_smoothing", type=float)
    group.add_argument("--scale-smoothing", dest="cwt.scale_smoothing", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="comove",
        description="Co-movement analysis of crude oil, gold and NSE-Nifty weekly prices",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text, description=help_text)
        _add_common(sub)
        return sub

    run = command("run", "Run every analysis stage and write the full report")
    _add_correlation(run)
    _add_unitroot(run, filters=False)
    _add_johansen(run, "--johansen-lag-order")
    _add_dwt(run)
    _add_granger(run, "--granger-lag-order")
    _add_fourier(run)
    _add_cwt(run, pairs=True)

    _add_correlation(command("corr", "Windowed Pearson correlations"))
    command("anova", "OLS regression of Nifty on Oil and Gold with ANOVA summary")
    _add_unitroot(command("unitroot", "ADF, Phillips-Perron and KPSS tests on levels and differences"), filters=True)
    _add_johansen(command("johansen", "Johansen trace test and cointegrating portfolio"), "--lag-order")
    _add_dwt(command("dwt", "Haar a trous decomposition of every series"))
    granger = command("granger", "Granger causality on each decomposition scale")
    _add_dwt(granger)
    _add_granger(granger, "--lag-order")
    _add_fourier(command("fourier", "Periodogram scan over k/N"))
    _add_cwt(command("coherence", "Pairwise wavelet coherence with Monte-Carlo significance"), pairs=True)
    _add_cwt(command("mwc", "Multiple wavelet coherence of Nifty on Oil and Gold"), pairs=False)
    return parser


def settings_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Dotted settings keys set on the command line; unset flags are None."""
    return {key: value for key, value in vars(args).items() if '.' in key}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main application entry point."""
    load_dotenv()
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, args.log_dir)
    logger.info("Starting comove %s", args.command)

    try:
        config = build_run_config(args.config, settings_overrides(args))
        result = run_pipeline(config, COMMAND_STAGES[args.command])
    except ComoveError as e:
        where = f" ({e.path})" if getattr(e, 'path', None) else ""
        logger.error("stage 'config' failed: %s%s", e, where)
        return e.exit_code
    except Exception:
        logger.exception("Unhandled exception in main:")
        return 1

    if result.error is not None:
        logger.error("Run incomplete: stage '%s' failed; partial manifest at %s", result.failed_stage, result.manifest)
        return result.exit_code
    logger.info("Done: %d artifacts in %s", len(result.artifacts), config.output_dir)
    return 0


if __name__ == "__main__":
    sys.exit(main())
