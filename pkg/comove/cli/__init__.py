"""
Command-line front end and pipeline orchestration.
"""
from .config import RunConfig, build_run_config
from .main import build_parser, main, setup_logging
from .pipeline import STAGES, Pipeline, PipelineResult, run_pipeline, summarize

__all__ = [
    'RunConfig',
    'build_run_config',
    'build_parser',
    'main',
    'setup_logging',
    'STAGES',
    'Pipeline',
    'PipelineResult',
    'run_pipeline',
    'summarize',
]
