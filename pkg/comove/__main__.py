#!/usr/bin/env python3
"""
Main entry point for `python -m comove`.
"""
import sys

from .cli.main import main, setup_logging

__all__ = ['main', 'setup_logging']

if __name__ == "__main__":
    sys.exit(main())
