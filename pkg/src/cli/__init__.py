"""
Command-line interface
"""
from .app import EXIT_INVALID, EXIT_OK, EXIT_RUNTIME, UcdCommandLine, build_parser

__all__ = ["UcdCommandLine", "build_parser", "EXIT_OK", "EXIT_RUNTIME", "EXIT_INVALID"]
