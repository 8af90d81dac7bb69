"""
CLI package
"""

# `main` is deliberately not re-exported here: binding the function to the
# package attribute would shadow the `cli.main` submodule. Use
# `from cli.main import main`.
from .main import build_parser, parse_config

__all__ = ['build_parser', 'parse_config']
