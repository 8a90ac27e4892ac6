"""
lib.cli (facade)
=================================
`python fragtok.py <subcommand>` の実体。
"""

from .main import build_parser, main

__all__ = ["build_parser", "main"]
