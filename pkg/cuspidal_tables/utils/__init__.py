"""
Utility modules for Cuspidal Tables
"""

from cuspidal_tables.utils.terminal import Colors, print_message, print_table, verdict_tag
from cuspidal_tables.utils.logging_utils import setup_logging, TerminalLogHandler

__all__ = [
    'Colors',
    'print_message',
    'print_table',
    'verdict_tag',
    'setup_logging',
    'TerminalLogHandler'
]
