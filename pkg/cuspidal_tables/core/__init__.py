"""
Core module for Cuspidal Tables
"""

from cuspidal_tables.core.enums import CaseFamily, ExitCode, MessageType, Verdict
from cuspidal_tables.core.exceptions import CuspidalTablesError

__all__ = [
    'CaseFamily',
    'ExitCode',
    'MessageType',
    'Verdict',
    'CuspidalTablesError'
]
