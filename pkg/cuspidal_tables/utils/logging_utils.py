"""
Logging utilities for Cuspidal Tables
"""

import logging
from typing import Optional

from cuspidal_tables.utils.terminal import print_message
from cuspidal_tables.core.enums import MessageType

logger = logging.getLogger(__name__)


class TerminalLogHandler(logging.Handler):
    """Custom logging handler that formats log messages for terminal output"""

    def emit(self, record):
        msg = self.format(record)
        if record.levelno >= logging.ERROR:
            print_message(msg, MessageType.ERROR)
        elif record.levelno >= logging.WARNING:
            print_message(msg, MessageType.WARNING)
        elif record.levelno <= logging.DEBUG:
            print_message(msg, MessageType.RESULT)
        else:
            print_message(msg, MessageType.INFO)


def setup_logging(log_file: Optional[str] = None, level: int = logging.INFO, terminal: bool = True):
    """
    Set up logging for Cuspidal Tables

    Args:
        log_file: Path to log file, or None for terminal output only
        level: Logging level
        terminal: Echo records to the terminal; off when stdout carries JSON
    """
    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    file_formatter = logging.Formatter("%(asctime)s [%(levelname)s] %(message)s")
    terminal_formatter = logging.Formatter("%(message)s")

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(level)
        file_handler.setFormatter(file_formatter)
        root_logger.addHandler(file_handler)

    if terminal:
        terminal_handler = TerminalLogHandler()
        terminal_handler.setLevel(level)
        terminal_handler.setFormatter(terminal_formatter)
        root_logger.addHandler(terminal_handler)

    if not root_logger.handlers:
        # JSON mode without a log file emits nothing
        root_logger.addHandler(logging.NullHandler())

    logger.debug(f"Logging initialized with level {logging.getLevelName(level)}")
