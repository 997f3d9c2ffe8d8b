"""
Terminal output formatting utilities for Cuspidal Tables
"""

import shutil
import sys
from typing import Optional, Sequence

from cuspidal_tables.core.enums import MessageType, Verdict


class Colors:
    """ANSI color codes for terminal output"""
    RESET = "\033[0m"
    BOLD = "\033[1m"
    DIM = "\033[2m"

    RED = "\033[31m"
    GREEN = "\033[32m"
    YELLOW = "\033[33m"
    CYAN = "\033[36m"

    BRIGHT_BLACK = "\033[90m"
    BRIGHT_BLUE = "\033[94m"
    BRIGHT_MAGENTA = "\033[95m"
    BRIGHT_GREEN = "\033[92m"

    @classmethod
    def disable_colors(cls):
        """Disable all colors by setting them to empty strings"""
        for attr in dir(cls):
            if not attr.startswith('__') and not callable(getattr(cls, attr)):
                setattr(cls, attr, '')


def should_use_colors() -> bool:
    """
    Determine if colors should be used in terminal output

    Returns:
        bool: True if stdout is attached to a terminal
    """
    return sys.stdout.isatty()


_STYLES = {
    MessageType.INFO: ("CYAN", "ℹ️  INFO    │ "),
    MessageType.SUCCESS: ("GREEN", "✓  MATCH   │ "),
    MessageType.WARNING: ("YELLOW", "⚠️  WARNING │ "),
    MessageType.ERROR: ("RED", "✗  ERROR   │ "),
    MessageType.TITLE: ("BRIGHT_BLUE", "∑ "),
    MessageType.SYSTEM: ("BRIGHT_MAGENTA", "⚙  SYSTEM  │ "),
    MessageType.RESULT: ("BRIGHT_BLACK", "   "),
    MessageType.FINAL: ("BRIGHT_GREEN", "🏁 FINAL   │ "),
}


def _wrap(message: str, limit: int) -> list:
    lines, current = [], ""
    for word in message.split():
        if current and len(current) + len(word) + 1 > limit:
            lines.append(current)
            current = ""
        current += word + " "
    if current:
        lines.append(current)
    return lines


def print_message(message: str, msg_type: MessageType = MessageType.INFO,
                  style: Optional[str] = None, width: Optional[int] = None):
    """
    Print a formatted message to the console

    Args:
        message: The message to print
        msg_type: Type of message (info, success, warning, error, etc.)
        style: Optional additional styling (box, divider)
        width: Width of the message box (defaults to terminal width)
    """
    if not width:
        width = shutil.get_terminal_size(fallback=(80, 24)).columns

    color_name, prefix = _STYLES.get(msg_type, ("", ""))
    color = getattr(Colors, color_name, "") if color_name else ""
    if msg_type in (MessageType.TITLE, MessageType.FINAL):
        color += Colors.BOLD

    if style == "box":
        box_width = width - 4
        print(f"{color}┌{'─' * box_width}┐{Colors.RESET}")
        for line in _wrap(message, box_width - 4):
            padding = box_width - len(line) - 2
            print(f"{color}│ {line}{' ' * padding} │{Colors.RESET}")
        print(f"{color}└{'─' * box_width}┘{Colors.RESET}")
    elif style == "divider":
        print(f"{color}{'═' * width}{Colors.RESET}")
        print(f"{color}{prefix}{message}{Colors.RESET}")
        print(f"{color}{'═' * width}{Colors.RESET}")
    else:
        print(f"{color}{prefix}{message}{Colors.RESET}")


def verdict_tag(verdict: Verdict) -> str:
    """
    Colored fixed-width tag for a comparison verdict

    Args:
        verdict: Outcome of a field comparison

    Returns:
        str: Tag such as "[MATCH]" wrapped in color codes
    """
    color = {
        Verdict.MATCH: Colors.GREEN,
        Verdict.MISMATCH: Colors.RED,
        Verdict.SKIPPED: Colors.YELLOW,
        Verdict.CITED: Colors.CYAN,
    }[verdict]
    return f"{color}[{verdict.value}]{Colors.RESET}"


def print_table(headers: Sequence[str], rows: Sequence[Sequence[str]]):
    """
    Print a plain column-aligned table

    Args:
        headers: Column titles
        rows: Cell strings, one sequence per row
    """
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(str(cell)))
    line = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
    print(f"{Colors.BOLD}{line}{Colors.RESET}")
    print("  ".join("─" * w for w in widths))
    for row in rows:
        print("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))
