"""Terminal output for the CLI: step marks, section headers and accuracy lines.

Results go to stdout, warnings and errors to stderr. Colors are only emitted
when the stream is a terminal and NO_COLOR is unset, so piped output (paths,
JSON, markdown tables) stays plain.
"""

import os
import sys
from typing import Optional, TextIO


class Colors:
    """ANSI color codes for terminal output."""

    GREEN = "\033[92m"
    YELLOW = "\033[93m"
    RED = "\033[91m"
    BLUE = "\033[94m"
    BOLD = "\033[1m"
    RESET = "\033[0m"

    @staticmethod
    def paint(text: str, color: str, stream: TextIO) -> str:
        if os.environ.get("NO_COLOR") or not getattr(stream, "isatty", lambda: False)():
            return text
        return f"{color}{text}{Colors.RESET}"


class ProgressIndicator:
    """Progress output for the soup toolkit's subcommands."""

    _current_message = ""

    @staticmethod
    def _emit(stream: TextIO, line: str) -> None:
        stream.write(f"{line}\n")
        stream.flush()

    @staticmethod
    def step_start(message: str) -> None:
        """Remember a step; it is printed once `step_complete` is called without a message."""
        ProgressIndicator._current_message = message

    @staticmethod
    def step_complete(message: Optional[str] = None) -> None:
        mark = Colors.paint("✓", Colors.GREEN, sys.stdout)
        ProgressIndicator._emit(sys.stdout, f"{mark} {message or ProgressIndicator._current_message}")

    @staticmethod
    def step_warning(message: str) -> None:
        mark = Colors.paint("!", Colors.YELLOW, sys.stderr)
        ProgressIndicator._emit(sys.stderr, f"{mark} {message}")

    @staticmethod
    def step_error(message: str) -> None:
        mark = Colors.paint("✗", Colors.RED, sys.stderr)
        ProgressIndicator._emit(sys.stderr, f"{mark} {message}")

    @staticmethod
    def section_header(title: str) -> None:
        """Display a bold title underlined with dashes."""
        heading = Colors.paint(title, Colors.BLUE + Colors.BOLD, sys.stdout)
        ProgressIndicator._emit(sys.stdout, f"\n{heading}\n{'-' * len(title)}")

    @staticmethod
    def bullet_item(message: str) -> None:
        bullet = Colors.paint("•", Colors.BLUE, sys.stdout)
        ProgressIndicator._emit(sys.stdout, f"{bullet} {message}")

    @staticmethod
    def accuracy_item(name: str, value: Optional[float]) -> None:
        """Bullet with a fraction-valued accuracy shown as a percentage."""
        text = "n/a" if value is None else f"{100.0 * value:6.2f}%"
        ProgressIndicator.bullet_item(f"{name:<12} {text}")

    @staticmethod
    def candidate_result(
        candidate_id: str, accepted: bool, acc_before: Optional[float], acc_after: Optional[float]
    ) -> None:
        """One line per soup candidate: verdict and the accuracy it was judged against.

        Args:
            candidate_id: Pool id of the candidate
            accepted: Whether it joined the soup
            acc_before: Soup accuracy before the candidate
            acc_after: Accuracy of the candidate soup, None when the gate skipped it
        """
        if accepted:
            mark = Colors.paint("+", Colors.GREEN, sys.stdout)
        else:
            mark = Colors.paint("-", Colors.YELLOW, sys.stdout)
        before = "n/a" if acc_before is None else f"{acc_before:.4f}"
        if acc_after is None:
            after = "n/a" if accepted else "skipped"
        else:
            after = f"{acc_after:.4f}"
        ProgressIndicator._emit(sys.stdout, f"  {mark} {candidate_id:<12} {before} -> {after}")

    @staticmethod
    def print_message(message: str) -> None:
        """Plain line on stdout (paths, JSON, markdown)."""
        ProgressIndicator._emit(sys.stdout, message)
