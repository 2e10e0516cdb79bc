"""Logging utilities for the model soup toolkit.

Every toolkit logger lives under the ``soupkit`` namespace and writes to
stderr, so stdout carries only command results. The level comes from
LOG_LEVEL (DEBUG, INFO, WARNING, ERROR, CRITICAL; default WARNING).
"""

import logging
import os
from typing import Optional

ROOT_LOGGER_NAME = "soupkit"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Third-party loggers that flood DEBUG output (font discovery, PNG chunks)
_NOISY_LOGGERS = ("matplotlib", "PIL")


def configure_logging(level: Optional[str] = None) -> int:
    """Set the toolkit log level from `level` or the LOG_LEVEL environment variable.

    Unknown names fall back to WARNING. Returns the numeric level applied.
    """
    name = (level or os.environ.get("LOG_LEVEL", "WARNING")).upper()
    log_level = logging.getLevelName(name)
    if not isinstance(log_level, int):
        log_level = logging.WARNING

    root = logging.getLogger(ROOT_LOGGER_NAME)
    root.setLevel(log_level)
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
    for noisy in _NOISY_LOGGERS:
        logging.getLogger(noisy).setLevel(max(log_level, logging.WARNING))
    return log_level


# Configure logging when module is imported
configure_logging()


class SoupLogger:
    """Logger for soup, optimizer and bench operations."""

    def __init__(self, name: str):
        """Initialize logger.

        Args:
            name: Logger name, typically class or module name; nested under ``soupkit``
        """
        short = name[len("src."):] if name.startswith("src.") else name
        self.logger = logging.getLogger(f"{ROOT_LOGGER_NAME}.{short}")

    def log_candidate(
        self,
        candidate_id: str,
        accepted: bool,
        acc_before: float,
        acc_after: Optional[float] = None,
    ):
        """Log the outcome of one soup candidate.

        Args:
            candidate_id: Pool id of the candidate ingredient
            accepted: Whether the candidate was mixed into the soup
            acc_before: Soup validation accuracy before the candidate
            acc_after: Validation accuracy of the candidate soup, if computed
        """
        verdict = "accepted" if accepted else "rejected"
        after = f" -> {acc_after:.4f}" if acc_after is not None else ""
        self.logger.info(f"Candidate {candidate_id} {verdict}: {acc_before:.4f}{after}")

    def log_evaluations(self, phase: str, count: int):
        """Log number of evaluator calls spent in a phase.

        Args:
            phase: Soup phase (e.g., 'sort', 'gate', 'optimize')
            count: Number of evaluator calls
        """
        self.logger.debug(f"{count} evaluator calls in phase '{phase}'")

    def log_training(self, config_id: str, epoch: int, loss: float):
        """Log training progress for one grid config.

        Args:
            config_id: Train config identifier
            epoch: Epoch index (0-based)
            loss: Mean training loss of the epoch
        """
        self.logger.debug(f"[{config_id}] epoch {epoch + 1}: loss={loss:.5f}")

    def debug(self, msg: str):
        self.logger.debug(msg)

    def info(self, msg: str):
        self.logger.info(msg)

    def warning(self, msg: str):
        self.logger.warning(msg)

    def error(self, msg: str):
        self.logger.error(msg)
