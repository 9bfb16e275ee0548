"""Logging configuration for ZDGVerify."""
import logging
import sys

from app.config import settings

_configured = False


def setup_logging() -> logging.Logger:
    """Configure logging for the command-line tools.

    Log records go to stderr; stdout carries exported artifacts only.
    """
    global _configured

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING))

    if _configured:
        return root_logger

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if settings.LOG_FILE:
        try:
            file_handler = logging.FileHandler(settings.LOG_FILE)
            file_handler.setFormatter(formatter)
            root_logger.addHandler(file_handler)
        except OSError as e:
            # If file logging fails, just log to console
            root_logger.warning(f"Could not set up file logging: {e}")

    _configured = True
    return root_logger


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance for a specific module."""
    return logging.getLogger(name)
