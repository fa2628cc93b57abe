"""
Logging Configuration for the dynamic cut sparsifier

This module provides centralized logging configuration for the library and CLI.
Log records always go to stderr: stdout is reserved for sparsifier output.
"""

import logging
import os
import sys
from typing import ClassVar


class LoggingConfig:
    """
    Centralized logging configuration for the package.

    This class manages logging levels for the sketch layer and the pipeline.
    """

    # Default logging levels for different components
    DEFAULT_LEVELS: ClassVar[dict[str, int]] = {
        "dynsparse": logging.INFO,
        # Per-update sketch code is chatty at DEBUG
        "dynsparse.sketches": logging.WARNING,
        "dynsparse.sparsifier": logging.INFO,
        # Root logger
        "": logging.WARNING,
    }

    # Environment variable mappings
    ENV_LEVELS: ClassVar[dict[str, str]] = {
        "LOG_LEVEL": "",  # Root logger
        "DYNSPARSE_LOG_LEVEL": "dynsparse",
        "DYNSPARSE_SKETCH_LOG_LEVEL": "dynsparse.sketches",
    }

    def __init__(self) -> None:
        self._configured = False
        self._custom_levels: dict[str, int] = {}

    def set_level(self, logger_name: str, level: int) -> None:
        """Set logging level for a specific logger."""
        self._custom_levels[logger_name] = level
        if self._configured:
            logging.getLogger(logger_name).setLevel(level)

    def get_level(self, logger_name: str) -> int:
        """Get the current logging level for a logger."""
        return logging.getLogger(logger_name).level

    def configure_logging(self, log_level: int | None = None) -> None:
        """
        Configure logging for the package.

        Args:
            log_level: Override the package log level (optional)
        """
        if not logging.getLogger().hasHandlers():
            logging.basicConfig(
                level=logging.WARNING,
                format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
                stream=sys.stderr,
            )

        for logger_name, level in self.DEFAULT_LEVELS.items():
            logging.getLogger(logger_name).setLevel(level)

        if log_level is not None:
            logging.getLogger("dynsparse").setLevel(log_level)

        self._apply_env_overrides()

        for logger_name, level in self._custom_levels.items():
            logging.getLogger(logger_name).setLevel(level)

        self._configured = True

        if self._is_debug_mode():
            self._log_configuration_summary()

    def _apply_env_overrides(self) -> None:
        """Apply logging level overrides from environment variables."""
        for env_var, logger_name in self.ENV_LEVELS.items():
            level_str = os.environ.get(env_var, "").upper()
            if level_str:
                level = logging.getLevelName(level_str)
                if isinstance(level, int):
                    logging.getLogger(logger_name).setLevel(level)
                else:
                    print(
                        f"Warning: Invalid log level '{level_str}' for {env_var}",
                        file=sys.stderr,
                    )

    def _is_debug_mode(self) -> bool:
        """Check if debug logging was requested for the package."""
        return logging.getLogger("dynsparse").getEffectiveLevel() <= logging.DEBUG

    def _log_configuration_summary(self) -> None:
        """Log a summary of the current logging configuration."""
        logger = logging.getLogger(__name__)
        logger.debug(
            "[LOGGING] root=%s",
            logging.getLevelName(logging.getLogger().level),
        )
        for logger_name in sorted(self.DEFAULT_LEVELS):
            if logger_name:
                level = logging.getLogger(logger_name).level
                logger.debug(f"[LOGGING]   {logger_name}: {logging.getLevelName(level)}")


# Global instance
logging_config = LoggingConfig()


def setup_logging(log_level: int | None = None) -> None:
    """
    Set up logging for the CLI.

    Library code never calls this; applications embedding the package
    configure logging themselves.
    """
    logging_config.configure_logging(log_level)


def get_logger(name: str) -> logging.Logger:
    """
    Get a configured logger instance.

    Args:
        name: Logger name (typically __name__)

    Returns:
        Configured logger instance
    """
    return logging.getLogger(name)
