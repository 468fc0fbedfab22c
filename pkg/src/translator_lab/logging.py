# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

"""Package logger: one stdout handler, level names coloured per severity."""

import copy
import logging
import sys
from typing import Optional, Union

import colorama

LOGGER_NAME = "translator_lab"
LOG_FORMAT = "%(asctime)s - %(name)s - [%(threadName)s] - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

LEVEL_COLORS = {
    logging.DEBUG: colorama.Fore.CYAN,
    logging.INFO: colorama.Fore.GREEN,
    logging.WARNING: colorama.Fore.YELLOW,
    logging.ERROR: colorama.Fore.RED,
    logging.CRITICAL: colorama.Fore.MAGENTA + colorama.Style.BRIGHT,
}


class ColorFormatter(logging.Formatter):
    """Colours the level name of known levels; the message text stays plain so it can be grepped."""

    def format(self, record: logging.LogRecord) -> str:
        color = LEVEL_COLORS.get(record.levelno)
        if color is None:
            return super().format(record)
        tinted = copy.copy(record)
        tinted.levelname = f"{color}{record.levelname}{colorama.Style.RESET_ALL}"
        return super().format(tinted)


def resolve_level(level: Union[int, str]) -> int:
    """Numeric level for a number or a case-insensitive level name; unknown names give INFO."""
    if isinstance(level, int):
        return level
    resolved = logging.getLevelName(level.strip().upper())
    return resolved if isinstance(resolved, int) else logging.INFO


def setup_logging(level: Union[int, str] = logging.INFO, logger_name: Optional[str] = LOGGER_NAME) -> logging.Logger:
    """
    Configures the package logger. Repeated calls only change the level.

    Args:
        level: A logging level number or name such as "DEBUG".
        logger_name: The logger to configure; None configures the root logger.
    """
    colorama.just_fix_windows_console()
    logger = logging.getLogger(logger_name)
    logger.setLevel(resolve_level(level))
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stdout)
        handler.setFormatter(ColorFormatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        logger.addHandler(handler)
    return logger


logger = setup_logging()
