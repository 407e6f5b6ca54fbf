import logging
import os
import sys
from typing import Any, Dict

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logger(name: str) -> logging.Logger:
    """Set up a logger with the service format and a single stderr handler."""
    logger = logging.getLogger(name)
    level = os.getenv("OBSTRUCT_LOG_LEVEL", "INFO").upper()
    logger.setLevel(level)

    # Re-importing a module must not stack handlers
    if not logger.handlers:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(console_handler)
        logger.propagate = False

    return logger


def log_state(logger: logging.Logger, state: Dict[str, Any], prefix: str = "") -> None:
    """Log the current state of the workflow."""
    if not logger.isEnabledFor(logging.DEBUG):
        return
    logger.debug(f"{prefix} State Contents:")
    for key, value in state.items():
        if value is not None:
            if isinstance(value, dict):
                logger.debug(f"{prefix} {key}:")
                for sub_key, sub_value in value.items():
                    logger.debug(f"{prefix}   {sub_key}: {type(sub_value)}")
            else:
                logger.debug(f"{prefix} {key}: {type(value)}")
