"""
Logging utilities for pipeline
"""
import logging
import sys
from typing import Optional

from common.config import settings


def setup_logger(name: str = "pipeline", level: Optional[str] = None) -> logging.Logger:
    """Setup logger with consistent format (stderr, stdout is reserved for reports)"""
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, (level or settings.log_level).upper()))

    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.propagate = False

    return logger
