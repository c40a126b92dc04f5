"""
Logging setup shared by the CLI and the API.
"""

import logging
import sys
from typing import Optional

from app.config import settings

LOG_FORMAT = "%(levelname)-5.5s [%(name)s] %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    """Send ``app.*`` logs to stderr at the configured level."""
    if settings.debug:
        level = "DEBUG"
    level = (level or settings.log_level).upper()

    logger = logging.getLogger("app")
    logger.setLevel(level)
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
