"""Logging setup shared by the CLI and the HTTP service."""

import logging
import sys
from typing import Optional

from cremona.core.config import settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    """Configure root logging once; reports go to stdout, logs to stderr."""
    level_name = (level or settings.CREMONA_VERBOSITY).upper()
    logging.basicConfig(
        format=LOG_FORMAT,
        level=getattr(logging, level_name, logging.WARNING),
        stream=sys.stderr,
    )
    logging.getLogger("cremona").setLevel(getattr(logging, level_name, logging.WARNING))
