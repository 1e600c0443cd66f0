# File: app/core/log.py
import logging
import sys

from ..config import get_settings

_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


def configure_logging(level: str | None = None) -> None:
    """Send records to stderr; stdout is reserved for command output."""
    settings = get_settings()
    chosen = (level or settings.LOG_LEVEL).upper()
    root = logging.getLogger("app")
    root.setLevel(getattr(logging, chosen, logging.WARNING))
    if not any(getattr(h, "_entropy_handler", False) for h in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(_FORMAT))
        handler._entropy_handler = True  # type: ignore[attr-defined]
        root.addHandler(handler)
