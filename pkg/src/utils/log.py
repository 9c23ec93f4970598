"""Tagged logging: every record prints as ``[Tag] message``."""
import logging
import sys

_ROOT = "ttsa"
_FORMAT = "[%(tag)s] %(message)s"


class _TagFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        record.tag = record.name.rsplit(".", 1)[-1]
        return True


def get_logger(tag: str) -> logging.Logger:
    """Return the logger for a component tag, e.g. ``get_logger("Harness")``."""
    return logging.getLogger(f"{_ROOT}.{tag}")


def configure_logging(level: int = logging.INFO, stream=None) -> None:
    """Install the tagged handler on the package root logger (idempotent)."""
    root = logging.getLogger(_ROOT)
    root.setLevel(level)
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.addFilter(_TagFilter())
    handler.setFormatter(logging.Formatter(_FORMAT))
    root.addHandler(handler)
