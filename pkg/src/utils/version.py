import subprocess
from functools import lru_cache
from pathlib import Path

import src

_REPO_ROOT = Path(__file__).resolve().parents[2]


@lru_cache(maxsize=None)
def describe_version() -> str:
    """``git describe`` of the checkout, or the package version outside a git tree."""
    try:
        out = subprocess.check_output(
            ["git", "describe", "--tags", "--always", "--dirty"],
            cwd=_REPO_ROOT,
            text=True,
            stderr=subprocess.DEVNULL,
        ).strip()
    except (OSError, subprocess.CalledProcessError):
        out = ""
    return out or f"v{src.__version__}"
