from typing import List

import numpy as np

from src.utils.errors import ConfigurationError

DEFAULT_PER_DECADE = 20


def default_checkpoints(iterations: int, per_decade: int = DEFAULT_PER_DECADE) -> List[int]:
    """Log-spaced indices floor(10^(j/per_decade)), deduplicated, with 0 and iterations."""
    if iterations < 0:
        raise ConfigurationError(f"iterations must be nonnegative, got {iterations}")
    if per_decade < 1:
        raise ConfigurationError(f"per_decade must be at least 1, got {per_decade}")
    points = {0, int(iterations)}
    j = 0
    while True:
        k = int(np.floor(10.0 ** (j / per_decade) + 1e-9))
        if k >= iterations:
            break
        points.add(k)
        j += 1
    return sorted(points)


def validate_checkpoints(checkpoints, iterations: int) -> List[int]:
    ks = [int(k) for k in checkpoints]
    if not ks:
        raise ConfigurationError("checkpoint list is empty")
    if ks[0] < 0:
        raise ConfigurationError(f"checkpoints must be nonnegative, got {ks[0]}")
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise ConfigurationError("checkpoints must be strictly increasing")
    if ks[-1] > iterations:
        raise ConfigurationError(f"last checkpoint {ks[-1]} exceeds iterations {iterations}")
    return ks
