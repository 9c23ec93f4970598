"""
Per-replicate random streams.

(master_seed, replicate_id) is hashed by ``SeedSequence`` into a Philox key;
xi and psi get the two children of that sequence, so the streams of one
replicate are disjoint from each other and from every other replicate.
"""
from dataclasses import dataclass, field

import numpy as np

from src.utils.errors import ConfigurationError

MAX_SEED = 2 ** 64 - 1


def _generator(seq: np.random.SeedSequence) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seq))


@dataclass
class RngStream:
    master_seed: int
    replicate_id: int
    xi: np.random.Generator = field(init=False, repr=False)
    psi: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if not (0 <= int(self.master_seed) <= MAX_SEED):
            raise ConfigurationError(f"master seed must be an unsigned 64-bit integer, got {self.master_seed}")
        if int(self.replicate_id) < 0:
            raise ConfigurationError(f"replicate id must be nonnegative, got {self.replicate_id}")
        root = np.random.SeedSequence(entropy=int(self.master_seed), spawn_key=(int(self.replicate_id),))
        xi_seq, psi_seq = root.spawn(2)
        self.xi = _generator(xi_seq)
        self.psi = _generator(psi_seq)

    def standard_xi(self, size) -> np.ndarray:
        return self.xi.standard_normal(size)

    def standard_psi(self, size) -> np.ndarray:
        return self.psi.standard_normal(size)
