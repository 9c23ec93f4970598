from src.noise.spec import NoiseKind, NoiseSpec
from src.noise.rng import RngStream
from src.noise.sampler import target_variances, sample, sample_batch

__all__ = ["NoiseKind", "NoiseSpec", "RngStream", "target_variances", "sample", "sample_batch"]
