"""Two-time-scale stochastic approximation laboratory."""

__version__ = "0.1.0"
