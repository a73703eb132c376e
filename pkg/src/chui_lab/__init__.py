"""Sums of Cauchy kernels with poles on the unit circle in weighted Bergman spaces."""

__version__ = "0.1.0"
