"""High-order solvers for anomalous sub-diffusion with low-regularity initial layers."""

__version__ = "0.1.0"
