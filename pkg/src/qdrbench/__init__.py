"""Benchmark toolkit: classical dimensionality reduction feeding 2-qubit
quantum classifiers, compared against classical baselines on imbalanced
tabular data."""

from .backend import BACKEND_NAME

__version__ = "0.1.0"

__all__ = ["BACKEND_NAME", "__version__"]
