"""Moments of secular coefficients over O(2N+1) and USp(2N), computed exactly and by sampling,
together with the function-field sums they model."""

__version__ = "0.1.0"
