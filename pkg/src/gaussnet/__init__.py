"""Exact combinatorial algebra of Gaussian Bayesian networks."""

__version__ = "0.1.0"
