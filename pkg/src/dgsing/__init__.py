"""Exact verification engine for linear Koszul duality and graded singularity categories."""

__version__ = "0.1.0"
