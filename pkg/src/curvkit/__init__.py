"""Symbolic curvature computations on coordinate charts."""
__version__ = "0.1.0"
