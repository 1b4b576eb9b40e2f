"""Enumeration of positive definite maximal integer-valued quadratic forms of small class number."""

__version__ = "0.1.0"
