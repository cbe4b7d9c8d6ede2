"""Metamorphic testing harness for static-analyzer rule implementations."""

__version__ = "0.1.0"
