"""Counting English plaintext blocks and the codebook attack they enable."""

__version__ = "0.1.0"
