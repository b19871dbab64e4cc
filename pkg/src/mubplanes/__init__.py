"""Exact constructions and verification of mutually unbiased bases, spreads and affine planes."""

__version__ = "0.1.0"
