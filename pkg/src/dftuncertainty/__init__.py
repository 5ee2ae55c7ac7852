"""Uncertainty relations for the clock and shift operators of the discrete Fourier transform."""

__version__ = "0.1.0"
