"""Nørlund and Bühring coefficients, Meijer G-functions and hypergeometric identity checks."""

__version__ = "0.1.0"
