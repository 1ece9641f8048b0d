"""Desk-scale laboratory for relativized small complexity classes."""
__version__ = "0.1.0"
