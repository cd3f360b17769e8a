"""Saito bases and analytic invariants of plane curve germs over the rationals."""

__version__ = "0.1.0"
