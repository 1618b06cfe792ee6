"""Condition-number calculus for cyclotomic/multiquadratic embedding matrices
and exact instrumented ring arithmetic (NTT, scaled WHT, hybrid, RNS)."""

__version__ = "0.1.0"
