"""Cooperative kitchen gridworld, partner policies, and a robustness test bench."""

__version__ = "0.1.0"
