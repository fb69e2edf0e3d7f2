"""Exact and numeric verification of sharp higher-order Sobolev trace
inequalities on the ball and the half-space."""

__version__ = "0.1.0"
