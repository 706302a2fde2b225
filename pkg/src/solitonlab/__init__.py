"""Integrable-systems toolkit: symbolic charges and Lax pairs, lattices, PDE solvers, solitons and GLM."""

__version__ = "0.1.0"
