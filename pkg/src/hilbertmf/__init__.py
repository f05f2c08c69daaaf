"""Computational kernel for Hilbert modular forms over real quadratic fields."""
