"""Numerical laboratory for spherical and bilinear spherical averaging and
maximal operators: quadrature, norm machinery, operator evaluation,
Littlewood-Paley checks, exact exponent-region geometry, interpolation
bookkeeping, counterexample generators, and scaling-exponent sweeps."""

__version__ = "0.1.0"
