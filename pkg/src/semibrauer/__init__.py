"""Modifications of finite groups, semigroup 0-cohomology and relative Brauer monoids."""

__version__ = "0.1.0"
