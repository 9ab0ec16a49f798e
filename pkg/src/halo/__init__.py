"""Fredholm series of U_p via the p-adic trace formula: exact arithmetic,
Iwasawa invariants, Newton polygons and boundary-slope prediction."""

__version__ = "0.1.0"
