"""Finite subdivision rules for Lattès maps.

Modules: exact (arithmetic), lattes (map data), hexplane (hexagon tiling),
fundom (fundamental domains), fsr (rule engine), verify4 (the quadratic
example), render and cli.
"""

__version__ = "0.1.0"
