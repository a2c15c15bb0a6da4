"""origeom: exact origami-fold geometry engine."""

__version__ = "0.1.0"
