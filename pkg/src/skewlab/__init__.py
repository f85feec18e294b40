"""Crossing tournaments of skew lines, Erdos-Hajnal set extraction, plane-curve decompositions."""

__version__ = "0.1.0"
