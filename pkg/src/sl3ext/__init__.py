"""Exact-arithmetic verification engine for extrinsic geometries of sl(3) type."""

__version__ = "0.1.0"
