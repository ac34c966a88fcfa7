"""Exact quantum cohomology of Grassmannians and Artinian complete intersections."""
__version__ = "0.1.0"
