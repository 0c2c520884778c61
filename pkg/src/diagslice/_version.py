"""Single source of the package version for runtime report stamping."""

__version__ = "0.1.0"
