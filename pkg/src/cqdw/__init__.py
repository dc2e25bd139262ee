"""Double-well states of a cubic-quintic nonlocal Schrodinger equation."""

__version__ = "0.1.0"
