"""Hyperasymptotics of the scaled gamma function and its Stokes smoothing."""
__version__ = "0.1.0"
