"""
Coalescing-flow toolkit: simulation of the Arratia flow, point-measure
calculus, analytic kernels and Gaussian limits.
"""

__version__ = "0.1.0"
