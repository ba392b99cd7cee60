"""Fuchsian groups R(N): exact group and form computations, hyperbolic
fundamental domains, and non-holomorphic Eisenstein series."""

__version__ = "0.1.0"
