"""Symmetric bidirectional evolution under two Hamiltonians.

Thin package wrapper around the compiled extension: interference closed
forms, path-sum evolution, the kaon commutator estimate, ensemble regime
analysis, and the randomized self-check suites.
"""

from ._bievolve import interference, kaon, linops, pathsum, spectral, verify

__all__ = ["interference", "kaon", "linops", "pathsum", "spectral", "verify"]
__version__ = "0.1.0"
