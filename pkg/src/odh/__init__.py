"""Exact order-degree-height bounds and constructive searches for linear
Ore operators (shift and differential), with a CLI for predicted-versus-actual
grid reports.

Modules
-------
poly
    Sparse exact polynomials in x, y, k and canonical rational functions.
ore
    Ore operators over rational-function coefficients: multiplication,
    right division, least common left multiples.
linalg
    Exact nullspaces of large integer/rational matrices with certified
    modular shortcuts.
surfaces
    Closed-form region evaluators for the four bound families, minimal
    admissible heights, and grid sweeps.
clm
    Common-left-multiple ansatz searches realizing the bounds constructively.
hyperterm
    Telescoper searches for proper hypergeometric-style terms, including the
    reduced rational case.
contraction
    Shape searches inside contraction ideals described by witness operators.
cli
    ``odh`` command-line entry point.
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
