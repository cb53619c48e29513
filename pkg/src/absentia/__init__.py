"""absentia - certification toolkit for 2D magnetic Schrödinger operators.

Evaluates sufficient conditions for the absence of eigenvalues of
H = (-i∇ + A)² + V as computable variational constants, cross-checks them
against direct spectral computation on truncated domains, and validates the
underlying Hardy inequalities and multiplier identities numerically.
"""

__version__ = "0.1.0"
