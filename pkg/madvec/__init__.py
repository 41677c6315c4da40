"""
madvec: exact linear algebra for almost disjoint families of vector subspaces.

Subspaces of the countable-dimensional space E over GF(p) or Q are presented
lazily by their reduced echelon bases. On top of that the package provides the
extension bounds, non-maximality and diagonalization witnesses, the FIN
support bridge, the Gowers and asymptotic game engines and finite forcing
conditions, each returning data that can be re-verified.

The CLI can be invoked with either 'python -m madvec' or 'madvec'.
"""

__version__ = "0.1.0"
