"""Workspace root of the madvec project.

Modules:
    madvec: Exact subspace algebra, witnesses, games and forcing conditions
"""

__version__ = "0.1.0"
