"""
Main entry point for the madvec package when executed as a module.

This module allows running the madvec package with 'python -m madvec'.
"""

from madvec.cli import main

if __name__ == "__main__":
    main()
