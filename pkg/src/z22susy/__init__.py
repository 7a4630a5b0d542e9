"""Exact symbolic engine for Z2xZ2-graded superspace calculus."""

__version__ = "0.1.0"
