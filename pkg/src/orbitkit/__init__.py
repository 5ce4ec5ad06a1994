"""Orbit-method representation theory for Z-graded *-algebras."""

__version__ = "0.1.0"
