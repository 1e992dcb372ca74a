"""Restricted Stirling and Lah numbers, their matrix inverses, and the
forest counts and parity involution that explain the inverse entries."""

__version__ = "0.1.0"
