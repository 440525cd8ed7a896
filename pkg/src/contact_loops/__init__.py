"""Loops of contact structures and their action on contact homology."""

__all__ = []
