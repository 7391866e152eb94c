"""Extremal bipartite graph constructions and supersaturation bounds."""

__version__ = "0.1.0"
