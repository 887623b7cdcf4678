"""Renormalization of infinite interval exchange transformations built
from bipartite ribbon graphs and positive adjacency eigenfunctions."""

__version__ = '0.1.0'
