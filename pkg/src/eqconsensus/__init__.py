"""Equal-neighbour consensus on time-varying undirected graphs."""

__version__ = "0.1.0"
