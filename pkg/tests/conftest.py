"""Shared fixtures and enumeration helpers for the test suite."""

from functools import lru_cache

import networkx as nx
import pytest

from localexpr.catalog import _all_graphs
from localexpr.structures import Structure, graph


def from_networkx(g: nx.Graph) -> Structure:
    """Relabel an arbitrary networkx graph onto vertices 0..n-1."""
    index = {v: i for i, v in enumerate(sorted(g.nodes, key=repr))}
    return graph(len(index), [(index[u], index[v]) for u, v in g.edges])


@lru_cache(maxsize=None)
def graphs_exactly(n: int) -> tuple[Structure, ...]:
    """All simple graphs on exactly n vertices, one per isomorphism class.

    Sizes up to 5 are enumerated directly; 6 and 7 come from the
    networkx atlas, which is much faster than canonicalizing 2**15 or
    2**21 edge masks.
    """
    if n <= 5:
        return tuple(_all_graphs(n))
    if n > 7:
        raise ValueError("the graph atlas stops at 7 vertices")
    return tuple(from_networkx(g)
                 for g in nx.graph_atlas_g()
                 if g.number_of_nodes() == n)


def graphs_up_to(n: int):
    """All simple graphs on 1..n vertices, one per isomorphism class."""
    for k in range(1, n + 1):
        yield from graphs_exactly(k)


@pytest.fixture(scope="session")
def small_graphs():
    """Graphs on 1..4 vertices (18 isomorphism classes)."""
    return list(graphs_up_to(4))
