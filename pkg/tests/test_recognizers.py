"""Reference recognizers, cross-checked against networkx where it has an
independent implementation."""

import networkx as nx
import pytest

from conftest import graphs_up_to
from localexpr.errors import InputError, ResourceLimitError
from localexpr.recognizers import (complement, is_bipartite, is_chordal,
                                   is_cobipartite, is_comparability,
                                   is_complete, is_k_colourable, is_split,
                                   is_trivially_perfect,
                                   is_tucker_circular_arc,
                                   reference_recognizer)
from localexpr.structures import (Structure, complete_graph, cycle_graph,
                                  empty_graph, graph, graph_edges,
                                  path_graph)


def to_networkx(G):
    g = nx.Graph()
    g.add_nodes_from(range(G.n))
    g.add_edges_from(tuple(e) for e in graph_edges(G))
    return g


class TestAgainstNetworkx:
    def test_chordal_matches(self):
        for G in graphs_up_to(6):
            if G.n < 3:
                continue  # networkx refuses tiny graphs here
            assert is_chordal(G) == nx.is_chordal(to_networkx(G))

    def test_bipartite_matches(self):
        for G in graphs_up_to(6):
            assert is_bipartite(G) == nx.is_bipartite(to_networkx(G))

    def test_two_colourable_is_bipartite(self):
        # the backtracking colourer against the independent BFS check
        for G in graphs_up_to(5):
            assert is_k_colourable(G, 2) == is_bipartite(G)

    def test_colourability_is_monotone_in_k(self):
        for G in graphs_up_to(5):
            ok = [is_k_colourable(G, k) for k in (1, 2, 3, 4, 5)]
            assert ok == sorted(ok)
            assert ok[G.n - 1] if G.n <= 5 else True
            assert ok[0] == (len(graph_edges(G)) == 0)


class TestSpotChecks:
    def test_complete(self):
        assert is_complete(complete_graph(4))
        assert not is_complete(path_graph(3))

    def test_split_examples(self):
        assert is_split(complete_graph(4))
        assert is_split(empty_graph(3))
        assert is_split(graph(4, [(0, 1), (0, 2), (0, 3)]))  # star
        assert not is_split(cycle_graph(4))
        assert not is_split(cycle_graph(5))
        assert not is_split(graph(4, [(0, 1), (2, 3)]))  # 2K2

    def test_trivially_perfect_examples(self):
        assert is_trivially_perfect(complete_graph(4))
        assert not is_trivially_perfect(path_graph(4))
        assert not is_trivially_perfect(cycle_graph(4))

    def test_comparability_examples(self):
        assert is_comparability(cycle_graph(4))   # C4 is K2,2
        assert not is_comparability(cycle_graph(5))
        assert is_comparability(path_graph(4))

    def test_cobipartite(self):
        assert is_cobipartite(complete_graph(4))
        assert not is_cobipartite(empty_graph(3))

    def test_tucker_circular_arc_examples(self):
        assert is_tucker_circular_arc(cycle_graph(6))
        assert is_tucker_circular_arc(complete_graph(5))
        # K2,3 is the classic small non-circular-arc graph
        assert not is_tucker_circular_arc(
            graph(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]))

    def test_complement_involution(self):
        for G in graphs_up_to(4):
            assert complement(complement(G)) == G


class TestInputChecking:
    def test_rejects_non_graph_signature(self):
        from localexpr.figures import SIG_LOR
        X = Structure.make(SIG_LOR, 1)
        with pytest.raises(InputError):
            is_bipartite(X)

    def test_rejects_asymmetric_relation(self):
        X = Structure.make(path_graph(2).signature, 2, {"E": [(0, 1)]})
        with pytest.raises(InputError):
            is_complete(X)

    def test_brute_force_guard(self):
        with pytest.raises(ResourceLimitError):
            is_chordal(empty_graph(9))

    def test_reference_recognizer_lookup(self):
        assert reference_recognizer("complete", complete_graph(3))
        with pytest.raises(InputError):
            reference_recognizer("no_such", complete_graph(3))
