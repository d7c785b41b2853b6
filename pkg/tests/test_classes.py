"""Hereditary classes: membership, enumeration, bound mining, algebra."""

import pytest

from localexpr.catalog import (di_base, lor_base, or_base,
                               symmetric_closure_definition)
from localexpr.classes import (LocalClass, enumerate_members, everything,
                               intersect, is_local_up_to,
                               minimal_bounds_relative, preimage_bounds,
                               union_classes)
from localexpr.errors import InputError, LogicInvariantError
from localexpr.figures import or_pattern
from localexpr.logic import Atom, Not, UniversalSentence
from localexpr.recognizers import is_complete
from localexpr.structures import (DIGRAPH_SIGNATURE, GRAPH_SIGNATURE,
                                  canonical_key, complete_graph, cycle_graph,
                                  empty_graph, graph, path_graph)

from localexpr.logic import Or

# loopless symmetric binary structures, i.e. genuine simple graphs
SIMPLE_GRAPHS = LocalClass(GRAPH_SIGNATURE, axioms=(
    UniversalSentence(Not(Atom("E", (1, 1))), 1),
    UniversalSentence(Or((Not(Atom("E", (1, 2))), Atom("E", (2, 1)))), 2),
))

# graphs with no two independent vertices
TWO_K1 = graph(2, [])
COMPLETE_BOUNDS = LocalClass(GRAPH_SIGNATURE, bounds=(TWO_K1,))
COMPLETE_SIMPLE = intersect(SIMPLE_GRAPHS, COMPLETE_BOUNDS)


class TestPresentations:
    def test_needs_bounds_or_axioms(self):
        with pytest.raises(InputError):
            LocalClass(GRAPH_SIGNATURE)

    def test_empty_bounds_is_everything(self):
        C = everything(GRAPH_SIGNATURE)
        assert C.contains(path_graph(4))
        assert C.window == 0

    def test_bound_membership(self):
        assert COMPLETE_BOUNDS.contains(complete_graph(4))
        assert not COMPLETE_BOUNDS.contains(path_graph(3))

    def test_agreeing_presentations_accepted(self):
        # loopless graphs: one bound, one axiom, same class
        loop = graph(1, [])  # placeholder; loops need raw construction
        from localexpr.structures import Structure
        loop = Structure.make(GRAPH_SIGNATURE, 1, {"E": [(0, 0)]})
        C = LocalClass(GRAPH_SIGNATURE, bounds=(loop,),
                       axioms=(UniversalSentence(Not(Atom("E", (1, 1))), 1),))
        assert C.contains(path_graph(2))

    def test_disagreeing_presentations_rejected(self):
        with pytest.raises(LogicInvariantError):
            LocalClass(GRAPH_SIGNATURE, bounds=(TWO_K1,),
                       axioms=(UniversalSentence(Not(Atom("E", (1, 1))), 1),))

    def test_zero_vertex_bound_rejected(self):
        with pytest.raises(InputError):
            LocalClass(GRAPH_SIGNATURE, bounds=(empty_graph(0),))

    def test_window(self):
        assert COMPLETE_BOUNDS.window == 2
        assert lor_base().window == 3

    def test_all_axioms_of_a_bound_presentation(self):
        axs = COMPLETE_BOUNDS.all_axioms()
        assert len(axs) == 1 and axs[0].arity == 2
        assert not axs[0].holds(path_graph(3))
        assert axs[0].holds(complete_graph(3))


class TestEnumeration:
    def test_complete_graphs_one_per_size(self):
        for n in (1, 2, 3, 4, 5):
            members = enumerate_members(COMPLETE_SIMPLE, n)
            assert len(members) == 1
            assert canonical_key(members[0]) == canonical_key(complete_graph(n))

    def test_orientation_counts(self):
        # oriented graphs on n vertices up to iso: 1, 2, 7
        counts = [len(enumerate_members(or_base(), n)) for n in (1, 2, 3)]
        assert counts == [1, 2, 7]

    def test_members_satisfy_the_class(self):
        for X in enumerate_members(lor_base(), 3):
            assert lor_base().contains(X)


class TestBoundMining:
    def test_complete_graphs_mine_to_two_k1(self):
        bounds = minimal_bounds_relative(is_complete, SIMPLE_GRAPHS, 4)
        assert len(bounds) == 1
        assert canonical_key(bounds[0]) == canonical_key(TWO_K1)

    def test_non_hereditary_predicate_rejected(self):
        # connectivity is not closed under vertex deletion
        from localexpr.recognizers import _adj

        def connected(G):
            if G.n <= 1:
                return True
            seen, stack = {0}, [0]
            adj = _adj(G)
            while stack:
                for w in adj[stack.pop()]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            return len(seen) == G.n

        with pytest.raises(LogicInvariantError):
            minimal_bounds_relative(connected, SIMPLE_GRAPHS, 4)

    def test_mining_inside_a_smaller_ambient(self):
        # within orientations, transitivity has one minimal obstruction:
        # the directed two-arc path without its closing arc
        def transitive(X):
            A = set(X.tuples("A"))
            return all((a, c) in A for a, b in A for b2, c in A
                       if b == b2 and a != c)

        bounds = minimal_bounds_relative(transitive, or_base(), 3)
        expected = {canonical_key(or_pattern(3, [(0, 1), (1, 2)])),
                    canonical_key(or_pattern(3, [(0, 1), (1, 2), (2, 0)]))}
        assert {canonical_key(b) for b in bounds} == expected


class TestAlgebra:
    def test_intersect_merges_bounds(self):
        triangle_free = LocalClass(GRAPH_SIGNATURE,
                                   bounds=(complete_graph(3),))
        C = intersect(COMPLETE_BOUNDS, triangle_free)
        assert C.contains(complete_graph(2))
        assert not C.contains(complete_graph(3))
        assert not C.contains(path_graph(3))

    def test_intersect_drops_redundant_bounds(self):
        p3_free = LocalClass(GRAPH_SIGNATURE, bounds=(path_graph(3),))
        p4_free = LocalClass(GRAPH_SIGNATURE, bounds=(path_graph(4),))
        C = intersect(p3_free, p4_free)
        assert len(C.bounds) == 1
        assert canonical_key(C.bounds[0]) == canonical_key(path_graph(3))

    def test_union_requires_window_sum(self):
        p3_free = LocalClass(GRAPH_SIGNATURE, bounds=(path_graph(3),))
        with pytest.raises(InputError):
            union_classes(COMPLETE_BOUNDS, p3_free, max_n=3)

    def test_union_membership(self):
        edgeless = LocalClass(GRAPH_SIGNATURE, bounds=(complete_graph(2),))
        C = union_classes(COMPLETE_BOUNDS, edgeless, max_n=4)
        for n in (1, 2, 3, 4):
            assert C.contains(complete_graph(n))
            assert C.contains(empty_graph(n))
        assert not C.contains(path_graph(3))

    def test_preimage_bounds_of_two_k1_under_symmetric_closure(self):
        D = symmetric_closure_definition()
        ambient = LocalClass(
            DIGRAPH_SIGNATURE,
            axioms=(UniversalSentence(Not(Atom("E", (1, 1))), 1),))
        bounds = preimage_bounds(D, (TWO_K1,), ambient, 3)
        # the only loopless digraphs whose closure is 2K1 are 2 isolated
        # vertices
        assert len(bounds) == 1 and bounds[0].n == 2
        assert bounds[0].tuples("E") == ()


class TestLocality:
    def test_complete_is_local_at_window_two(self):
        assert is_local_up_to(is_complete, SIMPLE_GRAPHS, N=2, max_n=4)

    def test_chordality_is_not_three_local(self):
        from localexpr.recognizers import is_chordal
        # C4 is not chordal but every proper substructure is
        assert not is_local_up_to(is_chordal, SIMPLE_GRAPHS, N=3, max_n=4)

    def test_max_n_must_exceed_window(self):
        with pytest.raises(InputError):
            is_local_up_to(is_complete, SIMPLE_GRAPHS, N=4, max_n=4)
