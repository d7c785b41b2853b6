"""Formulas, definitions, reducts, equivalence, and functor tables."""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from localexpr.catalog import (code_lo2ec_to_loor, code_loor_to_lo2ec,
                               complement_definition, mirror_order_definition,
                               symmetric_closure_definition,
                               two_graph_definition)
from localexpr.errors import InputError
from localexpr.figures import SIG_LOR
from localexpr.logic import (FALSE, TRUE, And, Atom, Bottom, Eq, FunctorTable,
                             Not, Or, QfDefinition, UniversalSentence,
                             all_different, apply_definition, bottom_of_arity,
                             characteristic_formula, compose, conj, disj,
                             evaluate, format_formula, formula_arity,
                             identity_definition, is_satisfiable,
                             logically_equivalent, reduct,
                             synthesize_definition, validate_formula,
                             weak_extension)
from localexpr.structures import (DIGRAPH_SIGNATURE, GRAPH_SIGNATURE,
                                  Signature, Structure, complete_graph,
                                  cycle_graph, digraph,
                                  enumerate_embeddings, enumerate_structures,
                                  graph, is_embedding, path_graph)


def formulas(signature=GRAPH_SIGNATURE, arity=2):
    """Random formulas over a signature with variables x1..x_arity."""
    var = st.integers(1, arity)
    atoms = st.one_of(
        st.just(TRUE), st.just(FALSE),
        st.builds(Eq, var, var),
        *[st.builds(Atom, st.just(name),
                    st.tuples(*[var] * signature.arity(name)))
          for name in signature.names])
    return st.recursive(
        atoms,
        lambda sub: st.one_of(
            st.builds(Not, sub),
            st.builds(lambda a, b: And((a, b)), sub, sub),
            st.builds(lambda a, b: Or((a, b)), sub, sub)),
        max_leaves=8)


class TestEvaluation:
    def test_atom_and_equality(self):
        G = path_graph(3)
        assert evaluate(Atom("E", (1, 2)), G, (0, 1))
        assert not evaluate(Atom("E", (1, 2)), G, (0, 2))
        assert evaluate(Eq(1, 2), G, (2, 2))

    def test_connectives(self):
        G = path_graph(3)
        phi = And((Atom("E", (1, 2)), Not(Atom("E", (1, 3)))))
        assert evaluate(phi, G, (0, 1, 2))
        assert not evaluate(phi, G, (1, 0, 2))

    def test_empty_conjunction_and_disjunction(self):
        G = path_graph(2)
        assert evaluate(And(()), G, ())
        assert not evaluate(Or(()), G, ())

    def test_out_of_range_assignment_rejected(self):
        with pytest.raises(InputError):
            evaluate(TRUE, path_graph(2), (5,))

    def test_formula_arity(self):
        assert formula_arity(TRUE) == 0
        assert formula_arity(Not(Atom("E", (1, 3)))) == 3
        assert formula_arity(And((Eq(1, 2), Atom("E", (2, 4))))) == 4

    def test_validate_rejects_unknown_symbol_and_range(self):
        with pytest.raises(InputError):
            validate_formula(Atom("F", (1, 2)), GRAPH_SIGNATURE, 2)
        with pytest.raises(InputError):
            validate_formula(Atom("E", (1, 3)), GRAPH_SIGNATURE, 2)

    def test_helpers(self):
        sig = GRAPH_SIGNATURE
        assert not is_satisfiable(bottom_of_arity(2), sig)
        assert conj(()) == TRUE and disj(()) == FALSE
        # all_different is satisfied exactly by injective assignments
        G = complete_graph(3)
        assert evaluate(all_different(3), G, (0, 1, 2))
        assert not evaluate(all_different(3), G, (0, 1, 1))


class TestCharacteristicFormula:
    def test_satisfaction_is_embedding(self):
        A = path_graph(3)
        chi = characteristic_formula(A, (0, 1, 2))
        B = cycle_graph(5)
        for m in itertools.permutations(range(B.n), A.n):
            assert evaluate(chi, B, m) == is_embedding(A, B, m)

    def test_spanning_tuple_required(self):
        with pytest.raises(InputError):
            characteristic_formula(path_graph(3), (0, 1))

    def test_repeated_entries_force_equalities(self):
        A = graph(1, [])
        chi = characteristic_formula(A, (0, 0))
        G = path_graph(2)
        assert evaluate(chi, G, (1, 1))
        assert not evaluate(chi, G, (0, 1))


class TestEquivalence:
    def test_de_morgan(self):
        a, b = Atom("E", (1, 2)), Atom("E", (2, 1))
        assert logically_equivalent(Not(And((a, b))),
                                    Or((Not(a), Not(b))), GRAPH_SIGNATURE)

    def test_distinguishes_direction(self):
        assert not logically_equivalent(Atom("E", (1, 2)), Atom("E", (2, 1)),
                                        DIGRAPH_SIGNATURE)

    def test_zero_arity(self):
        assert logically_equivalent(TRUE, Not(FALSE), GRAPH_SIGNATURE)

    @given(formulas(), formulas())
    def test_equivalence_refutations_have_witnesses(self, phi, psi):
        # whenever equivalence fails there is a structure and assignment
        # telling the two formulas apart; re-search confirms it
        if logically_equivalent(phi, psi, GRAPH_SIGNATURE, arity=2):
            return
        found = False
        for n in (1, 2):
            for A in enumerate_structures(GRAPH_SIGNATURE, n):
                for a in itertools.product(range(n), repeat=2):
                    if evaluate(phi, A, a) != evaluate(psi, A, a):
                        found = True
        assert found


class TestFormatFormula:
    def test_precedence(self):
        phi = Or((And((Atom("E", (1, 2)), Not(Eq(1, 2)))), FALSE))
        assert format_formula(phi) == "E(x1, x2) & !(x1 = x2) | false"

    def test_nested_or_under_and_is_parenthesized(self):
        phi = And((Or((Atom("E", (1, 2)), Atom("E", (2, 1)))), TRUE))
        assert format_formula(phi) == "(E(x1, x2) | E(x2, x1)) & true"

    @given(formulas())
    def test_round_trip_through_parser(self, phi):
        from localexpr.dsl import parse_fexpr
        text = format_formula(phi)
        parsed, _ = parse_fexpr(text, GRAPH_SIGNATURE, arity=2)
        assert logically_equivalent(parsed, phi, GRAPH_SIGNATURE, arity=2)


class TestReducts:
    def test_symmetric_closure(self):
        D = symmetric_closure_definition()
        A = digraph(3, [(0, 1), (2, 1)])
        assert reduct(D, A) == graph(3, [(0, 1), (1, 2)])

    def test_identity_definition(self):
        G = path_graph(4)
        assert reduct(identity_definition(GRAPH_SIGNATURE), G) == G

    def test_signature_mismatch_rejected(self):
        D = code_loor_to_lo2ec()
        with pytest.raises(InputError):
            reduct(D, path_graph(2))

    def test_two_graph_definition_counts_odd_triples(self):
        D = two_graph_definition()
        # one edge on three vertices: the triple spans an odd edge count
        H = reduct(D, graph(3, [(0, 1)]))
        assert {frozenset(t) for t in H.tuples("H")} == {frozenset({0, 1, 2})}
        # a path spans two edges on its triple: even, so no tuple
        assert reduct(D, path_graph(3)).tuples("H") == ()
        # a triangle spans three
        assert len(reduct(D, complete_graph(3)).tuples("H")) == 6

    @given(st.data())
    def test_translation_identity_for_symmetric_closure(self, data):
        # A |= D(phi)(a)  <=>  reduct(D, A) |= phi(a)
        D = symmetric_closure_definition()
        phi = data.draw(formulas(GRAPH_SIGNATURE, 2))
        n = data.draw(st.integers(1, 3))
        arcs = data.draw(st.sets(st.tuples(st.integers(0, n - 1),
                                           st.integers(0, n - 1))))
        A = digraph(n, [a for a in arcs if a[0] != a[1]])
        translated = apply_definition(D, phi)
        sh = reduct(D, A)
        for a in itertools.product(range(n), repeat=2):
            assert evaluate(translated, A, a) == evaluate(phi, sh, a)

    def test_compose_matches_sequential_reducts(self):
        inner = code_loor_to_lo2ec()          # LOOR -> LO2EC
        outer = code_lo2ec_to_loor()          # LO2EC -> LOOR
        both = compose(outer, inner)
        from localexpr.catalog import loor_base
        from localexpr.classes import enumerate_members
        for n in (1, 2, 3):
            for X in enumerate_members(loor_base(), n):
                assert reduct(both, X) == reduct(outer, reduct(inner, X))

    def test_compose_signature_check(self):
        with pytest.raises(InputError):
            compose(symmetric_closure_definition(),
                    mirror_order_definition(SIG_LOR))


class TestFunctorTables:
    def make_closure_table(self, max_n=2):
        D = symmetric_closure_definition()
        return FunctorTable.from_function(
            DIGRAPH_SIGNATURE, GRAPH_SIGNATURE, max_n,
            lambda A: reduct(D, A))

    def test_embedding_consistency_accepts_closure(self):
        self.make_closure_table().check_embedding_consistency()

    def test_embedding_consistency_rejects_arbitrary_map(self):
        # the same domain structure listed twice with different images:
        # the identity embedding between the two copies cannot be an
        # embedding between an edge and a non-edge
        sig = DIGRAPH_SIGNATURE
        entries = (
            (digraph(2, [(0, 1)]), graph(2, [(0, 1)])),
            (digraph(2, [(0, 1)]), graph(2, [])),
        )
        table = FunctorTable(sig, GRAPH_SIGNATURE, entries)
        with pytest.raises(InputError):
            table.check_embedding_consistency()

    def test_image_of_relabels_through_an_isomorphism(self):
        table = self.make_closure_table()
        A = digraph(2, [(1, 0)])
        img = table.image_of(A)
        assert img == graph(2, [(0, 1)])

    def test_synthesized_definition_reproduces_table(self):
        table = self.make_closure_table()
        D = synthesize_definition(table)
        for dom, img in table.entries:
            assert reduct(D, dom) == img

    def test_weak_extension_agrees_beyond_the_table(self):
        table = self.make_closure_table()
        D = symmetric_closure_definition()
        for n in (3, 4):
            for arcs in [[(0, 1), (1, 2)], [(0, 1), (1, 0), (2, 1)], []]:
                A = digraph(n, arcs)
                assert weak_extension(table, A) == reduct(D, A)

    def test_weak_extension_requires_hereditary_domain(self):
        sig = DIGRAPH_SIGNATURE
        entries = ((digraph(2, [(0, 1)]), graph(2, [(0, 1)])),)
        table = FunctorTable(sig, GRAPH_SIGNATURE, entries)
        with pytest.raises(InputError):
            weak_extension(table, digraph(3, [(0, 1)]))

    def test_vertex_set_preserved_in_entries(self):
        with pytest.raises(InputError):
            FunctorTable(DIGRAPH_SIGNATURE, GRAPH_SIGNATURE,
                         ((digraph(2, []), graph(3, [])),))


class TestComplementAndMirror:
    def test_complement_is_involutive_as_formula(self):
        CO = complement_definition(GRAPH_SIGNATURE)
        twice = compose(CO, CO)
        ident = identity_definition(GRAPH_SIGNATURE)
        assert logically_equivalent(twice.formula("E"), ident.formula("E"),
                                    GRAPH_SIGNATURE)

    def test_mirror_reverses_order_only(self):
        M = mirror_order_definition(SIG_LOR)
        X = Structure.make(SIG_LOR, 2, {"E": [(0, 1), (1, 0)],
                                        "L": [(0, 1)]})
        Y = reduct(M, X)
        assert Y.tuples("L") == ((1, 0),)
        assert Y.tuples("E") == X.tuples("E")
