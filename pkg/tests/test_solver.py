"""Search behaviour: order pinning, budgets, determinism, counting."""

import pytest

from localexpr.catalog import builtin
from localexpr.errors import SearchBudgetExceeded
from localexpr.expressions import verify
from localexpr.solver import compile as compile_problem
from localexpr.solver import count_solutions, solve, solve_with_stats
from localexpr.structures import complete_graph, cycle_graph, graph, path_graph

CHORDAL = builtin("chordal_peo").expression
COMPLETE = builtin("complete_lor").expression


class TestVariableOrder:
    def test_variables_are_vertex_major(self):
        # within one vertex the relation tuples come in symbol order and
        # lexicographically; vertices are visited in input index order
        p = compile_problem(COMPLETE, path_graph(2))
        first = p.variables[0]
        assert first[1][0] == 0  # a tuple anchored at vertex 0 comes first
        anchors = [max(t) for _, t in p.variables]
        assert anchors == sorted(anchors)

    def test_first_certificate_is_lexicographically_least(self):
        # the returned expansion minimizes the assignment vector in the
        # pinned variable order with false before true
        from oracle import expansions
        for G in (complete_graph(3), path_graph(3), cycle_graph(5)):
            for e in (COMPLETE, CHORDAL):
                p = compile_problem(e, G)

                def key(X):
                    return tuple(int(X.has(sym, t)) for sym, t in p.variables)

                all_keys = sorted(key(X) for X in expansions(e, G))
                cert = solve(compile_problem(e, G))
                if not all_keys:
                    assert cert is None
                else:
                    assert cert is not None and key(cert) == all_keys[0]


class TestBudgets:
    def test_node_budget_raises(self):
        with pytest.raises(SearchBudgetExceeded):
            solve(compile_problem(CHORDAL, cycle_graph(6)), max_nodes=1)

    def test_budget_error_carries_stats(self):
        try:
            solve(compile_problem(CHORDAL, cycle_graph(6)), max_nodes=1)
        except SearchBudgetExceeded as exc:
            assert exc.stats is not None and exc.stats.nodes >= 1
        else:
            pytest.fail("expected the budget to trip")

    def test_time_budget_raises(self):
        # the deadline is polled every 1024 nodes, so the instance must
        # cost more than that; C9 needs just under 2000
        with pytest.raises(SearchBudgetExceeded):
            solve(compile_problem(CHORDAL, cycle_graph(9)),
                  max_seconds=0.0)

    def test_budget_never_reports_non_membership(self):
        # C4 is not chordal, but with a tiny budget the answer must be an
        # exception, not None
        with pytest.raises(SearchBudgetExceeded):
            solve(compile_problem(CHORDAL, cycle_graph(4)), max_nodes=1)


class TestDeterminism:
    def test_repeated_runs_identical(self, small_graphs):
        for G in small_graphs:
            runs = [solve_with_stats(compile_problem(CHORDAL, G))
                    for _ in range(4)]
            certs = {(r[0].relations if r[0] is not None else None)
                     for r in runs}
            assert len(certs) == 1
            assert len({r[1].nodes for r in runs}) == 1

    def test_threads_do_not_change_output(self, small_graphs):
        for G in small_graphs:
            seq, seq_stats = solve_with_stats(compile_problem(CHORDAL, G),
                                              threads=1)
            par, par_stats = solve_with_stats(compile_problem(CHORDAL, G),
                                              threads=4)
            assert seq == par
            assert seq_stats.nodes == par_stats.nodes


class TestStatsAndCounting:
    def test_failure_kinds_are_attributed(self):
        _, stats = solve_with_stats(compile_problem(CHORDAL, cycle_graph(4)))
        assert stats.nodes > 0
        assert sum(stats.failures.values()) > 0
        assert set(stats.failures) <= {"reduct", "axiom", "forbidden"}

    def test_count_matches_known_value(self):
        # orders of K3 are its 3! linear orders, all avoiding the patterns
        assert count_solutions(compile_problem(COMPLETE, complete_graph(3)),
                               cap=100) == 6

    def test_count_respects_cap(self):
        assert count_solutions(compile_problem(COMPLETE, complete_graph(3)),
                               cap=2) == 2

    def test_solutions_verify(self, small_graphs):
        for G in small_graphs:
            sol = solve(compile_problem(CHORDAL, G))
            if sol is not None:
                from localexpr.expressions import Certificate
                assert verify(CHORDAL, G, Certificate(sol))
