"""Built-in carrier bases, catalog expressions, and ready-made
definitions.

Each catalog entry packages a local expression with a short note on what
it recognizes and, where an independent algorithm exists, the name of a
reference recognizer from the recognizers module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

from . import figures
from .classes import LocalClass
from .errors import InputError, ResourceLimitError
from .expressions import LocalExpression, subgraph_closure
from .figures import (SIG_COOR, SIG_DI, SIG_EG2, SIG_EQ, SIG_LO2EC, SIG_LOOR,
                      SIG_LOR, SIG_OR, SIG_T2)
from .logic import (And, Atom, Eq, Formula, Not, Or, QfDefinition, TRUE,
                    UniversalSentence, all_different, conj, disj)
from .structures import (GRAPH_SIGNATURE, Signature, Structure,
                         canonical_form, canonical_key, complete_graph,
                         embeds, graph, graph_edges)


def _implies(p: Formula, q: Formula) -> Formula:
    return Or((Not(p), q))


def _graphness(symbol: str) -> list[UniversalSentence]:
    return [
        UniversalSentence(Not(Atom(symbol, (1, 1))), 1),
        UniversalSentence(_implies(Atom(symbol, (1, 2)), Atom(symbol, (2, 1))), 2),
    ]


def _orientation_axioms(symbol: str) -> list[UniversalSentence]:
    return [
        UniversalSentence(Not(Atom(symbol, (1, 1))), 1),
        UniversalSentence(Not(And((Atom(symbol, (1, 2)), Atom(symbol, (2, 1))))), 2),
    ]


def _strict_partial_order(symbol: str) -> list[UniversalSentence]:
    return [
        UniversalSentence(Not(Atom(symbol, (1, 1))), 1),
        UniversalSentence(Not(And((Atom(symbol, (1, 2)), Atom(symbol, (2, 1))))), 2),
        UniversalSentence(
            _implies(And((Atom(symbol, (1, 2)), Atom(symbol, (2, 3)))),
                     Atom(symbol, (1, 3))), 3),
    ]


def _totality(symbol: str) -> UniversalSentence:
    return UniversalSentence(
        Or((Eq(1, 2), Atom(symbol, (1, 2)), Atom(symbol, (2, 1)))), 2)


# ---------------------------------------------------------------------------
# Carrier bases


@lru_cache(maxsize=None)
def or_base() -> LocalClass:
    """Orientations: loopless, no symmetric arc pair."""
    return LocalClass(
        SIG_OR,
        bounds=(figures.or_pattern(1, [(0, 0)]),
                figures.or_pattern(2, [(0, 1), (1, 0)])),
        axioms=tuple(_orientation_axioms("A")),
        tag="or")


@lru_cache(maxsize=None)
def di_base() -> LocalClass:
    """Loopless digraphs; symmetric pairs allowed."""
    return LocalClass(SIG_DI,
                      axioms=(UniversalSentence(Not(Atom("A", (1, 1))), 1),),
                      tag="di")


@lru_cache(maxsize=None)
def ao_base(max_cycle: int = 6) -> LocalClass:
    """Orientations with no directed cycle up to the given length.

    Acyclicity has infinitely many minimal obstructions, so this base is
    a bounded approximation: exact for inputs with at most max_cycle
    vertices, and never rejecting a genuinely acyclic orientation.
    """
    if max_cycle < 3:
        raise InputError("max_cycle must be at least 3")
    cycles = tuple(
        figures.or_pattern(k, [(i, (i + 1) % k) for i in range(k)])
        for k in range(3, max_cycle + 1))
    return LocalClass(SIG_OR,
                      bounds=(figures.or_pattern(1, [(0, 0)]),
                              figures.or_pattern(2, [(0, 1), (1, 0)])) + cycles,
                      tag="or")


@lru_cache(maxsize=None)
def lor_base() -> LocalClass:
    """Graphs with a strict linear order."""
    axioms = _graphness("E") + _strict_partial_order("L") + [_totality("L")]
    return LocalClass(SIG_LOR, axioms=tuple(axioms), tag="linear")


@lru_cache(maxsize=None)
def loor_base() -> LocalClass:
    """Orientations with a strict linear order."""
    axioms = _orientation_axioms("A") + _strict_partial_order("L") + [_totality("L")]
    return LocalClass(SIG_LOOR, axioms=tuple(axioms), tag="linear")


@lru_cache(maxsize=None)
def lo2ec_base() -> LocalClass:
    """Two-edge-coloured graphs with a strict linear order."""
    axioms = _graphness("Eb") + _graphness("Er")
    axioms.append(UniversalSentence(
        Not(And((Atom("Eb", (1, 2)), Atom("Er", (1, 2))))), 2))
    axioms += _strict_partial_order("L") + [_totality("L")]
    return LocalClass(SIG_LO2EC, axioms=tuple(axioms), tag="linear")


@lru_cache(maxsize=None)
def po_base() -> LocalClass:
    """Graphs with a strict partial order."""
    axioms = _graphness("E") + _strict_partial_order("L")
    return LocalClass(SIG_LOR, axioms=tuple(axioms), tag="po")


@lru_cache(maxsize=None)
def so_base() -> LocalClass:
    """Graphs with a strict partial order comparing every adjacent pair."""
    axioms = _graphness("E") + _strict_partial_order("L")
    axioms.append(UniversalSentence(
        _implies(Atom("E", (1, 2)),
                 Or((Atom("L", (1, 2)), Atom("L", (2, 1))))), 2))
    return LocalClass(SIG_LOR, axioms=tuple(axioms), tag="so")


@lru_cache(maxsize=None)
def gen_base() -> LocalClass:
    """Suitably ordered graphs whose down-sets are chains."""
    axioms = list(so_base().axioms)
    axioms.append(UniversalSentence(
        _implies(And((Atom("L", (2, 1)), Atom("L", (3, 1)))),
                 Or((Eq(2, 3), Atom("L", (2, 3)), Atom("L", (3, 2))))), 3))
    return LocalClass(SIG_LOR, axioms=tuple(axioms), tag="gen")


@lru_cache(maxsize=None)
def eq_base() -> LocalClass:
    """Graphs with an equivalence relation on the vertices."""
    axioms = _graphness("E") + [
        UniversalSentence(Atom("Sim", (1, 1)), 1),
        UniversalSentence(_implies(Atom("Sim", (1, 2)), Atom("Sim", (2, 1))), 2),
        UniversalSentence(
            _implies(And((Atom("Sim", (1, 2)), Atom("Sim", (2, 3)))),
                     Atom("Sim", (1, 3))), 3),
    ]
    return LocalClass(SIG_EQ, axioms=tuple(axioms), tag="eq")


@lru_cache(maxsize=None)
def eg2_base() -> LocalClass:
    """Two-edge-coloured graphs: disjoint blue and red edge sets."""
    axioms = _graphness("Eb") + _graphness("Er")
    axioms.append(UniversalSentence(
        Not(And((Atom("Eb", (1, 2)), Atom("Er", (1, 2))))), 2))
    return LocalClass(SIG_EG2, axioms=tuple(axioms), tag="eg2")


@lru_cache(maxsize=None)
def t2_base() -> LocalClass:
    """Two-arc-coloured tournaments: every pair of distinct vertices
    carries exactly one arc, blue or red."""
    ab, ar = Atom("Ab", (1, 2)), Atom("Ar", (1, 2))
    ab_r, ar_r = Atom("Ab", (2, 1)), Atom("Ar", (2, 1))
    axioms = [
        UniversalSentence(Not(Atom("Ab", (1, 1))), 1),
        UniversalSentence(Not(Atom("Ar", (1, 1))), 1),
        UniversalSentence(_implies(Not(Eq(1, 2)),
                                   Or((ab, ab_r, ar, ar_r))), 2),
        UniversalSentence(Not(And((ab, ab_r))), 2),
        UniversalSentence(Not(And((ar, ar_r))), 2),
        UniversalSentence(Not(And((ab, ar))), 2),
        UniversalSentence(Not(And((ab, ar_r))), 2),
    ]
    return LocalClass(SIG_T2, axioms=tuple(axioms), tag="t2")


@lru_cache(maxsize=None)
def coor_base() -> LocalClass:
    """Orientations with a circular order on the vertices."""
    c = Atom("C", (1, 2, 3))
    axioms = _orientation_axioms("A") + [
        UniversalSentence(_implies(c, all_different(3)), 3),
        UniversalSentence(_implies(c, Atom("C", (2, 3, 1))), 3),
        UniversalSentence(Not(And((c, Atom("C", (1, 3, 2))))), 3),
        UniversalSentence(
            _implies(And((c, Atom("C", (1, 3, 4)))), Atom("C", (1, 2, 4))), 4),
        UniversalSentence(
            _implies(all_different(3), Or((c, Atom("C", (1, 3, 2))))), 3),
    ]
    return LocalClass(SIG_COOR, axioms=tuple(axioms), tag="circular")


def colours_signature(k: int) -> Signature:
    return Signature((("E", 2),) + tuple((f"P{i}", 1) for i in range(1, k + 1)))


@lru_cache(maxsize=None)
def colours_base(k: int) -> LocalClass:
    """Graphs whose vertices each carry exactly one of k colours."""
    if k < 1:
        raise InputError("k must be positive")
    sig = colours_signature(k)
    axioms = _graphness("E") + [
        UniversalSentence(disj(Atom(f"P{i}", (1,)) for i in range(1, k + 1)), 1),
    ]
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            axioms.append(UniversalSentence(
                Not(And((Atom(f"P{i}", (1,)), Atom(f"P{j}", (1,))))), 1))
    return LocalClass(sig, axioms=tuple(axioms), tag="colours")


# ---------------------------------------------------------------------------
# Ready-made definitions


def symmetric_closure_definition() -> QfDefinition:
    """E holds between two vertices joined by an arc either way."""
    return QfDefinition.make(GRAPH_SIGNATURE, Signature((("E", 2),)),
                             {"E": Or((Atom("E", (1, 2)), Atom("E", (2, 1))))})


def complement_definition(signature: Signature) -> QfDefinition:
    """Every relation is negated."""
    return QfDefinition.make(signature, signature, {
        name: Not(Atom(name, tuple(range(1, arity + 1))))
        for name, arity in signature.symbols})


def two_graph_definition() -> QfDefinition:
    """Triples of distinct vertices spanning an odd number of edges."""
    e12, e13, e23 = Atom("E", (1, 2)), Atom("E", (1, 3)), Atom("E", (2, 3))
    odd = Or((
        And((e12, Not(e13), Not(e23))),
        And((Not(e12), e13, Not(e23))),
        And((Not(e12), Not(e13), e23)),
        And((e12, e13, e23)),
    ))
    return QfDefinition.make(Signature((("H", 3),)), GRAPH_SIGNATURE,
                             {"H": And((all_different(3), odd))})


def code_loor_to_lo2ec() -> QfDefinition:
    """Reads a two-edge-colouring off an ordered orientation: arcs agreeing
    with the order become blue edges, arcs against it become red."""
    a, a_r = Atom("A", (1, 2)), Atom("A", (2, 1))
    l, l_r = Atom("L", (1, 2)), Atom("L", (2, 1))
    return QfDefinition.make(SIG_LO2EC, SIG_LOOR, {
        "Eb": Or((And((a, l)), And((a_r, l_r)))),
        "Er": Or((And((a, l_r)), And((a_r, l)))),
        "L": l,
    })


def code_lo2ec_to_loor() -> QfDefinition:
    """Inverse reading: blue edges orient forward, red edges backward."""
    eb, er = Atom("Eb", (1, 2)), Atom("Er", (1, 2))
    l, l_r = Atom("L", (1, 2)), Atom("L", (2, 1))
    return QfDefinition.make(SIG_LOOR, SIG_LO2EC, {
        "A": Or((And((eb, l)), And((er, l_r)))),
        "L": l,
    })


def mirror_order_definition(signature: Signature) -> QfDefinition:
    """Reverses the binary symbol L, fixing everything else."""
    formulas = {}
    for name, arity in signature.symbols:
        if name == "L":
            formulas[name] = Atom("L", (2, 1))
        else:
            formulas[name] = Atom(name, tuple(range(1, arity + 1)))
    return QfDefinition.make(signature, signature, formulas)


def arc_reversal_definition() -> QfDefinition:
    return QfDefinition.make(SIG_OR, SIG_OR, {"A": Atom("A", (2, 1))})


# ---------------------------------------------------------------------------
# Catalog entries


@dataclass(frozen=True)
class CatalogEntry:
    """A named expression, a one-line note, and an optional independent
    recognizer for cross-checks."""

    name: str
    expression: LocalExpression
    note: str
    recognizer: Optional[Callable[[Structure], bool]] = None
    recognizer_name: Optional[str] = None
    exact: bool = True


def _edge_formula(symbol: str) -> Formula:
    return Or((Atom(symbol, (1, 2)), Atom(symbol, (2, 1))))


def _graph_definition(carrier: Signature, formula: Formula) -> QfDefinition:
    return QfDefinition.make(GRAPH_SIGNATURE, carrier, {"E": formula})


def directed_path(k: int) -> Structure:
    return figures.or_pattern(k, [(i, i + 1) for i in range(k - 1)])


def _entry(name, carrier_base, definition, forbidden, note,
           recognizer=None, recognizer_name=None, exact=True) -> CatalogEntry:
    expr = LocalExpression(GRAPH_SIGNATURE, carrier_base.signature,
                           definition, carrier_base, tuple(forbidden),
                           name=name)
    return CatalogEntry(name, expr, note, recognizer, recognizer_name, exact)


def rghv(k: int) -> CatalogEntry:
    """Orientations with no directed path on k+1 vertices; members are
    exactly the k-colourable graphs."""
    if k < 1:
        raise InputError("k must be positive")
    from .recognizers import is_k_colourable
    forbidden = subgraph_closure(directed_path(k + 1), or_base())
    return _entry(
        f"rghv({k})", or_base(),
        _graph_definition(SIG_OR, _edge_formula("A")),
        forbidden,
        f"graphs orientable without a directed path on {k + 1} vertices "
        f"(equivalently, {k}-colourable graphs)",
        recognizer=lambda G: is_k_colourable(G, k),
        recognizer_name=f"{k}_colourable")


def pmixed(graph_bounds: Sequence[Structure] = ()) -> CatalogEntry:
    """Mixed orientations avoiding the core two-arc-path patterns and every
    mixed version of the given graph bounds."""
    from .recognizers import _check_graph
    forbidden = list(figures.PMIXED_CORE_PATTERNS)
    seen = {canonical_key(f) for f in forbidden}
    for B in graph_bounds:
        edges = sorted(tuple(sorted(e)) for e in _check_graph(B))
        for choice in itertools.product(range(3), repeat=len(edges)):
            arcs = []
            for c, (u, v) in zip(choice, edges):
                if c == 0:
                    arcs.append((u, v))
                elif c == 1:
                    arcs.append((v, u))
                else:
                    arcs += [(u, v), (v, u)]
            X = figures.di_pattern(B.n, arcs)
            key = canonical_key(X)
            if key not in seen:
                seen.add(key)
                forbidden.append(canonical_form(X))
    return _entry(
        "pmixed", di_base(),
        _graph_definition(SIG_DI, _edge_formula("A")),
        forbidden,
        "graphs with a mixed orientation avoiding the two-arc-path patterns "
        "and all mixed versions of the given bounds")


def comparability_height(k: int) -> CatalogEntry:
    if k < 1:
        raise InputError("k must be positive")
    chain = figures.lor_pattern(
        k + 1, tuple(range(k + 1)),
        [(i, j) for i in range(k + 1) for j in range(i + 1, k + 1)])
    return _entry(
        f"comparability_height({k})", so_base(),
        _graph_definition(SIG_LOR, Atom("E", (1, 2))),
        (figures.COMPARABLE_NONEDGE, chain),
        f"comparability graphs of posets of height at most {k}")


def _build_entries() -> dict[str, Callable[[], CatalogEntry]]:
    from .recognizers import (is_bipartite, is_chordal, is_cobipartite,
                              is_comparability, is_complete, is_k_colourable,
                              is_trivially_perfect, is_tucker_circular_arc)

    def chordal_peo():
        return _entry(
            "chordal_peo", lor_base(),
            _graph_definition(SIG_LOR, Atom("E", (1, 2))),
            figures.CHORDAL_PEO_PATTERNS,
            "graphs with a perfect elimination ordering (chordal graphs)",
            is_chordal, "chordal")

    def bipartite_or():
        e = rghv(2)
        return CatalogEntry(
            "bipartite_or", e.expression,
            "graphs orientable without a two-arc directed path "
            "(bipartite graphs)",
            is_bipartite, "bipartite")

    def cobipartite_or():
        phi = And((Not(_edge_formula("A")), Not(Eq(1, 2))))
        forbidden = subgraph_closure(directed_path(3), or_base())
        return _entry(
            "cobipartite_or", or_base(),
            _graph_definition(SIG_OR, phi),
            forbidden,
            "graphs whose complement is orientable without a two-arc "
            "directed path (co-bipartite graphs)",
            is_cobipartite, "cobipartite")

    def cobipartite_2ec():
        return _entry(
            "cobipartite_2ec", eg2_base(),
            _graph_definition(SIG_EG2, Or((Atom("Eb", (1, 2)),
                                           Atom("Er", (1, 2))))),
            figures.COBIPARTITE_2EC_PATTERNS,
            "graphs with a two-edge-colouring avoiding the six listed "
            "patterns (co-bipartite graphs)",
            is_cobipartite, "cobipartite")

    def threecol_loor():
        return _entry(
            "threecol_loor", loor_base(),
            _graph_definition(SIG_LOOR, _edge_formula("A")),
            figures.THREECOL_LOOR_PATTERNS,
            "graphs with an ordered orientation avoiding the nine listed "
            "patterns (3-colourable graphs)",
            lambda G: is_k_colourable(G, 3), "3_colourable")

    def threecol_lo2ec():
        return _entry(
            "threecol_lo2ec", lo2ec_base(),
            _graph_definition(SIG_LO2EC, Or((Atom("Eb", (1, 2)),
                                             Atom("Er", (1, 2))))),
            figures.THREECOL_LO2EC_PATTERNS,
            "graphs with an ordered two-edge-colouring avoiding the coded "
            "patterns (3-colourable graphs)",
            lambda G: is_k_colourable(G, 3), "3_colourable")

    def circulararc_coor():
        return _entry(
            "circulararc_coor", coor_base(),
            _graph_definition(SIG_COOR, _edge_formula("A")),
            figures.CIRCULARARC_COOR_PATTERNS,
            "graphs with a circularly ordered orientation avoiding the "
            "three listed patterns (circular-arc graphs)",
            is_tucker_circular_arc, "tucker_circular_arc")

    def pca_cobip_t2():
        return _entry(
            "pca_cobip_t2", t2_base(),
            _graph_definition(SIG_T2, Or((Atom("Ab", (1, 2)),
                                          Atom("Ab", (2, 1))))),
            figures.PCA_COBIP_T2_PATTERNS,
            "graphs whose blue part of an admissible two-arc-coloured "
            "tournament they are (proper-circular-arc co-bipartite graphs)")

    def pca_or():
        return _entry(
            "pca_or", or_base(),
            _graph_definition(SIG_OR, _edge_formula("A")),
            (figures.OUT_FORK, figures.IN_FORK),
            "graphs with an orientation whose in- and out-neighbourhoods "
            "are tournaments (proper-circular-arc graphs when connected)")

    def interval_lor():
        return _entry(
            "interval_lor", lor_base(),
            _graph_definition(SIG_LOR, Atom("E", (1, 2))),
            figures.INTERVAL_LOR_PATTERNS,
            "graphs with a linear order avoiding the two listed patterns "
            "(interval graphs)")

    def chordal_gen():
        lo_pat = figures.INTERVAL_LOR_PATTERNS
        return _entry(
            "chordal_gen", gen_base(),
            _graph_definition(SIG_LOR, Atom("E", (1, 2))),
            lo_pat,
            "graphs with a genealogical order avoiding the two listed "
            "patterns (chordal graphs)",
            is_chordal, "chordal")

    def trivially_perfect_gen():
        return _entry(
            "trivially_perfect_gen", gen_base(),
            _graph_definition(SIG_LOR, Atom("E", (1, 2))),
            (figures.COMPARABLE_NONEDGE,),
            "graphs with a genealogical order whose comparable pairs are "
            "all adjacent (trivially perfect graphs)",
            is_trivially_perfect, "trivially_perfect")

    def complete_lor():
        return _entry(
            "complete_lor", lor_base(),
            _graph_definition(SIG_LOR, Atom("E", (1, 2))),
            (figures.COMPARABLE_NONEDGE,),
            "graphs with a linear order whose comparable pairs are all "
            "adjacent (complete graphs)",
            is_complete, "complete")

    def comparability_so():
        return _entry(
            "comparability_so", so_base(),
            _graph_definition(SIG_LOR, Atom("E", (1, 2))),
            (figures.COMPARABLE_NONEDGE,),
            "graphs with a suitable order whose comparable pairs are all "
            "adjacent (comparability graphs)",
            is_comparability, "comparability")

    def b1_free_or():
        return _entry(
            "b1_free_or", or_base(),
            _graph_definition(SIG_OR, _edge_formula("A")),
            (figures.B1_PATTERN,),
            "graphs with an orientation avoiding an out-degree-two "
            "two-edge path (exploratory; no independent recognizer)")

    return {
        "chordal_peo": chordal_peo,
        "rghv(2)": lambda: rghv(2),
        "rghv(3)": lambda: rghv(3),
        "bipartite_or": bipartite_or,
        "cobipartite_or": cobipartite_or,
        "cobipartite_2ec": cobipartite_2ec,
        "threecol_loor": threecol_loor,
        "threecol_lo2ec": threecol_lo2ec,
        "circulararc_coor": circulararc_coor,
        "pca_cobip_t2": pca_cobip_t2,
        "pca_or": pca_or,
        "interval_lor": interval_lor,
        "chordal_gen": chordal_gen,
        "trivially_perfect_gen": trivially_perfect_gen,
        "complete_lor": complete_lor,
        "comparability_so": comparability_so,
        "comparability_height(2)": lambda: comparability_height(2),
        "pmixed": pmixed,
        "b1_free_or": b1_free_or,
    }


_ENTRY_FACTORIES = _build_entries()


def catalog_names() -> tuple[str, ...]:
    return tuple(_ENTRY_FACTORIES)


@lru_cache(maxsize=None)
def builtin(name: str) -> CatalogEntry:
    if name not in _ENTRY_FACTORIES:
        raise InputError(
            f"unknown catalog entry {name!r}; available: {list(_ENTRY_FACTORIES)}")
    return _ENTRY_FACTORIES[name]()


# ---------------------------------------------------------------------------
# Matrix partitions


_M_ENTRIES = {"0", "1", "*", "+"}


def m_partition_expression(M: Sequence[Sequence[str]]) -> LocalExpression:
    """Graphs whose vertices split into k classes constrained pairwise.

    Entry (i, j) restricts pairs coloured i and j: "1" forbids a
    non-edge, "0" forbids an edge, "+" forbids both (so the pair of
    colours cannot co-occur; on the diagonal the class has at most one
    vertex), "*" allows anything.
    """
    k = len(M)
    if k < 1 or any(len(row) != k for row in M):
        raise InputError("M must be a non-empty square matrix")
    for row in M:
        for entry in row:
            if entry not in _M_ENTRIES:
                raise InputError(f"matrix entries must be one of {_M_ENTRIES}")
    for i in range(k):
        for j in range(k):
            if M[i][j] != M[j][i]:
                raise InputError("M must be symmetric")
    base = colours_base(k)
    sig = base.signature

    def pattern(i: int, j: int, edge: bool) -> Structure:
        rel = {f"P{i}": [(0,)], f"P{j}": [(1,)]}
        if i == j:
            rel = {f"P{i}": [(0,), (1,)]}
        if edge:
            rel["E"] = [(0, 1), (1, 0)]
        return Structure.make(sig, 2, rel)

    forbidden = []
    for i in range(1, k + 1):
        for j in range(i, k + 1):
            entry = M[i - 1][j - 1]
            if entry in ("1", "+"):
                forbidden.append(pattern(i, j, edge=False))
            if entry in ("0", "+"):
                forbidden.append(pattern(i, j, edge=True))
    definition = _graph_definition(sig, Atom("E", (1, 2)))
    return LocalExpression(GRAPH_SIGNATURE, sig, definition, base,
                           tuple(forbidden), name="m_partition")


# ---------------------------------------------------------------------------
# Homomorphism targets via equivalence graphs


def _all_graphs(n: int):
    """All simple graphs on n vertices, one per isomorphism class."""
    pairs = list(itertools.combinations(range(n), 2))
    seen = {}
    for mask in itertools.product((False, True), repeat=len(pairs)):
        G = graph(n, [p for on, p in zip(mask, pairs) if on])
        key = canonical_key(G)
        if key not in seen:
            seen[key] = canonical_form(G)
    return [seen[k] for k in sorted(seen)]


def _is_subgraph(H: Structure, G: Structure) -> bool:
    """Injective map of H into G sending edges to edges."""
    h_edges = graph_edges(H)
    g_edges = graph_edges(G)
    for image in itertools.permutations(range(G.n), H.n):
        if all(frozenset((image[u], image[v])) in g_edges
               for u, v in (tuple(e) for e in h_edges)):
            return True
    return False


def _quotient(H: Structure, classes: list[list[int]]) -> Optional[Structure]:
    """Quotient graph by a vertex partition; None when some class spans an
    edge (the quotient would need a loop)."""
    edges = graph_edges(H)
    index = {}
    for ci, cls in enumerate(classes):
        for v in cls:
            index[v] = ci
    out = set()
    for e in edges:
        u, v = tuple(e)
        if index[u] == index[v]:
            return None
        out.add((index[u], index[v]))
    return graph(len(classes), out)


def _set_partitions(items: list[int], k: int):
    """All partitions of items into exactly k non-empty classes."""
    if not items:
        if k == 0:
            yield []
        return
    first, rest = items[0], items[1:]
    for parts in _set_partitions(rest, k):
        for i in range(len(parts)):
            yield parts[:i] + [parts[i] + [first]] + parts[i + 1:]
    for parts in _set_partitions(rest, k - 1):
        yield [[first]] + parts


def equivalence_preimages(G: Structure, max_size: Optional[int] = None) -> tuple[Structure, ...]:
    """Equivalence graphs whose quotient is G and stays G under no vertex
    deletion, up to isomorphism.

    The search is capped at max_size vertices (default |V(G)| + 2); the
    full set is finite but its largest member is not known in advance.
    """
    if max_size is None:
        max_size = G.n + 2
    out = {}
    for m in range(G.n, max_size + 1):
        if m * m * 2 > 2 ** 16:
            raise ResourceLimitError("equivalence_preimages guard exceeded")
        for parts in _set_partitions(list(range(m)), G.n):
            seen_edge_sets = set()
            adjacent = [(a, b) for a in range(G.n) for b in range(a + 1, G.n)]
            # try every bijection of classes onto V(G) by checking quotient
            candidates = _edge_fillings(parts, G)
            for edges in candidates:
                key = frozenset(edges)
                if key in seen_edge_sets:
                    continue
                seen_edge_sets.add(key)
                H = graph(m, edges)
                q = _quotient(H, parts)
                if q is None or not _iso_graph(q, G):
                    continue
                if not _vertex_critical(H, parts, G):
                    continue
                sim = [(u, v) for cls in parts for u in cls for v in cls]
                X = Structure.make(SIG_EQ, m,
                                   {"E": [t for e in edges for t in (e, e[::-1])],
                                    "Sim": sim})
                out.setdefault(canonical_key(X), canonical_form(X))
    return tuple(out[k] for k in sorted(out))


def _iso_graph(A: Structure, B: Structure) -> bool:
    from .structures import are_isomorphic
    return are_isomorphic(A, B)


def _edge_fillings(parts: list[list[int]], G: Structure):
    """Candidate edge sets between classes: for every pair of classes a
    non-empty subset of the cross pairs or nothing."""
    class_pairs = list(itertools.combinations(range(len(parts)), 2))
    options = []
    for a, b in class_pairs:
        cross = [(u, v) for u in parts[a] for v in parts[b]]
        subsets = [[]]
        for r in range(1, len(cross) + 1):
            subsets += [list(c) for c in itertools.combinations(cross, r)]
        options.append(subsets)
    for combo in itertools.product(*options):
        yield [e for chunk in combo for e in chunk]


def _vertex_critical(H: Structure, parts: list[list[int]], G: Structure) -> bool:
    from .structures import induced_substructure
    for v in range(H.n):
        keep = [u for u in range(H.n) if u != v]
        relabel = {u: i for i, u in enumerate(keep)}
        sub_parts = [[relabel[u] for u in cls if u != v] for cls in parts]
        sub_parts = [cls for cls in sub_parts if cls]
        sub = induced_substructure(H, keep)
        q = _quotient(sub, sub_parts)
        if q is not None and _iso_graph(q, G):
            return False
    return True


def csp_expression(H: Structure, max_preimage_size: Optional[int] = None) -> LocalExpression:
    """Graphs admitting a homomorphism to H, presented over equivalence
    graphs: classes collapse to H's vertices."""
    from .recognizers import _check_graph
    _check_graph(H)
    n = H.n
    if n < 1:
        raise InputError("H must have at least one vertex")
    if n > 4:
        raise ResourceLimitError(
            "csp_expression is guarded at targets with at most 4 vertices")
    forbidden: list[Structure] = [
        Structure.make(SIG_EQ, 2, {"E": [(0, 1), (1, 0)],
                                   "Sim": [(0, 0), (0, 1), (1, 0), (1, 1)]}),
    ]
    for G in _all_graphs(n + 1):
        forbidden.append(Structure.make(
            SIG_EQ, n + 1,
            {"E": G.tuples("E"), "Sim": [(v, v) for v in range(n + 1)]}))
    for m in range(1, n + 1):
        for Hp in _all_graphs(m):
            if not _is_subgraph(Hp, H):
                forbidden.extend(equivalence_preimages(Hp, max_preimage_size))
    definition = _graph_definition(SIG_EQ, Atom("E", (1, 2)))
    return LocalExpression(GRAPH_SIGNATURE, SIG_EQ, definition, eq_base(),
                           tuple(forbidden), name=f"csp(n={n})")
