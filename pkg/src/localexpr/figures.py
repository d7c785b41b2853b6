"""Forbidden-pattern data for the built-in catalog.

Every pattern set here is transcribed tuple for tuple; a checksum test
pins the transcription so edits cannot slip through silently.  Builder
helpers turn the raw tuples into carrier structures with the package's
storage conventions (symmetric symbols stored in both directions).
"""

from __future__ import annotations

from .structures import Signature, Structure

# Carrier signatures of the built-in bases.  Symbol order is load-bearing:
# it fixes the solver's variable order and every printed form.
SIG_OR = Signature((("A", 2),))
SIG_DI = Signature((("A", 2),))
SIG_LOR = Signature((("E", 2), ("L", 2)))
SIG_LOOR = Signature((("A", 2), ("L", 2)))
SIG_LO2EC = Signature((("Eb", 2), ("Er", 2), ("L", 2)))
SIG_EG2 = Signature((("Eb", 2), ("Er", 2)))
SIG_T2 = Signature((("Ab", 2), ("Ar", 2)))
SIG_COOR = Signature((("A", 2), ("C", 3)))
SIG_EQ = Signature((("E", 2), ("Sim", 2)))


def _sym(pairs):
    out = set()
    for u, v in pairs:
        out.add((u, v))
        out.add((v, u))
    return out


def lor_pattern(n: int, order: tuple[int, ...], edges) -> Structure:
    """A linearly ordered graph: `order` lists the vertices from smallest
    to largest; `edges` are undirected."""
    rank = {v: i for i, v in enumerate(order)}
    chain = [(u, v) for u in order for v in order if rank[u] < rank[v]]
    return Structure.make(SIG_LOR, n, {"E": _sym(edges), "L": chain})


def loor_pattern(n: int, order: tuple[int, ...], arcs) -> Structure:
    rank = {v: i for i, v in enumerate(order)}
    chain = [(u, v) for u in order for v in order if rank[u] < rank[v]]
    return Structure.make(SIG_LOOR, n, {"A": [tuple(a) for a in arcs], "L": chain})


def lo2ec_pattern(n: int, order: tuple[int, ...], blue, red) -> Structure:
    rank = {v: i for i, v in enumerate(order)}
    chain = [(u, v) for u in order for v in order if rank[u] < rank[v]]
    return Structure.make(SIG_LO2EC, n,
                          {"Eb": _sym(blue), "Er": _sym(red), "L": chain})


def eg2_pattern(n: int, blue, red) -> Structure:
    return Structure.make(SIG_EG2, n, {"Eb": _sym(blue), "Er": _sym(red)})


def t2_pattern(n: int, blue_arcs, red_arcs) -> Structure:
    return Structure.make(SIG_T2, n, {"Ab": [tuple(a) for a in blue_arcs],
                                      "Ar": [tuple(a) for a in red_arcs]})


def coor_pattern(n: int, cycle: tuple[int, ...], arcs) -> Structure:
    """An oriented graph with one cyclically ordered triple; all three
    rotations of the triple are stored."""
    x, y, z = cycle
    triples = [(x, y, z), (y, z, x), (z, x, y)]
    return Structure.make(SIG_COOR, n, {"A": [tuple(a) for a in arcs],
                                        "C": triples})


def or_pattern(n: int, arcs) -> Structure:
    return Structure.make(SIG_OR, n, {"A": [tuple(a) for a in arcs]})


def di_pattern(n: int, arcs) -> Structure:
    return Structure.make(SIG_DI, n, {"A": [tuple(a) for a in arcs]})


# Perfect-elimination obstruction: the smallest vertex of an ordered
# triangle-minus-an-edge sees two later non-adjacent neighbours.
CHORDAL_PEO_PATTERNS = (
    lor_pattern(3, (0, 1, 2), [(0, 1), (0, 2)]),
)

# Interval obstruction: a vertex lies between two others in the order,
# is adjacent to neither endpoint condition below; the far pair is an
# edge, the near pair is not, and the remaining pair may go either way.
INTERVAL_LOR_PATTERNS = (
    lor_pattern(3, (0, 1, 2), [(0, 2)]),
    lor_pattern(3, (0, 1, 2), [(0, 2), (1, 2)]),
)

# Two comparable non-adjacent vertices.
COMPARABLE_NONEDGE = lor_pattern(2, (0, 1), [])

# Two-edge-coloured obstructions for complement-bipartite graphs: six
# patterns on three vertices (vertex 0 on top, 1 left, 2 right).  The
# second pattern must be a blue edge: a lone blue edge next to a vertex
# seeing neither endpoint cannot occur in a two-clique cover, while a
# lone red edge can (both cliques inside one part), so forbidding the
# red version wrongly rejects a triangle plus an isolated vertex.
COBIPARTITE_2EC_PATTERNS = (
    eg2_pattern(3, [], []),
    eg2_pattern(3, [(1, 2)], []),
    eg2_pattern(3, [], [(0, 1), (0, 2)]),
    eg2_pattern(3, [(1, 2)], [(0, 1), (0, 2)]),
    eg2_pattern(3, [(0, 1), (0, 2), (1, 2)], []),
    eg2_pattern(3, [(0, 1), (0, 2)], []),
)

# Linearly ordered oriented obstructions for 3-colourability: nine
# patterns on the ordered triple 0 < 1 < 2, listed row by row.
THREECOL_LOOR_ARCS = (
    ((0, 1), (1, 2)),
    ((0, 2), (0, 1), (1, 2)),
    ((2, 0), (0, 1), (1, 2)),
    ((2, 1), (1, 0)),
    ((0, 2), (2, 1), (1, 0)),
    ((2, 0), (2, 1), (1, 0)),
    ((1, 0), (1, 2)),
    ((0, 2), (1, 0), (1, 2)),
    ((2, 0), (1, 0), (1, 2)),
)

THREECOL_LOOR_PATTERNS = tuple(
    loor_pattern(3, (0, 1, 2), arcs) for arcs in THREECOL_LOOR_ARCS)


def _code_arcs(arcs):
    """Forward arcs (with the order) become blue edges, backward arcs
    become red edges; the order 0 < 1 < 2 is implicit."""
    blue = [(u, v) for u, v in arcs if u < v]
    red = [(u, v) for u, v in arcs if u > v]
    return blue, red


THREECOL_LO2EC_PATTERNS = tuple(
    lo2ec_pattern(3, (0, 1, 2), *_code_arcs(arcs))
    for arcs in THREECOL_LOOR_ARCS)

# Circularly ordered oriented obstructions for circular-arc graphs:
# three patterns on a triple with clockwise order 0, 2, 1.
CIRCULARARC_COOR_PATTERNS = (
    coor_pattern(3, (0, 2, 1), [(0, 1), (1, 2)]),
    coor_pattern(3, (0, 2, 1), [(0, 1), (2, 1)]),
    coor_pattern(3, (0, 2, 1), [(0, 1)]),
)

# Two-arc-coloured tournament obstructions for proper-circular-arc
# co-bipartite graphs: six tournaments on three vertices.
PCA_COBIP_T2_PATTERNS = (
    t2_pattern(3, [(1, 0), (2, 0)], [(2, 1)]),
    t2_pattern(3, [(0, 1), (0, 2)], [(2, 1)]),
    t2_pattern(3, [(1, 2)], [(1, 0), (0, 2)]),
    t2_pattern(3, [(2, 1)], [(1, 0), (0, 2)]),
    t2_pattern(3, [], [(1, 0), (0, 2), (2, 1)]),
    t2_pattern(3, [], [(1, 0), (0, 2), (1, 2)]),
)

# Mixed-graph obstructions shared by every P-mixed entry: a directed
# two-arc path and its three listed extensions.
PMIXED_CORE_PATTERNS = (
    di_pattern(3, [(0, 1), (1, 2)]),
    di_pattern(3, [(0, 1), (1, 2), (2, 1)]),
    di_pattern(3, [(0, 1), (1, 2), (2, 1), (0, 2)]),
    di_pattern(3, [(0, 1), (1, 2), (2, 1), (2, 0)]),
)

# An orientation of a two-edge path whose middle vertex has out-degree 2.
B1_PATTERN = or_pattern(3, [(2, 0), (2, 1)])

# Out- and in-neighbourhood forks: two arcs from (resp. into) a common
# vertex whose other endpoints are non-adjacent.
OUT_FORK = or_pattern(3, [(2, 0), (2, 1)])
IN_FORK = or_pattern(3, [(0, 2), (1, 2)])
