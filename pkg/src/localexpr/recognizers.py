"""Independent graph-class recognizers used as test oracles.

Every function here works directly on the edge set with a textbook
algorithm or plain brute force, sharing no code with the solver.  The
brute-force variants refuse inputs past a small vertex guard.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Callable

from .errors import InputError, ResourceLimitError
from .structures import (Structure, complete_graph, cycle_graph, graph,
                         graph_edges, induced_substructure, is_free,
                         path_graph)

BRUTE_FORCE_GUARD = 8


def _check_graph(G: Structure) -> set[frozenset[int]]:
    if G.signature.names != ("E",) or G.signature.arity("E") != 2:
        raise InputError("recognizers expect a graph over the single symbol E")
    for u, v in G.tuples("E"):
        if u == v or not G.has("E", (v, u)):
            raise InputError("recognizers expect a simple symmetric graph")
    return graph_edges(G)


def _adj(G: Structure) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(G.n)]
    for e in _check_graph(G):
        u, v = tuple(e)
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _guard(G: Structure, name: str) -> None:
    if G.n > BRUTE_FORCE_GUARD:
        raise ResourceLimitError(
            f"{name} is brute force and guarded at n <= {BRUTE_FORCE_GUARD}")


def complement(G: Structure) -> Structure:
    edges = _check_graph(G)
    return graph(G.n, [(u, v) for u in range(G.n) for v in range(u + 1, G.n)
                       if frozenset((u, v)) not in edges])


def is_bipartite(G: Structure) -> bool:
    """Two-colourability by breadth-first search."""
    adj = _adj(G)
    colour = [-1] * G.n
    for s in range(G.n):
        if colour[s] != -1:
            continue
        colour[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if colour[v] == -1:
                    colour[v] = 1 - colour[u]
                    queue.append(v)
                elif colour[v] == colour[u]:
                    return False
    return True


def is_k_colourable(G: Structure, k: int) -> bool:
    """Proper vertex colouring by backtracking."""
    if k < 1:
        raise InputError("k must be positive")
    _guard(G, "is_k_colourable")
    adj = _adj(G)
    colour = [-1] * G.n

    def place(v: int) -> bool:
        if v == G.n:
            return True
        for c in range(k):
            if all(colour[u] != c for u in adj[v]):
                colour[v] = c
                if place(v + 1):
                    return True
                colour[v] = -1
        return False

    return place(0)


def is_chordal(G: Structure) -> bool:
    """No induced cycle on four or more vertices, by subset enumeration."""
    _guard(G, "is_chordal")
    for k in range(4, G.n + 1):
        C = cycle_graph(k)
        for S in itertools.combinations(range(G.n), k):
            if not is_free(induced_substructure(G, S), (C,)):
                return False
    return True


def is_cobipartite(G: Structure) -> bool:
    return is_bipartite(complement(G))


def is_trivially_perfect(G: Structure) -> bool:
    """No induced path or cycle on four vertices."""
    return is_free(G, (path_graph(4), cycle_graph(4)))


def is_complete(G: Structure) -> bool:
    return len(_check_graph(G)) == G.n * (G.n - 1) // 2


def is_split(G: Structure) -> bool:
    """Some vertex subset is a clique whose complement is independent."""
    _guard(G, "is_split")
    edges = _check_graph(G)
    for r in range(G.n + 1):
        for S in itertools.combinations(range(G.n), r):
            clique = all(frozenset((u, v)) in edges
                         for u, v in itertools.combinations(S, 2))
            rest = [v for v in range(G.n) if v not in S]
            independent = all(frozenset((u, v)) not in edges
                              for u, v in itertools.combinations(rest, 2))
            if clique and independent:
                return True
    return False


def is_comparability(G: Structure) -> bool:
    """Existence of a transitive orientation, by backtracking over edges."""
    _guard(G, "is_comparability")
    edge_set = _check_graph(G)
    edges = sorted(tuple(sorted(e)) for e in edge_set)
    arcs: set[tuple[int, int]] = set()

    def admissible(x: int, y: int) -> bool:
        # adding x->y: every composition with an existing arc must stay
        # inside the graph and not contradict an existing orientation
        for w in range(G.n):
            if (w, x) in arcs:
                if frozenset((w, y)) not in edge_set or (y, w) in arcs:
                    return False
            if (y, w) in arcs:
                if frozenset((x, w)) not in edge_set or (w, x) in arcs:
                    return False
        return True

    def transitive() -> bool:
        return all((a, c) in arcs
                   for a, b in arcs for b2, c in arcs
                   if b == b2 and a != c)

    def place(i: int) -> bool:
        if i == len(edges):
            return transitive()
        u, v = edges[i]
        for arc in ((u, v), (v, u)):
            if admissible(*arc):
                arcs.add(arc)
                if place(i + 1):
                    return True
                arcs.discard(arc)
        return False

    return place(0)


def is_tucker_circular_arc(G: Structure) -> bool:
    """Circular ordering such that every edge covers one of its two
    circular intervals with further edges, by brute force over orderings
    with vertex 0 pinned first."""
    _guard(G, "is_tucker_circular_arc")
    edges = _check_graph(G)
    if G.n <= 2:
        return True

    def interval(circ: list[int], x: int, y: int) -> list[int]:
        pos = {v: i for i, v in enumerate(circ)}
        out = []
        i = (pos[x] + 1) % G.n
        while circ[i] != y:
            out.append(circ[i])
            i = (i + 1) % G.n
        return out

    for rest in itertools.permutations(range(1, G.n)):
        circ = [0] + list(rest)
        good = True
        for e in edges:
            x, y = tuple(e)
            if all(frozenset((x, z)) in edges for z in interval(circ, x, y)) or \
               all(frozenset((y, z)) in edges for z in interval(circ, y, x)):
                continue
            good = False
            break
        if good:
            return True
    return False


_BY_NAME: dict[str, Callable[[Structure], bool]] = {
    "bipartite": is_bipartite,
    "3_colourable": lambda G: is_k_colourable(G, 3),
    "chordal": is_chordal,
    "cobipartite": is_cobipartite,
    "trivially_perfect": is_trivially_perfect,
    "complete": is_complete,
    "split": is_split,
    "comparability": is_comparability,
    "tucker_circular_arc": is_tucker_circular_arc,
}


def reference_recognizer(name: str, G: Structure) -> bool:
    if name not in _BY_NAME:
        raise InputError(
            f"unknown recognizer {name!r}; available: {sorted(_BY_NAME)}")
    return _BY_NAME[name](G)
