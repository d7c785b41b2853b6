"""Finite relational structures over finite signatures.

Vertices are dense integers 0..n-1.  Tuple sets are stored sorted, so all
iteration orders are fixed and outputs are reproducible across runs.
Symmetric graph relations are stored as ordered pairs in both directions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .errors import InputError, ResourceLimitError

# Refusal threshold for exhaustive enumeration: total number of tuple
# positions (sum over symbols of n**arity).  Beyond this the raw structure
# count exceeds 2**24 and enumeration is no longer desk-scale.
ENUMERATION_GUARD = 24

# Isomorphism machinery is backtracking-based and only adequate at desk scale.
CANONICAL_FORM_GUARD = 10


@dataclass(frozen=True)
class Signature:
    """An ordered list of relation symbol names with positive arities.

    Symbol order is fixed and canonical; it anchors every deterministic
    iteration order in the package.
    """

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.symbols]
        if len(set(names)) != len(names):
            raise InputError(f"duplicate symbol names in signature: {names}")
        for name, arity in self.symbols:
            if arity < 1:
                raise InputError(f"symbol {name!r} has non-positive arity {arity}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)

    def arity(self, name: str) -> int:
        for sym, arity in self.symbols:
            if sym == name:
                return arity
        raise InputError(f"unknown symbol {name!r}")

    def __contains__(self, name: str) -> bool:
        return any(sym == name for sym, _ in self.symbols)

    def max_arity(self) -> int:
        return max((arity for _, arity in self.symbols), default=0)


EMPTY_SIGNATURE = Signature(())

GRAPH_SIGNATURE = Signature((("E", 2),))
DIGRAPH_SIGNATURE = Signature((("E", 2),))


@dataclass(frozen=True)
class Structure:
    """A finite vertex set 0..n-1 with one tuple set per signature symbol."""

    signature: Signature
    n: int
    relations: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if self.n < 0:
            raise InputError("vertex count must be non-negative")
        if len(self.relations) != len(self.signature.symbols):
            raise InputError("one tuple set per signature symbol is required")
        for (name, arity), tuples in zip(self.signature.symbols, self.relations):
            if list(tuples) != sorted(set(tuples)):
                raise InputError(f"tuple set for {name!r} must be sorted and duplicate-free")
            for t in tuples:
                if len(t) != arity:
                    raise InputError(f"tuple {t} has wrong length for {name!r} (arity {arity})")
                if any(not (0 <= v < self.n) for v in t):
                    raise InputError(f"tuple {t} for {name!r} has out-of-range vertex")

    @staticmethod
    def make(signature: Signature, n: int,
             relations: dict[str, Iterable[Sequence[int]]] | None = None) -> "Structure":
        relations = relations or {}
        unknown = set(relations) - set(signature.names)
        if unknown:
            raise InputError(f"tuples given for unknown symbols {sorted(unknown)}")
        rels = tuple(
            tuple(sorted({tuple(t) for t in relations.get(name, ())}))
            for name, _ in signature.symbols
        )
        return Structure(signature, n, rels)

    def tuples(self, name: str) -> tuple[tuple[int, ...], ...]:
        for (sym, _), tuples in zip(self.signature.symbols, self.relations):
            if sym == name:
                return tuples
        raise InputError(f"unknown symbol {name!r}")

    def has(self, name: str, t: Sequence[int]) -> bool:
        return tuple(t) in set(self.tuples(name))

    def relation_sets(self) -> dict[str, frozenset[tuple[int, ...]]]:
        return {name: frozenset(tuples)
                for (name, _), tuples in zip(self.signature.symbols, self.relations)}

    def total_tuples(self) -> int:
        return sum(len(tuples) for tuples in self.relations)

    def __repr__(self):
        rels = ", ".join(
            f"{name}={list(tuples)}"
            for (name, _), tuples in zip(self.signature.symbols, self.relations)
            if tuples
        )
        return f"Structure(n={self.n}{', ' + rels if rels else ''})"


def graph(n: int, edges: Iterable[Sequence[int]]) -> Structure:
    """A simple graph as an {E}-structure; each edge is stored both ways."""
    pairs = set()
    for u, v in edges:
        if u == v:
            raise InputError(f"loop {u} not allowed in a simple graph")
        pairs.add((u, v))
        pairs.add((v, u))
    return Structure.make(GRAPH_SIGNATURE, n, {"E": pairs})


def digraph(n: int, arcs: Iterable[Sequence[int]]) -> Structure:
    return Structure.make(DIGRAPH_SIGNATURE, n, {"E": [tuple(a) for a in arcs]})


def path_graph(n: int) -> Structure:
    return graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Structure:
    return graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Structure:
    return graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def empty_graph(n: int) -> Structure:
    return graph(n, [])


def graph_edges(A: Structure) -> set[frozenset[int]]:
    """Undirected edge set of a graph-signature structure."""
    return {frozenset(t) for t in A.tuples("E") if t[0] != t[1]}


def induced_substructure(A: Structure, vertices: Iterable[int]) -> Structure:
    """Restriction of all relations to a vertex subset.

    Vertices of the result are re-indexed 0..|S|-1 in ascending original
    order.
    """
    vs = sorted(set(vertices))
    for v in vs:
        if not (0 <= v < A.n):
            raise InputError(f"vertex {v} out of range 0..{A.n - 1}")
    index = {v: i for i, v in enumerate(vs)}
    rels = tuple(
        tuple(sorted(tuple(index[x] for x in t)
                     for t in tuples if all(x in index for x in t)))
        for tuples in A.relations
    )
    return Structure(A.signature, len(vs), rels)


@dataclass(frozen=True)
class Embedding:
    """An injective map between vertex ranges that preserves and reflects
    every relation (tuple in source <=> image tuple in target)."""

    map: tuple[int, ...]

    def __call__(self, v: int) -> int:
        return self.map[v]

    def apply(self, t: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.map[v] for v in t)


def is_embedding(A: Structure, B: Structure, mapping: Sequence[int]) -> bool:
    """Check the biconditional preservation condition for an injective map."""
    if A.signature != B.signature:
        raise InputError("signature mismatch")
    if len(mapping) != A.n or len(set(mapping)) != A.n:
        return False
    if any(not (0 <= v < B.n) for v in mapping):
        return False
    for (name, arity), a_tuples in zip(A.signature.symbols, A.relations):
        b_set = set(B.tuples(name))
        a_set = set(a_tuples)
        for t in itertools.product(range(A.n), repeat=arity):
            if (t in a_set) != (tuple(mapping[v] for v in t) in b_set):
                return False
    return True


def enumerate_embeddings(A: Structure, B: Structure) -> list[Embedding]:
    """All embeddings of A into B, in lexicographic order on the map."""
    if A.signature != B.signature:
        raise InputError("signature mismatch")
    if A.n > B.n:
        return []
    results: list[Embedding] = []

    b_sets = [set(tuples) for tuples in B.relations]
    a_sets = [set(tuples) for tuples in A.relations]
    arities = [arity for _, arity in A.signature.symbols]

    def consistent(mapping: list[int], new: int) -> bool:
        # Check the biconditional on all tuples whose entries lie in the
        # newly extended prefix and that mention the new vertex.
        k = len(mapping)  # prefix length after appending `new`
        prefix = list(range(k))
        for si, arity in enumerate(arities):
            a_set, b_set = a_sets[si], b_sets[si]
            for t in itertools.product(prefix, repeat=arity):
                if (k - 1) not in t:
                    continue
                if ((t in a_set)
                        != (tuple(mapping[v] for v in t) in b_set)):
                    return False
        return True

    def extend(mapping: list[int], used: set[int]):
        if len(mapping) == A.n:
            results.append(Embedding(tuple(mapping)))
            return
        for b in range(B.n):
            if b in used:
                continue
            mapping.append(b)
            if consistent(mapping, b):
                used.add(b)
                extend(mapping, used)
                used.remove(b)
            mapping.pop()

    extend([], set())
    return results


def embeds(A: Structure, B: Structure) -> bool:
    """Whether at least one embedding of A into B exists (early exit)."""
    if A.signature != B.signature:
        raise InputError("signature mismatch")
    if A.n > B.n:
        return False

    b_sets = [set(tuples) for tuples in B.relations]
    a_sets = [set(tuples) for tuples in A.relations]
    arities = [arity for _, arity in A.signature.symbols]

    def consistent(mapping: list[int]) -> bool:
        k = len(mapping)
        prefix = list(range(k))
        for si, arity in enumerate(arities):
            a_set, b_set = a_sets[si], b_sets[si]
            for t in itertools.product(prefix, repeat=arity):
                if (k - 1) not in t:
                    continue
                if (t in a_set) != (tuple(mapping[v] for v in t) in b_set):
                    return False
        return True

    def extend(mapping: list[int], used: set[int]) -> bool:
        if len(mapping) == A.n:
            return True
        for b in range(B.n):
            if b in used:
                continue
            mapping.append(b)
            if consistent(mapping):
                used.add(b)
                if extend(mapping, used):
                    return True
                used.remove(b)
            mapping.pop()
        return False

    return extend([], set())


def is_free(B: Structure, patterns: Iterable[Structure]) -> bool:
    """True iff no structure of the collection embeds into B."""
    for F in patterns:
        if F.signature != B.signature:
            raise InputError("signature mismatch between structure and pattern")
        if embeds(F, B):
            return False
    return True


def _degree_profile(A: Structure) -> list[tuple[int, ...]]:
    """Per-vertex occurrence counts per (symbol, position) — an
    isomorphism-invariant used for pruning."""
    profiles = [[0] * sum(arity for _, arity in A.signature.symbols)
                for _ in range(A.n)]
    offset = 0
    for (_, arity), tuples in zip(A.signature.symbols, A.relations):
        for t in tuples:
            for pos, v in enumerate(t):
                profiles[v][offset + pos] += 1
        offset += arity
    return [tuple(p) for p in profiles]


def are_isomorphic(A: Structure, B: Structure) -> bool:
    """Bijective-embedding existence, by backtracking with degree pruning."""
    if A.signature != B.signature:
        raise InputError("signature mismatch")
    if A.n != B.n:
        return False
    if tuple(len(t) for t in A.relations) != tuple(len(t) for t in B.relations):
        return False
    pa, pb = _degree_profile(A), _degree_profile(B)
    if sorted(pa) != sorted(pb):
        return False

    b_sets = [set(tuples) for tuples in B.relations]
    a_sets = [set(tuples) for tuples in A.relations]
    arities = [arity for _, arity in A.signature.symbols]

    def consistent(mapping: list[int]) -> bool:
        k = len(mapping)
        prefix = list(range(k))
        for si, arity in enumerate(arities):
            a_set, b_set = a_sets[si], b_sets[si]
            for t in itertools.product(prefix, repeat=arity):
                if (k - 1) not in t:
                    continue
                if (t in a_set) != (tuple(mapping[v] for v in t) in b_set):
                    return False
        return True

    def extend(mapping: list[int], used: set[int]) -> bool:
        if len(mapping) == A.n:
            return True
        v = len(mapping)
        for b in range(B.n):
            if b in used or pb[b] != pa[v]:
                continue
            mapping.append(b)
            if consistent(mapping):
                used.add(b)
                if extend(mapping, used):
                    return True
                used.remove(b)
            mapping.pop()
        return False

    return extend([], set())


def _encode(A: Structure, perm: Sequence[int]) -> tuple:
    """Relation encoding of A relabelled by perm (perm[old] = new)."""
    out = []
    for tuples in A.relations:
        out.append(tuple(sorted(tuple(perm[v] for v in t) for t in tuples)))
    return tuple(out)


def canonical_form(A: Structure) -> Structure:
    """A canonical representative of A's isomorphism class.

    Minimizes the relabelled relation encoding over all vertex
    permutations compatible with the degree profile.  Adequate at desk
    scale only.
    """
    if A.n > CANONICAL_FORM_GUARD:
        raise ResourceLimitError(
            f"canonical_form guarded at n <= {CANONICAL_FORM_GUARD} (got {A.n})")
    if A.n <= 1:
        return A
    profile = _degree_profile(A)
    # Group vertices by invariant profile; only permutations mapping groups
    # onto groups can realize the minimum.
    order = sorted(range(A.n), key=lambda v: (profile[v], v))
    groups: list[list[int]] = []
    for v in order:
        if groups and profile[groups[-1][0]] == profile[v]:
            groups[-1].append(v)
        else:
            groups.append([v])
    best = None
    for parts in itertools.product(*(itertools.permutations(g) for g in groups)):
        flat = [v for part in parts for v in part]
        perm = [0] * A.n
        for new, old in enumerate(flat):
            perm[old] = new
        enc = _encode(A, perm)
        if best is None or enc < best:
            best = enc
    return Structure(A.signature, A.n, best)


def canonical_key(A: Structure) -> tuple:
    return canonical_form(A).relations


def enumerate_structures(signature: Signature, n: int, up_to_iso: bool = False,
                         predicate: Optional[Callable[[Structure], bool]] = None,
                         force: bool = False) -> Iterator[Structure]:
    """Exhaustive stream of all structures over a signature on n vertices.

    With up_to_iso, exactly one representative per isomorphism class is
    produced (the canonical form), in canonical order.  The blow-up guard
    refuses signatures with more than ENUMERATION_GUARD total tuple
    positions unless force is given.
    """
    if n < 0:
        raise InputError("n must be non-negative")
    positions = sum(n ** arity for _, arity in signature.symbols)
    if positions > ENUMERATION_GUARD and not force:
        raise ResourceLimitError(
            f"enumeration of {positions} tuple positions exceeds the guard "
            f"({ENUMERATION_GUARD}); pass force=True to override")
    universes = [sorted(itertools.product(range(n), repeat=arity))
                 for _, arity in signature.symbols]
    if up_to_iso:
        seen: set[tuple] = set()
        for choice in itertools.product(*(_subsets(u) for u in universes)):
            A = canonical_form(Structure(signature, n, tuple(choice)))
            seen.add(A.relations)
        for key in sorted(seen):
            A = Structure(signature, n, key)
            if predicate is None or predicate(A):
                yield A
    else:
        for choice in itertools.product(*(_subsets(u) for u in universes)):
            A = Structure(signature, n, tuple(choice))
            if predicate is None or predicate(A):
                yield A


def _subsets(universe: list[tuple[int, ...]]) -> Iterator[tuple[tuple[int, ...], ...]]:
    for r in range(len(universe) + 1):
        for combo in itertools.combinations(universe, r):
            yield combo
