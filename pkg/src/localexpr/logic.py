"""Quantifier-free formulas, definitions, reducts, and functor tables.

Variables are positional indices 1..k; substitution is index rewriting, so
composition has no capture issues.  Formulas are not auto-normalized:
logical equivalence is the only equality notion exposed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .errors import InputError
from .structures import (Signature, Structure, canonical_key,
                         enumerate_embeddings, enumerate_structures,
                         induced_substructure, is_embedding)


# ---------------------------------------------------------------------------
# Formula AST


@dataclass(frozen=True)
class Top:
    def __repr__(self):
        return "true"


@dataclass(frozen=True)
class Bottom:
    def __repr__(self):
        return "false"


@dataclass(frozen=True)
class Eq:
    i: int
    j: int

    def __repr__(self):
        return f"x{self.i} = x{self.j}"


@dataclass(frozen=True)
class Atom:
    symbol: str
    vars: tuple[int, ...]

    def __repr__(self):
        return f"{self.symbol}({', '.join(f'x{v}' for v in self.vars)})"


@dataclass(frozen=True)
class Not:
    sub: "Formula"

    def __repr__(self):
        return f"!({self.sub!r})"


@dataclass(frozen=True)
class And:
    subs: tuple["Formula", ...]

    def __repr__(self):
        if not self.subs:
            return "true"
        return "(" + " & ".join(repr(s) for s in self.subs) + ")"


@dataclass(frozen=True)
class Or:
    subs: tuple["Formula", ...]

    def __repr__(self):
        if not self.subs:
            return "false"
        return "(" + " | ".join(repr(s) for s in self.subs) + ")"


Formula = Top | Bottom | Eq | Atom | Not | And | Or

TRUE = Top()
FALSE = Bottom()


def conj(subs: Iterable[Formula]) -> Formula:
    subs = tuple(subs)
    if not subs:
        return TRUE
    if len(subs) == 1:
        return subs[0]
    return And(subs)


def disj(subs: Iterable[Formula]) -> Formula:
    subs = tuple(subs)
    if not subs:
        return FALSE
    if len(subs) == 1:
        return subs[0]
    return Or(subs)


def formula_arity(phi: Formula) -> int:
    """Smallest k such that every variable index of phi is <= k."""
    if isinstance(phi, (Top, Bottom)):
        return 0
    if isinstance(phi, Eq):
        return max(phi.i, phi.j)
    if isinstance(phi, Atom):
        return max(phi.vars, default=0)
    if isinstance(phi, Not):
        return formula_arity(phi.sub)
    return max((formula_arity(s) for s in phi.subs), default=0)


def validate_formula(phi: Formula, signature: Signature, arity: int) -> None:
    """Check variable indices against arity and atoms against the signature."""
    if isinstance(phi, (Top, Bottom)):
        return
    if isinstance(phi, Eq):
        for v in (phi.i, phi.j):
            if not (1 <= v <= arity):
                raise InputError(f"variable x{v} out of range 1..{arity}")
        return
    if isinstance(phi, Atom):
        if phi.symbol not in signature:
            raise InputError(f"atom uses unknown symbol {phi.symbol!r}")
        if len(phi.vars) != signature.arity(phi.symbol):
            raise InputError(
                f"atom {phi.symbol!r} has {len(phi.vars)} arguments, "
                f"expected {signature.arity(phi.symbol)}")
        for v in phi.vars:
            if not (1 <= v <= arity):
                raise InputError(f"variable x{v} out of range 1..{arity}")
        return
    if isinstance(phi, Not):
        validate_formula(phi.sub, signature, arity)
        return
    for s in phi.subs:
        validate_formula(s, signature, arity)


def bottom_of_arity(k: int) -> Formula:
    """An always-false formula that mentions variables 1..k."""
    if k == 0:
        return FALSE
    return conj(Not(Eq(i, i)) for i in range(1, k + 1))


def all_different(k: int) -> Formula:
    """Pairwise inequality of variables 1..k."""
    return conj(Not(Eq(i, j))
                for i in range(1, k + 1) for j in range(i + 1, k + 1))


def format_formula(phi: Formula, prec: int = 0) -> str:
    """Concrete syntax: x3 for variable 3, !, &, | with that precedence.

    Equality under negation keeps its own parentheses so the text reads
    back unambiguously.
    """
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, Eq):
        s = f"x{phi.i} = x{phi.j}"
        return f"({s})" if prec > 0 else s
    if isinstance(phi, Atom):
        return f"{phi.symbol}({', '.join(f'x{v}' for v in phi.vars)})"
    if isinstance(phi, Not):
        return "!" + format_formula(phi.sub, 3)
    if isinstance(phi, And):
        if not phi.subs:
            return "true"
        s = " & ".join(format_formula(x, 2) for x in phi.subs)
        return f"({s})" if prec > 1 else s
    if not phi.subs:
        return "false"
    s = " | ".join(format_formula(x, 1) for x in phi.subs)
    return f"({s})" if prec > 0 else s


def evaluate(phi: Formula, A: Structure, assignment: Sequence[int]) -> bool:
    """Truth of phi in A under a variable assignment (x_i = assignment[i-1]).

    Entries may repeat; every entry must be a vertex of A.
    """
    for v in assignment:
        if not (0 <= v < A.n):
            raise InputError(f"assignment entry {v} is not a vertex of the structure")
    rel = {name: set(A.tuples(name)) for name in A.signature.names}
    return _eval(phi, rel, tuple(assignment))


def _eval(phi: Formula, rel: dict[str, set], a: tuple[int, ...]) -> bool:
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, Eq):
        try:
            return a[phi.i - 1] == a[phi.j - 1]
        except IndexError:
            raise InputError("assignment shorter than formula arity") from None
    if isinstance(phi, Atom):
        try:
            t = tuple(a[v - 1] for v in phi.vars)
        except IndexError:
            raise InputError("assignment shorter than formula arity") from None
        if phi.symbol not in rel:
            raise InputError(f"structure lacks symbol {phi.symbol!r}")
        return t in rel[phi.symbol]
    if isinstance(phi, Not):
        return not _eval(phi.sub, rel, a)
    if isinstance(phi, And):
        return all(_eval(s, rel, a) for s in phi.subs)
    return any(_eval(s, rel, a) for s in phi.subs)


@dataclass(frozen=True)
class UniversalSentence:
    """forall x1..x_arity body, with a quantifier-free body."""

    body: Formula
    arity: int

    def holds(self, A: Structure) -> bool:
        rel = {name: set(A.tuples(name)) for name in A.signature.names}
        return all(_eval(self.body, rel, a)
                   for a in itertools.product(range(A.n), repeat=self.arity))


def characteristic_formula(A: Structure, spanning: Sequence[int]) -> Formula:
    """Conjunction of all atomic and negated-atomic facts of a spanning tuple.

    Equality literals come first (pairs in lexicographic order), then one
    literal per symbol and per variable-index tuple, in signature and
    lexicographic order.  Satisfaction of the result by (B, b) says exactly
    that spanning[i] -> b[i] is a well-defined embedding.
    """
    spanning = tuple(spanning)
    if set(spanning) != set(range(A.n)):
        raise InputError("tuple must contain every vertex of the structure")
    k = len(spanning)
    literals: list[Formula] = []
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            eq = Eq(i, j)
            literals.append(eq if spanning[i - 1] == spanning[j - 1] else Not(eq))
    for (name, arity), tuples in zip(A.signature.symbols, A.relations):
        present = set(tuples)
        for vs in itertools.product(range(1, k + 1), repeat=arity):
            atom = Atom(name, vs)
            fact = tuple(spanning[v - 1] for v in vs)
            literals.append(atom if fact in present else Not(atom))
    return conj(literals)


# ---------------------------------------------------------------------------
# Quantifier-free definitions and reducts


@dataclass(frozen=True)
class QfDefinition:
    """One carrier-signature formula per source symbol.

    The induced reduct maps carrier structures to source structures on the
    same vertex set.
    """

    source: Signature
    carrier: Signature
    formulas: tuple[tuple[str, Formula], ...]

    def __post_init__(self):
        names = tuple(name for name, _ in self.formulas)
        if names != self.source.names:
            raise InputError("exactly one formula per source symbol, in signature order")
        for name, phi in self.formulas:
            validate_formula(phi, self.carrier, self.source.arity(name))

    @staticmethod
    def make(source: Signature, carrier: Signature,
             formulas: dict[str, Formula]) -> "QfDefinition":
        return QfDefinition(source, carrier,
                            tuple((name, formulas[name]) for name in source.names))

    def formula(self, name: str) -> Formula:
        for sym, phi in self.formulas:
            if sym == name:
                return phi
        raise InputError(f"unknown symbol {name!r}")


def identity_definition(signature: Signature) -> QfDefinition:
    return QfDefinition(signature, signature, tuple(
        (name, Atom(name, tuple(range(1, arity + 1))))
        for name, arity in signature.symbols))


def reduct(D: QfDefinition, A: Structure) -> Structure:
    """The structure whose R-tuples are the assignments satisfying D's
    formula for R; vertex set preserved."""
    if A.signature != D.carrier:
        raise InputError("structure signature does not match the definition carrier")
    rel = {name: set(A.tuples(name)) for name in A.signature.names}
    out = {}
    for name, arity in D.source.symbols:
        phi = D.formula(name)
        out[name] = [t for t in itertools.product(range(A.n), repeat=arity)
                     if _eval(phi, rel, t)]
    return Structure.make(D.source, A.n, out)


def apply_definition(D: QfDefinition, phi: Formula) -> Formula:
    """Substitute D's formulas for source-signature atoms in phi.

    The equality/Boolean skeleton is unchanged and the free-variable count
    is preserved.
    """
    if isinstance(phi, (Top, Bottom, Eq)):
        return phi
    if isinstance(phi, Atom):
        return _rename(D.formula(phi.symbol), phi.vars)
    if isinstance(phi, Not):
        return Not(apply_definition(D, phi.sub))
    if isinstance(phi, And):
        return And(tuple(apply_definition(D, s) for s in phi.subs))
    return Or(tuple(apply_definition(D, s) for s in phi.subs))


def _rename(phi: Formula, vars: tuple[int, ...]) -> Formula:
    """Rewrite variable i of phi to vars[i-1]."""
    if isinstance(phi, (Top, Bottom)):
        return phi
    if isinstance(phi, Eq):
        return Eq(vars[phi.i - 1], vars[phi.j - 1])
    if isinstance(phi, Atom):
        return Atom(phi.symbol, tuple(vars[v - 1] for v in phi.vars))
    if isinstance(phi, Not):
        return Not(_rename(phi.sub, vars))
    if isinstance(phi, And):
        return And(tuple(_rename(s, vars) for s in phi.subs))
    return Or(tuple(_rename(s, vars) for s in phi.subs))


def compose(G: QfDefinition, D: QfDefinition) -> QfDefinition:
    """Definition whose reduct is reduct(G, .) after reduct(D, .)."""
    if G.carrier != D.source:
        raise InputError("carrier of the outer definition must equal the "
                         "source of the inner definition")
    return QfDefinition(G.source, D.carrier, tuple(
        (name, apply_definition(D, phi)) for name, phi in G.formulas))


def _models_with_tuples(signature: Signature, k: int, force: bool = False):
    """All pairs (structure on <= k vertices, k-tuple with repetition).

    Quantifier-free truth depends only on the induced substructure on the
    tuple entries, so these pairs exhaust all evaluation contexts of
    arity-k formulas.
    """
    for n in range(1, k + 1):
        # spanning tuples over iso representatives cover every relabelling
        for A in enumerate_structures(signature, n, up_to_iso=True, force=force):
            for a in itertools.product(range(n), repeat=k):
                if len(set(a)) == n:
                    yield A, a


def logically_equivalent(phi: Formula, psi: Formula, signature: Signature,
                         arity: Optional[int] = None, force: bool = False) -> bool:
    """Decide equivalence by exhausting structures on <= k vertices and all
    k-tuples with repetition."""
    k = arity if arity is not None else max(formula_arity(phi), formula_arity(psi))
    validate_formula(phi, signature, k)
    validate_formula(psi, signature, k)
    if k == 0:
        empty = Structure.make(signature, 0)
        rel = {name: set() for name in signature.names}
        return _eval(phi, rel, ()) == _eval(psi, rel, ())
    for A, a in _models_with_tuples(signature, k, force=force):
        rel = {name: set(A.tuples(name)) for name in A.signature.names}
        if _eval(phi, rel, a) != _eval(psi, rel, a):
            return False
    return True


def is_satisfiable(phi: Formula, signature: Signature,
                   arity: Optional[int] = None, force: bool = False) -> bool:
    """True iff some structure on <= k vertices and some tuple satisfy phi."""
    k = arity if arity is not None else formula_arity(phi)
    validate_formula(phi, signature, k)
    if k == 0:
        rel = {name: set() for name in signature.names}
        return _eval(phi, rel, ())
    for A, a in _models_with_tuples(signature, k, force=force):
        rel = {name: set(A.tuples(name)) for name in A.signature.names}
        if _eval(phi, rel, a):
            return True
    return False


def is_logically_injective(D: QfDefinition, max_n: int, force: bool = False) -> bool:
    """True iff the translated characteristic formula of every source
    structure with <= max_n vertices is satisfiable; equivalently, every
    such structure is a reduct."""
    if max_n < D.source.max_arity():
        raise InputError(
            f"max_n must be at least the maximum source arity ({D.source.max_arity()})")
    for n in range(1, max_n + 1):
        for A in enumerate_structures(D.source, n, up_to_iso=True, force=force):
            chi = characteristic_formula(A, tuple(range(n)))
            if not is_satisfiable(apply_definition(D, chi), D.carrier,
                                  arity=n, force=force):
                return False
    return True


# ---------------------------------------------------------------------------
# Functor tables, synthesis, weak extensions


@dataclass(frozen=True)
class FunctorTable:
    """Explicit action of an embedding-preserving map on small structures.

    Entries pair a carrier structure with its image on the same vertex
    set.  Action on structures with at most max-target-arity vertices
    determines such a map, so tables of that size suffice.
    """

    carrier: Signature
    target: Signature
    entries: tuple[tuple[Structure, Structure], ...]

    def __post_init__(self):
        for dom, img in self.entries:
            if dom.signature != self.carrier:
                raise InputError("table domain entry has wrong signature")
            if img.signature != self.target:
                raise InputError("table image entry has wrong signature")
            if dom.n != img.n:
                raise InputError("vertex set must be preserved by each table entry")

    def check_embedding_consistency(self) -> None:
        """Every embedding between domain entries must also be an embedding
        between their images."""
        for a, (dom_a, img_a) in enumerate(self.entries):
            for b, (dom_b, img_b) in enumerate(self.entries):
                for e in enumerate_embeddings(dom_a, dom_b):
                    if not is_embedding(img_a, img_b, e.map):
                        raise InputError(
                            f"table violates embedding-consistency between "
                            f"entries {a} and {b} via map {e.map}")

    def image_of(self, A: Structure) -> Optional[Structure]:
        """Image of a structure isomorphic to a domain entry, relabelled to
        A's vertices; None when no entry matches."""
        for dom, img in self.entries:
            if dom.n != A.n:
                continue
            emb = enumerate_embeddings(dom, A)
            if emb:
                e = emb[0]
                rel = {name: [e.apply(t) for t in img.tuples(name)]
                       for name in self.target.names}
                return Structure.make(self.target, A.n, rel)
        return None

    @staticmethod
    def from_function(carrier: Signature, target: Signature, max_n: int,
                      fn: Callable[[Structure], Structure],
                      domain_predicate: Optional[Callable[[Structure], bool]] = None,
                      force: bool = False) -> "FunctorTable":
        entries = []
        for n in range(1, max_n + 1):
            for A in enumerate_structures(carrier, n, up_to_iso=True, force=force):
                if domain_predicate is not None and not domain_predicate(A):
                    continue
                entries.append((A, fn(A)))
        return FunctorTable(carrier, target, tuple(entries))


def synthesize_definition(table: FunctorTable) -> QfDefinition:
    """A definition whose reduct reproduces the table on its domain.

    Per target symbol R the formula is the disjunction, over table entries
    whose image has a spanning R-tuple, of the characteristic formula of
    the domain entry at each spanning R-tuple.  An empty disjunction is
    rendered as an always-false formula of R's arity.
    """
    table.check_embedding_consistency()
    formulas = {}
    for name, r in table.target.symbols:
        disjuncts = []
        for dom, img in table.entries:
            for t in img.tuples(name):
                if set(t) == set(range(dom.n)):
                    disjuncts.append(characteristic_formula(dom, t))
        formulas[name] = disj(disjuncts) if disjuncts else bottom_of_arity(r)
    return QfDefinition.make(table.target, table.carrier, formulas)


def weak_extension(table: FunctorTable, A: Structure) -> Structure:
    """Minimal embedding-consistent extension of the tabulated map.

    A tuple is in R of the result exactly when some domain entry embeds
    into A carrying an R-tuple of its image onto it.  The domain listing
    must be closed under induced substructures among listed sizes.
    """
    if A.signature != table.carrier:
        raise InputError("structure signature does not match the table carrier")
    _check_domain_hereditary(table)
    out: dict[str, set] = {name: set() for name in table.target.names}
    for dom, img in table.entries:
        if dom.n > A.n:
            continue
        for e in enumerate_embeddings(dom, A):
            for name in table.target.names:
                for t in img.tuples(name):
                    out[name].add(e.apply(t))
    return Structure.make(table.target, A.n, out)


def _check_domain_hereditary(table: FunctorTable) -> None:
    keys = {canonical_key(dom) for dom, _ in table.entries}
    for dom, _ in table.entries:
        for v in range(dom.n):
            sub = induced_substructure(dom, set(range(dom.n)) - {v})
            if sub.n >= 1 and canonical_key(sub) not in keys:
                raise InputError(
                    "table domain is not closed under induced substructures: "
                    f"deleting vertex {v} of {dom!r} leaves the listing")
