"""Local expressions: membership by expansion search, certificates, and
the expression algebra.

An expression asks, for an input structure G over the target signature,
whether some carrier structure X on the same vertices satisfies three
conditions: the definition maps X back to G, X avoids every forbidden
pattern, and X lies in the base class.  Such an X is the certificate.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

from .classes import LocalClass, enumerate_members, everything
from .errors import InputError, LogicInvariantError
from .logic import (And, Atom, Bottom, Eq, Formula, Not, Or, QfDefinition,
                    Top, UniversalSentence, apply_definition,
                    characteristic_formula, conj, format_formula,
                    formula_arity, identity_definition, reduct)
from .solver import compile as compile_problem
from .solver import count_solutions, solve_with_stats
from .structures import (ENUMERATION_GUARD, Signature, Structure,
                         canonical_form, canonical_key, is_free)


@dataclass(frozen=True)
class LocalExpression:
    """Target signature, carrier signature, definition, base class, and
    forbidden carrier patterns."""

    target: Signature
    carrier: Signature
    definition: QfDefinition
    base: LocalClass
    forbidden: tuple[Structure, ...] = ()
    name: Optional[str] = None

    def __post_init__(self):
        if self.definition.source != self.target:
            raise InputError("definition source must be the target signature")
        if self.definition.carrier != self.carrier:
            raise InputError("definition carrier must be the carrier signature")
        if self.base.signature != self.carrier:
            raise InputError("base class must live over the carrier signature")
        for f in self.forbidden:
            if f.signature != self.carrier:
                raise InputError("forbidden patterns must live over the carrier")
        for w in self._redundant_forbidden():
            warnings.warn(w)

    @property
    def window(self) -> int:
        sizes = [self.base.window]
        sizes += [f.n for f in self.forbidden]
        sizes += [formula_arity(phi) for _, phi in self.definition.formulas]
        return max(sizes + [self.target.max_arity()])

    def _redundant_forbidden(self) -> list[str]:
        out = []
        for i, f in enumerate(self.forbidden):
            if not self.base.contains(f):
                out.append(f"forbidden pattern {i} violates the base class "
                           "and is redundant")
        return out


@dataclass(frozen=True)
class Certificate:
    """A carrier expansion witnessing membership."""

    expansion: Structure


def validate(e: LocalExpression) -> list[str]:
    """Warnings for a structurally sound expression; construction already
    rejects incoherent signatures."""
    report = list(e._redundant_forbidden())
    for name, arity in e.target.symbols:
        if formula_arity(e.definition.formula(name)) > arity:
            report.append(f"definition of {name} mentions more variables "
                          f"than the symbol's arity {arity}")
    return report


def decide(e: LocalExpression, G: Structure,
           max_nodes: Optional[int] = None,
           max_seconds: Optional[float] = None,
           threads: int = 1) -> Optional[Certificate]:
    """First certificate in search order, or None when no expansion works.

    Resource limits raise; they never turn into a negative answer.
    """
    cert, _ = decide_with_stats(e, G, max_nodes, max_seconds, threads)
    return cert


def decide_with_stats(e: LocalExpression, G: Structure,
                      max_nodes: Optional[int] = None,
                      max_seconds: Optional[float] = None,
                      threads: int = 1):
    p = compile_problem(e, G)
    sol, stats = solve_with_stats(p, max_nodes, max_seconds, threads)
    return (Certificate(sol) if sol is not None else None), stats


def verify(e: LocalExpression, G: Structure, cert: Certificate) -> bool:
    """Check the three certificate conditions directly, with no search."""
    X = cert.expansion
    if X.signature != e.carrier:
        raise InputError("certificate signature does not match the carrier")
    if G.signature != e.target:
        raise InputError("input signature does not match the target")
    if X.n != G.n:
        raise InputError("certificate must be on the input's vertex set")
    return reduct(e.definition, X) == G and is_free(X, e.forbidden) \
        and e.base.contains(X)


def count_certificates(e: LocalExpression, G: Structure, cap: int,
                       max_nodes: Optional[int] = None,
                       max_seconds: Optional[float] = None) -> int:
    return count_solutions(compile_problem(e, G), cap, max_nodes, max_seconds)


def identity_expression(signature: Signature) -> LocalExpression:
    return LocalExpression(signature, signature,
                           identity_definition(signature),
                           everything(signature), (),
                           name="identity")


def subgraph_closure(pattern: Structure, base: LocalClass,
                     force: bool = False) -> tuple[Structure, ...]:
    """All base members on the pattern's vertices whose relations contain
    the pattern's tuples, one per isomorphism class.

    Forbidding these as induced patterns forbids the pattern as a
    (non-induced) sub-object among base members.
    """
    if pattern.signature != base.signature:
        raise InputError("pattern signature must match the base class")
    n = pattern.n
    slots = []
    for name, arity in pattern.signature.symbols:
        present = set(pattern.tuples(name))
        for t in itertools.product(range(n), repeat=arity):
            if t not in present:
                slots.append((name, t))
    if len(slots) > ENUMERATION_GUARD and not force:
        from .errors import ResourceLimitError
        raise ResourceLimitError(
            f"superset closure has {len(slots)} free tuple slots "
            f"(guard {ENUMERATION_GUARD}); pass force to override")
    seen: dict[tuple, Structure] = {}
    for mask in itertools.product((False, True), repeat=len(slots)):
        rel = {name: list(pattern.tuples(name)) for name in pattern.signature.names}
        for on, (name, t) in zip(mask, slots):
            if on:
                rel[name].append(t)
        X = Structure.make(pattern.signature, n, rel)
        if base.contains(X):
            k = canonical_key(X)
            if k not in seen:
                seen[k] = canonical_form(X)
    return tuple(seen[k] for k in sorted(seen))


# ---------------------------------------------------------------------------
# Expression algebra


def _rename_formula(phi: Formula, ren: dict[str, str]) -> Formula:
    if isinstance(phi, (Top, Bottom, Eq)):
        return phi
    if isinstance(phi, Atom):
        return Atom(ren[phi.symbol], phi.vars)
    if isinstance(phi, Not):
        return Not(_rename_formula(phi.sub, ren))
    if isinstance(phi, And):
        return And(tuple(_rename_formula(s, ren) for s in phi.subs))
    return Or(tuple(_rename_formula(s, ren) for s in phi.subs))


def _renamed_parts(e1: LocalExpression, e2: LocalExpression):
    ren1 = {name: f"B_{name}" for name in e1.carrier.names}
    ren2 = {name: f"C_{name}" for name in e2.carrier.names}
    sig1 = tuple((ren1[n], a) for n, a in e1.carrier.symbols)
    sig2 = tuple((ren2[n], a) for n, a in e2.carrier.symbols)
    return ren1, ren2, sig1, sig2


def _side_axioms(e: LocalExpression, ren: dict[str, str],
                 guard: Optional[Formula] = None) -> list[UniversalSentence]:
    """Base axioms and forbidden-pattern exclusions of one side, with
    symbols renamed and an optional relativizing guard conjunct."""
    out = []
    for ax in e.base.all_axioms():
        if ax.arity == 0:
            raise InputError("cannot combine a base axiom without variables")
        body = _rename_formula(ax.body, ren)
        if guard is not None:
            body = Or((Not(guard), body))
        out.append(UniversalSentence(body, ax.arity))
    for f in e.forbidden:
        chi = _rename_formula(characteristic_formula(f, tuple(range(f.n))), ren)
        if guard is not None:
            chi = And((guard, chi))
        out.append(UniversalSentence(Not(chi), f.n))
    return out


def disjoint_union(e1: LocalExpression, e2: LocalExpression) -> LocalExpression:
    """Expression whose members are the members of either input.

    The carrier tags every vertex with one of two unary markers; the base
    forces the marking to be uniform, pins the idle side's symbols empty,
    and applies each side's axioms only under its own marker.
    """
    if e1.target != e2.target:
        raise InputError("disjoint union needs a common target signature")
    if any(a == 0 for _, a in e1.target.symbols):
        raise InputError("target symbols must have positive arity")
    ren1, ren2, sig1, sig2 = _renamed_parts(e1, e2)
    carrier = Signature((("UB", 1), ("UC", 1)) + sig1 + sig2)
    ub1 = Atom("UB", (1,))
    uc1 = Atom("UC", (1,))
    formulas = {}
    for name, _ in e1.target.symbols:
        formulas[name] = Or((
            And((ub1, _rename_formula(e1.definition.formula(name), ren1))),
            And((uc1, _rename_formula(e2.definition.formula(name), ren2)))))
    definition = QfDefinition.make(e1.target, carrier, formulas)
    axioms = [
        UniversalSentence(Or((Atom("UB", (1,)), Atom("UC", (1,)))), 1),
        UniversalSentence(Not(And((Atom("UB", (1,)), Atom("UC", (2,))))), 2),
    ]
    # the idle side's symbols carry no information; pinning them empty
    # keeps the search space equal to one side's
    for (sname, sarity), marker in [(s, "UC") for s in sig1] + \
                                   [(s, "UB") for s in sig2]:
        axioms.append(UniversalSentence(
            Not(And((Atom(marker, (1,)), Atom(sname, tuple(range(1, sarity + 1)))))),
            sarity))
    axioms += _side_axioms(e1, ren1, guard=ub1)
    axioms += _side_axioms(e2, ren2, guard=uc1)
    return LocalExpression(e1.target, carrier, definition,
                           LocalClass(carrier, axioms=tuple(axioms)), (),
                           name=_combine_names("+", e1, e2))


def pullback(e1: LocalExpression, e2: LocalExpression) -> LocalExpression:
    """Expression whose members are the members of both inputs.

    Carriers are renamed apart and live side by side; the base demands
    both sides' axioms and that both definitions agree tuple by tuple, so
    either definition may serve as the result's; the first one is used.
    """
    if e1.target != e2.target:
        raise InputError("pullback needs a common target signature")
    ren1, ren2, sig1, sig2 = _renamed_parts(e1, e2)
    carrier = Signature(sig1 + sig2)
    formulas = {name: _rename_formula(e1.definition.formula(name), ren1)
                for name, _ in e1.target.symbols}
    definition = QfDefinition.make(e1.target, carrier, formulas)
    axioms = _side_axioms(e1, ren1) + _side_axioms(e2, ren2)
    for name, arity in e1.target.symbols:
        d1 = _rename_formula(e1.definition.formula(name), ren1)
        d2 = _rename_formula(e2.definition.formula(name), ren2)
        axioms.append(UniversalSentence(
            Or((And((d1, d2)), And((Not(d1), Not(d2))))), arity))
    return LocalExpression(e1.target, carrier, definition,
                           LocalClass(carrier, axioms=tuple(axioms)), (),
                           name=_combine_names("*", e1, e2))


def _combine_names(op: str, e1: LocalExpression, e2: LocalExpression):
    if e1.name and e2.name:
        return f"({e1.name} {op} {e2.name})"
    return None


def transform(e: LocalExpression, nu: QfDefinition,
              mu: QfDefinition) -> LocalExpression:
    """Conjugate an expression by an involutive pair of carrier and target
    re-definitions.

    Requires, on base members and inputs up to the window size: nu and mu
    square to the identity, and the definition commutes with the pair.
    The result accepts the mu-image of exactly the inputs e accepts.
    """
    if nu.source != e.carrier or nu.carrier != e.carrier:
        raise InputError("nu must re-define the carrier signature over itself")
    if mu.source != e.target or mu.carrier != e.target:
        raise InputError("mu must re-define the target signature over itself")
    N = max(e.window, 1)
    for n in range(1, N + 1):
        for X in enumerate_members(e.base, n):
            if reduct(nu, reduct(nu, X)) != X:
                raise LogicInvariantError(
                    f"nu is not involutive on the base member {X!r}")
            left = reduct(mu, reduct(e.definition, X))
            right = reduct(e.definition, reduct(nu, X))
            if left != right:
                raise LogicInvariantError(
                    "the definition does not commute with (nu, mu); "
                    f"witness {X!r}")
            g = reduct(e.definition, X)
            if reduct(mu, reduct(mu, g)) != g:
                raise LogicInvariantError(
                    f"mu is not involutive on {g!r}")
    definition = e.definition
    new_def = QfDefinition.make(
        e.target, e.carrier,
        {name: apply_definition(nu, apply_definition(definition, mu.formula(name)))
         for name, _ in e.target.symbols})
    new_axioms = tuple(
        UniversalSentence(apply_definition(nu, ax.body), ax.arity)
        for ax in e.base.all_axioms())
    new_forbidden = tuple(reduct(nu, f) for f in e.forbidden)
    return LocalExpression(e.target, e.carrier, new_def,
                           LocalClass(e.carrier, axioms=new_axioms),
                           new_forbidden,
                           name=f"transform({e.name})" if e.name else None)


def _is_identity_on(D: QfDefinition, name: str, arity: int) -> bool:
    return D.formula(name) == Atom(name, tuple(range(1, arity + 1)))


def render_snp(e: LocalExpression) -> str:
    """A second-order sentence over the target signature equivalent to
    membership: guessed relations, then one universal block.

    The guessed relations are the carrier symbols, except that a symbol
    the definition copies verbatim stands for the input relation itself
    and is not guessed.  The matrix conjoins the base axioms, the negated
    characteristic formula of each forbidden pattern, and a biconditional
    tying each defined relation to its input relation.  Guessed symbols
    that would shadow an input symbol are suffixed with an underscore.
    """
    target_names = {name for name, _ in e.target.symbols}
    identified = {name for name, arity in e.carrier.symbols
                  if (name, arity) in e.target.symbols
                  and _is_identity_on(e.definition, name, arity)}
    guessed = [(name, arity) for name, arity in e.carrier.symbols
               if name not in identified]
    ren = {name: name for name in identified}
    for name, _ in guessed:
        ren[name] = name + "_" if name in target_names else name
    agree = [(name, arity) for name, arity in e.target.symbols
             if name not in identified]
    k = max([1, e.base.window]
            + [f.n for f in e.forbidden]
            + [arity for _, arity in agree])
    parts: list[Formula] = []
    for ax in e.base.all_axioms():
        parts.append(_rename_formula(ax.body, ren))
    for f in e.forbidden:
        chi = characteristic_formula(f, tuple(range(f.n)))
        parts.append(Not(_rename_formula(chi, ren)))
    for name, arity in agree:
        r = Atom(name, tuple(range(1, arity + 1)))
        d = _rename_formula(e.definition.formula(name), ren)
        parts.append(Or((And((r, d)), And((Not(r), Not(d))))))
    prefix = ""
    if guessed:
        prefix = "exists " + " ".join(f"{ren[name]}:{arity}"
                                      for name, arity in guessed) + " . "
    head = "forall " + " ".join(f"x{i}" for i in range(1, k + 1)) + " . "
    return prefix + head + format_formula(conj(parts))
