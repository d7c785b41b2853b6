"""Hereditary classes presented by minimal bounds or universal sentences.

Both presentations define membership closed under induced substructures, so
every class here can be enumerated level by level: the members on n
vertices are among the one-vertex extensions of the members on n-1
vertices.  Bound mining, class algebra, and bounded locality checks all run
on top of that enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

from .errors import InputError, LogicInvariantError, ResourceLimitError
from .logic import (Not, UniversalSentence, characteristic_formula, reduct,
                    QfDefinition)
from .structures import (ENUMERATION_GUARD, Signature, Structure,
                         are_isomorphic, canonical_form, canonical_key,
                         enumerate_structures, induced_substructure, is_free)


@dataclass(frozen=True)
class LocalClass:
    """A class given by forbidden substructures, universal axioms, or both.

    An empty bound tuple (with no axioms) is the class of all structures.
    The optional tag names a family with a dedicated generator for
    brute-force enumeration; it carries no logical content.
    """

    signature: Signature
    bounds: Optional[tuple[Structure, ...]] = None
    axioms: Optional[tuple[UniversalSentence, ...]] = None
    tag: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.bounds is None and self.axioms is None:
            raise InputError("a class needs bounds or axioms")
        if self.bounds is not None:
            for b in self.bounds:
                if b.signature != self.signature:
                    raise InputError("bound signature mismatch")
                if b.n == 0:
                    raise InputError("bounds must have at least one vertex")
        if self.bounds is not None and self.axioms is not None:
            self._check_presentations_agree()

    @property
    def window(self) -> int:
        """Max of bound sizes and axiom arities."""
        sizes = [b.n for b in self.bounds or ()]
        sizes += [ax.arity for ax in self.axioms or ()]
        return max(sizes, default=0)

    def contains(self, A: Structure) -> bool:
        if A.signature != self.signature:
            raise InputError("structure signature does not match the class")
        if self.bounds is not None:
            return is_free(A, self.bounds)
        return all(ax.holds(A) for ax in self.axioms)

    def all_axioms(self) -> tuple[UniversalSentence, ...]:
        """A sentence set whose conjunction is exactly membership.

        Each bound B becomes the sentence forbidding an embedded copy,
        with one variable per vertex of B.
        """
        out = list(self.axioms or ())
        for b in self.bounds or ():
            out.append(UniversalSentence(
                Not(characteristic_formula(b, tuple(range(b.n)))), b.n))
        return tuple(out)

    def _check_presentations_agree(self) -> None:
        # the agreement check is skipped, not truncated, when the window
        # puts exhaustive enumeration past the blow-up guard
        for n in range(1, self.window + 2):
            try:
                reps = list(enumerate_structures(self.signature, n, up_to_iso=True))
            except ResourceLimitError:
                return
            for A in reps:
                by_bounds = is_free(A, self.bounds)
                by_axioms = all(ax.holds(A) for ax in self.axioms)
                if by_bounds != by_axioms:
                    raise LogicInvariantError(
                        f"bound and axiom presentations disagree on {A!r}: "
                        f"bounds say {by_bounds}, axioms say {by_axioms}")


def everything(signature: Signature) -> LocalClass:
    return LocalClass(signature, bounds=())


def _one_vertex_extensions(A: Structure, force: bool = False) -> Iterator[Structure]:
    """All structures on A's vertices plus one that restrict back to A."""
    n = A.n + 1
    new = n - 1
    slots: list[tuple[str, tuple[int, ...]]] = []
    for name, arity in A.signature.symbols:
        for t in itertools.product(range(n), repeat=arity):
            if new in t:
                slots.append((name, t))
    if len(slots) > ENUMERATION_GUARD and not force:
        raise ResourceLimitError(
            f"one-vertex extension has {len(slots)} tuple slots "
            f"(guard {ENUMERATION_GUARD}); pass force to override")
    base = {name: list(A.tuples(name)) for name in A.signature.names}
    for mask in itertools.product((False, True), repeat=len(slots)):
        rel = {name: list(ts) for name, ts in base.items()}
        for on, (name, t) in zip(mask, slots):
            if on:
                rel[name].append(t)
        yield Structure.make(A.signature, n, rel)


def enumerate_members(C: LocalClass, n: int, force: bool = False) -> list[Structure]:
    """Members of C on exactly n vertices, one per isomorphism class,
    sorted by canonical form."""
    if n < 0:
        raise InputError("n must be non-negative")
    if n == 0:
        return [Structure.make(C.signature, 0)]
    level = {canonical_key(A): canonical_form(A)
             for A in enumerate_structures(C.signature, 1, force=force)
             if C.contains(A)}
    for _ in range(n - 1):
        nxt: dict[tuple, Structure] = {}
        for A in level.values():
            for X in _one_vertex_extensions(A, force=force):
                if C.contains(X):
                    k = canonical_key(X)
                    if k not in nxt:
                        nxt[k] = canonical_form(X)
        level = nxt
    return [level[k] for k in sorted(level)]


def minimal_bounds_relative(pred: Callable[[Structure], bool],
                            ambient: LocalClass, max_n: int,
                            force: bool = False) -> tuple[Structure, ...]:
    """Ambient members <= max_n outside pred whose proper substructures all
    satisfy pred, one per isomorphism class.

    Raises when pred is not hereditary on the explored range: a satisfying
    structure with a non-satisfying vertex-deleted substructure.
    """
    if max_n < 1:
        raise InputError("max_n must be at least 1")
    found: list[Structure] = []
    prev_pred: dict[tuple, bool] = {}
    for n in range(1, max_n + 1):
        cur_pred: dict[tuple, bool] = {}
        for A in enumerate_members(ambient, n, force=force):
            ok = bool(pred(A))
            cur_pred[canonical_key(A)] = ok
            if n == 1:
                dels_ok = True
                witness = None
            else:
                dels_ok = True
                witness = None
                for v in range(n):
                    sub = induced_substructure(A, set(range(n)) - {v})
                    if not prev_pred[canonical_key(sub)]:
                        dels_ok = False
                        witness = (A, sub)
                        break
            if ok and not dels_ok:
                raise LogicInvariantError(
                    "membership is not hereditary on the explored range: "
                    f"{witness[0]!r} satisfies it but its substructure "
                    f"{witness[1]!r} does not")
            if not ok and dels_ok:
                found.append(canonical_form(A))
        prev_pred = cur_pred
    return tuple(found)


def _reminimize(bounds: Sequence[Structure]) -> tuple[Structure, ...]:
    """Drop bounds that properly contain a smaller bound; dedup by iso."""
    uniq: dict[tuple, Structure] = {}
    for b in bounds:
        k = canonical_key(b)
        if k not in uniq:
            uniq[k] = canonical_form(b)
    keep = []
    items = sorted(uniq.items())
    for k, b in items:
        redundant = any(k2 != k and uniq[k2].n <= b.n
                        and not is_free(b, (uniq[k2],))
                        for k2 in uniq)
        if not redundant:
            keep.append(b)
    return tuple(keep)


def intersect(C1: LocalClass, C2: LocalClass) -> LocalClass:
    """Class of structures in both; bound sets merge and re-minimize,
    axiom sets concatenate."""
    if C1.signature != C2.signature:
        raise InputError("signature mismatch")
    if C1.bounds is not None and C2.bounds is not None and \
            C1.axioms is None and C2.axioms is None:
        return LocalClass(C1.signature, bounds=_reminimize(C1.bounds + C2.bounds))
    return LocalClass(C1.signature, axioms=C1.all_axioms() + C2.all_axioms())


def union_classes(C1: LocalClass, C2: LocalClass, max_n: int,
                  ambient: Optional[LocalClass] = None,
                  force: bool = False) -> LocalClass:
    """Class of structures in either, presented by bounds mined <= max_n.

    Correct presentations need max_n at least the sum of the input
    windows; smaller values are rejected.
    """
    if C1.signature != C2.signature:
        raise InputError("signature mismatch")
    need = C1.window + C2.window
    if max_n < need:
        raise InputError(
            f"max_n={max_n} is too small: the union of these classes needs "
            f"bounds up to {need} vertices")
    if ambient is None:
        ambient = everything(C1.signature)
    bounds = minimal_bounds_relative(
        lambda A: C1.contains(A) or C2.contains(A), ambient, max_n, force=force)
    return LocalClass(C1.signature, bounds=bounds)


def preimage_bounds(D: QfDefinition, target_bounds: Sequence[Structure],
                    ambient: LocalClass, max_n: int,
                    force: bool = False) -> tuple[Structure, ...]:
    """Minimal ambient structures whose reduct under D fails to avoid the
    target bounds.

    Mined directly, then cross-checked against the ambient structures whose
    reduct is isomorphic to some target bound; a mismatch means the reduct
    does not preserve embeddings on this range.
    """
    for b in target_bounds:
        if b.signature != D.source:
            raise InputError("target bound signature must match the definition source")
    if ambient.signature != D.carrier:
        raise InputError("ambient signature must match the definition carrier")
    target_bounds = tuple(target_bounds)
    mined = minimal_bounds_relative(
        lambda A: is_free(reduct(D, A), target_bounds), ambient, max_n, force=force)
    direct = []
    for n in range(1, max_n + 1):
        for A in enumerate_members(ambient, n, force=force):
            r = reduct(D, A)
            if any(are_isomorphic(r, b) for b in target_bounds):
                if all(is_free(reduct(D, induced_substructure(A, set(range(n)) - {v})),
                               target_bounds)
                       for v in range(n)):
                    direct.append(canonical_form(A))
    if {canonical_key(b) for b in mined} != {canonical_key(b) for b in direct}:
        raise LogicInvariantError(
            "preimage bounds do not all have reducts isomorphic to target "
            "bounds on this range; the definition does not act as an "
            "embedding-preserving map here")
    return mined


def is_local_up_to(pred: Callable[[Structure], bool], ambient: LocalClass,
                   N: int, max_n: int, force: bool = False) -> bool:
    """True iff on ambient structures with N < n <= max_n vertices, pred
    agrees with 'every substructure on <= N vertices satisfies pred'."""
    if max_n <= N:
        raise InputError("max_n must exceed N")
    for n in range(N + 1, max_n + 1):
        for A in enumerate_members(ambient, n, force=force):
            small_all = all(
                pred(induced_substructure(A, S))
                for k in range(1, min(N, n) + 1)
                for S in itertools.combinations(range(n), k))
            if bool(pred(A)) != small_all:
                return False
    return True
