"""Backtracking search for base-member, forbidden-free expansions.

A compiled problem has one boolean variable per (carrier symbol, tuple).
Every constraint is grounded: reduct requirements and base axioms become
clauses or small formula trees over those variables, and each forbidden
pattern contributes one clause per injective placement.  The search
branches on variables in their fixed order, unit-propagates clauses
after every assignment, and evaluates a residual tree as soon as its
last variable gets a value, so any violation inside an assigned prefix
is caught before deeper branching.

The top level always splits on the value combinations of the first two
free variables and merges task results in a fixed order.  Thread counts
change only which tasks run concurrently, never which nodes are counted,
so certificates and statistics are identical for any thread count.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InputError, SearchBudgetExceeded
from .logic import (And, Atom, Bottom, Eq, Formula, Not, Or, Top,
                    UniversalSentence)
from .structures import Signature, Structure

UNASSIGNED = 2

KIND_REDUCT = "reduct"
KIND_AXIOM = "axiom"
KIND_FORBIDDEN = "forbidden"


@dataclass
class SearchStats:
    nodes: int = 0
    failures: dict[str, int] = field(default_factory=dict)
    wall_time: float = 0.0

    def fail(self, kind: str) -> None:
        self.failures[kind] = self.failures.get(kind, 0) + 1

    def absorb(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        for k, v in other.failures.items():
            self.failures[k] = self.failures.get(k, 0) + v

    def as_dict(self) -> dict:
        return {"nodes": self.nodes, "failures": dict(self.failures),
                "wall_time": self.wall_time}


class _Clause:
    """Satisfied when at least one listed variable takes its wanted bit."""

    __slots__ = ("lits", "kind")

    def __init__(self, lits: list[tuple[int, int]], kind: str):
        self.lits = lits
        self.kind = kind

    def holds(self, assign: bytearray) -> bool:
        return any(assign[p] == w for p, w in self.lits)


class _Tree:
    """A grounded formula tree with an expected truth value."""

    __slots__ = ("tree", "expected", "kind")

    def __init__(self, tree, expected: bool, kind: str):
        self.tree = tree
        self.expected = expected
        self.kind = kind

    def holds(self, assign: bytearray) -> bool:
        return _eval_tree(self.tree, assign) == self.expected


def _eval_tree(t, assign: bytearray) -> bool:
    if t is True or t is False:
        return t
    op = t[0]
    if op == "v":
        return assign[t[1]] == 1
    if op == "not":
        return not _eval_tree(t[1], assign)
    if op == "and":
        return all(_eval_tree(s, assign) for s in t[1])
    return any(_eval_tree(s, assign) for s in t[1])


def _ground(phi: Formula, a: Sequence[int], varpos) -> object:
    """Ground a formula at a vertex tuple, folding constants."""
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, Eq):
        return a[phi.i - 1] == a[phi.j - 1]
    if isinstance(phi, Atom):
        return ("v", varpos[(phi.symbol, tuple(a[v - 1] for v in phi.vars))])
    if isinstance(phi, Not):
        g = _ground(phi.sub, a, varpos)
        if g is True:
            return False
        if g is False:
            return True
        if g[0] == "not":
            return g[1]
        return ("not", g)
    subs = []
    absorbing = isinstance(phi, Or)
    for s in phi.subs:
        g = _ground(s, a, varpos)
        if g is absorbing:
            return absorbing
        if g is not (not absorbing):
            subs.append(g)
    if not subs:
        return not absorbing
    if len(subs) == 1:
        return subs[0]
    return ("or" if absorbing else "and", tuple(subs))


def _substitute(t, fixed: dict[int, int]):
    """Fold fixed variables out of a grounded tree."""
    if t is True or t is False:
        return t
    op = t[0]
    if op == "v":
        if t[1] in fixed:
            return fixed[t[1]] == 1
        return t
    if op == "not":
        g = _substitute(t[1], fixed)
        if isinstance(g, bool):
            return not g
        if g[0] == "not":
            return g[1]
        return ("not", g)
    absorbing = op == "or"
    subs = []
    for s in t[1]:
        g = _substitute(s, fixed)
        if g is absorbing:
            return absorbing
        if g is not (not absorbing):
            subs.append(g)
    if not subs:
        return not absorbing
    if len(subs) == 1:
        return subs[0]
    return (op, tuple(subs))


def _tree_support(t, out: set[int]) -> None:
    if t is True or t is False:
        return
    if t[0] == "v":
        out.add(t[1])
    elif t[0] == "not":
        _tree_support(t[1], out)
    else:
        for s in t[1]:
            _tree_support(s, out)


def _as_literal(t, expected: bool) -> Optional[tuple[int, int]]:
    """(position, wanted bit) when the requirement is a single literal."""
    if t is not True and t is not False:
        if t[0] == "v":
            return (t[1], 1 if expected else 0)
        if t[0] == "not" and t[1][0] == "v":
            return (t[1][1], 0 if expected else 1)
    return None


def _clause_lits(t, expected: bool) -> Optional[list[tuple[int, int]]]:
    """Literals of the requirement read as one disjunction, or None when
    it is not a disjunction of literals (after pushing negations in)."""
    lit = _as_literal(t, expected)
    if lit is not None:
        return [lit]
    op = t[0]
    if op == "not":
        return _clause_lits(t[1], not expected)
    if (op == "or" and expected) or (op == "and" and not expected):
        out: list[tuple[int, int]] = []
        for s in t[1]:
            sub = _clause_lits(s, expected)
            if sub is None:
                return None
            out.extend(sub)
        return out
    return None


class SearchProblem:
    """Grounded constraints over the expansion variables of one input."""

    def __init__(self, carrier: Signature, n: int):
        self.carrier = carrier
        self.n = n
        # vertex-major order: tuples grouped by their largest entry, then
        # by symbol, then lexicographically; search follows this order
        order = []
        for v in range(n):
            for si, (name, arity) in enumerate(carrier.symbols):
                for t in itertools.product(range(v + 1), repeat=arity):
                    if max(t, default=0) == v:
                        order.append((name, t))
        self.variables = order
        self.varpos = {vt: i for i, vt in enumerate(order)}
        self.fixed: dict[int, int] = {}
        self.unsat_kind: Optional[str] = None
        self._pending: list[tuple[str, object, bool, str]] = []
        self.constraints: list = []
        self.free: list[int] = []
        self._finalized = False

    # -- constraint intake -------------------------------------------------

    def add_requirement(self, phi: Formula, a: Sequence[int], expected: bool,
                        kind: str) -> None:
        """Require a formula grounded at a vertex tuple to have a value."""
        self._push(_ground(phi, a, self.varpos), expected, kind)

    def add_clause(self, lits: list[tuple[int, int]], kind: str) -> None:
        self._pending.append(("clause", lits, True, kind))

    def _push(self, tree, expected: bool, kind: str) -> None:
        # conjunctions split into independent constraints; negations flip
        # the expectation; what remains is a clause or a residual tree
        if tree is True or tree is False:
            if tree != expected:
                self.unsat_kind = self.unsat_kind or kind
            return
        if tree[0] == "not":
            self._push(tree[1], not expected, kind)
            return
        if tree[0] == "and" and expected:
            for s in tree[1]:
                self._push(s, True, kind)
            return
        if tree[0] == "or" and not expected:
            for s in tree[1]:
                self._push(s, False, kind)
            return
        lits = _clause_lits(tree, expected)
        if lits is not None:
            seen: dict[int, int] = {}
            for pos, want in lits:
                if seen.get(pos, want) != want:
                    return  # a variable appears with both wants: tautology
                seen[pos] = want
            self._pending.append(("clause", sorted(seen.items()), True, kind))
            return
        self._pending.append(("tree", tree, expected, kind))

    # -- propagation and scheduling -----------------------------------------

    def finalize(self) -> "SearchProblem":
        """Run assignment propagation to a fixpoint, then attach each
        surviving constraint to the last variable it mentions."""
        if self._finalized:
            return self
        self._finalized = True
        pending = self._pending
        while True:
            newly_fixed = False
            still = []
            for shape, body, expected, kind in pending:
                if self.unsat_kind is not None:
                    break
                if shape == "clause":
                    lits = []
                    sat = False
                    for p, w in body:
                        if p in self.fixed:
                            if self.fixed[p] == w:
                                sat = True
                                break
                        else:
                            lits.append((p, w))
                    if sat:
                        continue
                    if not lits:
                        self.unsat_kind = kind
                        break
                    if len(lits) == 1:
                        self.fixed[lits[0][0]] = lits[0][1]
                        newly_fixed = True
                        continue
                    still.append(("clause", lits, True, kind))
                else:
                    t = _substitute(body, self.fixed)
                    if isinstance(t, bool):
                        if t != expected:
                            self.unsat_kind = kind
                            break
                        continue
                    lit = _as_literal(t, expected)
                    if lit is not None:
                        self.fixed[lit[0]] = lit[1]
                        newly_fixed = True
                        continue
                    still.append(("tree", t, expected, kind))
            pending = still
            if self.unsat_kind is not None or not newly_fixed:
                break
        self._pending = []
        self.free = [i for i in range(len(self.variables)) if i not in self.fixed]
        nvars = len(self.variables)
        self.clauses: list[_Clause] = []
        self.clause_lits: list[tuple[tuple[int, int], ...]] = []
        self.clause_kinds: list[str] = []
        self.trees: list[_Tree] = []
        self.tree_supports: list[tuple[int, ...]] = []
        # clause_occ[pos][want] lists the clauses containing the literal
        # (pos, want): exactly those an assignment pos := 1-want can falsify
        self.clause_occ: list[tuple[list[int], list[int]]] = \
            [([], []) for _ in range(nvars)]
        self.tree_occ: list[list[int]] = [[] for _ in range(nvars)]
        if self.unsat_kind is not None:
            return self
        seen_clauses: set[tuple] = set()
        for shape, body, expected, kind in pending:
            if shape == "clause":
                key = tuple(body)
                if key in seen_clauses:
                    continue
                seen_clauses.add(key)
                ci = len(self.clauses)
                c = _Clause(tuple(body), kind)
                self.clauses.append(c)
                self.clause_lits.append(c.lits)
                self.clause_kinds.append(kind)
                self.constraints.append(c)
                for pos, want in body:
                    self.clause_occ[pos][want].append(ci)
            else:
                sup: set[int] = set()
                _tree_support(body, sup)
                ti = len(self.trees)
                t = _Tree(body, expected, kind)
                self.trees.append(t)
                self.constraints.append(t)
                self.tree_supports.append(tuple(sorted(sup)))
                for pos in sup:
                    self.tree_occ[pos].append(ti)
        return self

    @property
    def free_variables(self) -> int:
        self.finalize()
        return len(self.free)

    def _base_assignment(self) -> bytearray:
        assign = bytearray([UNASSIGNED]) * len(self.variables)
        for p, w in self.fixed.items():
            assign[p] = w
        return assign

    def _structure_from(self, assign: bytearray) -> Structure:
        rel: dict[str, list] = {name: [] for name in self.carrier.names}
        for i, (name, t) in enumerate(self.variables):
            if assign[i] == 1:
                rel[name].append(t)
        return Structure.make(self.carrier, self.n, rel)


class _Budget:
    def __init__(self, max_nodes: Optional[int], max_seconds: Optional[float]):
        self.max_nodes = max_nodes
        self.deadline = None if max_seconds is None else time.monotonic() + max_seconds
        self.total_nodes = 0  # shared across tasks; approximate under threads

    def spend(self, stats: SearchStats) -> None:
        stats.nodes += 1
        self.total_nodes += 1
        if self.max_nodes is not None and self.total_nodes > self.max_nodes:
            raise SearchBudgetExceeded("node budget exceeded", stats)
        if self.deadline is not None and (self.total_nodes & 0x3FF) == 0 \
                and time.monotonic() > self.deadline:
            raise SearchBudgetExceeded("time budget exceeded", stats)


class _Runtime:
    """Mutable per-task search state: the assignment, a trail for
    backtracking, and per-tree unassigned-support counters."""

    __slots__ = ("p", "assign", "trail", "tree_rem")

    def __init__(self, p: SearchProblem):
        self.p = p
        self.assign = p._base_assignment()
        self.trail: list[int] = []
        self.tree_rem = [len(sup) for sup in p.tree_supports]

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            pos = self.trail.pop()
            self.assign[pos] = UNASSIGNED
            for ti in self.p.tree_occ[pos]:
                self.tree_rem[ti] += 1

    def push(self, pos: int, want: int, stats: SearchStats) -> bool:
        """Assign a variable and unit-propagate to a fixpoint; on a
        conflict the failing constraint kind is recorded and the caller
        must undo to its mark."""
        p = self.p
        assign = self.assign
        trail = self.trail
        tree_rem = self.tree_rem
        tree_occ = p.tree_occ
        clause_occ = p.clause_occ
        clause_lits = p.clause_lits
        clause_kinds = p.clause_kinds
        unassigned = UNASSIGNED
        queue = [(pos, want)]
        while queue:
            q, w = queue.pop()
            cur = assign[q]
            if cur != unassigned:
                if cur != w:
                    stats.fail(KIND_AXIOM)
                    return False
                continue
            assign[q] = w
            trail.append(q)
            for ti in tree_occ[q]:
                tree_rem[ti] -= 1
                if tree_rem[ti] == 0:
                    t = p.trees[ti]
                    if not t.holds(assign):
                        stats.fail(t.kind)
                        return False
            # only clauses holding the opposite literal lose an option here
            for ci in clause_occ[q][1 - w]:
                unit = None
                open_lits = 0
                for lp, lw in clause_lits[ci]:
                    v = assign[lp]
                    if v == lw:
                        open_lits = -1
                        break
                    if v == unassigned:
                        open_lits += 1
                        unit = (lp, lw)
                        if open_lits > 1:
                            break
                if open_lits == 0:
                    stats.fail(clause_kinds[ci])
                    return False
                if open_lits == 1:
                    queue.append(unit)
        return True


def _dfs(rt: _Runtime, free: Sequence[int], idx: int,
         stats: SearchStats, budget: _Budget,
         cap: Optional[int]) -> int | Optional[bytearray]:
    """Depth-first search over free variables from position idx.

    With cap=None returns the first satisfying assignment or None; with a
    cap returns the number of satisfying leaves found, up to cap.
    """
    assign = rt.assign
    while idx < len(free) and assign[free[idx]] != UNASSIGNED:
        idx += 1
    if idx == len(free):
        return 1 if cap is not None else bytes(assign)
    var = free[idx]
    found = 0
    for value in (0, 1):
        budget.spend(stats)
        m = rt.mark()
        if rt.push(var, value, stats):
            r = _dfs(rt, free, idx + 1, stats, budget, cap)
            if cap is None:
                if r is not None:
                    return r
            else:
                found += r
                if found >= cap:
                    rt.undo(m)
                    return found
        rt.undo(m)
    return found if cap is not None else None


def _make_tasks(p: SearchProblem) -> list[tuple[int, ...]]:
    """Fixed top-level split: all value combinations of the first two free
    variables, in search order."""
    return list(itertools.product((0, 1), repeat=min(2, len(p.free))))


def _run_task(p: SearchProblem, combo: tuple[int, ...],
              budget: _Budget, cap: Optional[int]):
    stats = SearchStats()
    rt = _Runtime(p)
    for var, value in zip(p.free[:2], combo):
        budget.spend(stats)
        if not rt.push(var, value, stats):
            return (0 if cap is not None else None), stats
    r = _dfs(rt, p.free, 0, stats, budget, cap)
    return r, stats


def solve_with_stats(p: SearchProblem, max_nodes: Optional[int] = None,
                     max_seconds: Optional[float] = None,
                     threads: int = 1) -> tuple[Optional[Structure], SearchStats]:
    """First satisfying expansion in search order, with statistics.

    Results and node counts do not depend on the thread count: tasks are
    merged in a fixed order and statistics of tasks past the first
    successful one are discarded.
    """
    if threads < 1:
        raise InputError("threads must be positive")
    p.finalize()
    t0 = time.monotonic()
    stats = SearchStats()
    if p.unsat_kind is not None:
        stats.fail(p.unsat_kind)
        stats.wall_time = time.monotonic() - t0
        return None, stats
    budget = _Budget(max_nodes, max_seconds)
    tasks = _make_tasks(p)
    if not p.free:
        stats.wall_time = time.monotonic() - t0
        return p._structure_from(p._base_assignment()), stats
    if threads == 1:
        results = []
        for combo in tasks:
            r = _run_task(p, combo, budget, None)
            results.append(r)
            if r[0] is not None:
                break
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_run_task, p, combo, budget, None)
                       for combo in tasks]
            results = [f.result() for f in futures]
    solution = None
    for r, task_stats in results:
        stats.absorb(task_stats)
        if r is not None:
            solution = p._structure_from(bytearray(r))
            break
    stats.wall_time = time.monotonic() - t0
    return solution, stats


def solve(p: SearchProblem, max_nodes: Optional[int] = None,
          max_seconds: Optional[float] = None,
          threads: int = 1) -> Optional[Structure]:
    return solve_with_stats(p, max_nodes, max_seconds, threads)[0]


def count_solutions(p: SearchProblem, cap: int,
                    max_nodes: Optional[int] = None,
                    max_seconds: Optional[float] = None,
                    threads: int = 1) -> int:
    """Number of satisfying expansions, up to cap."""
    if cap < 1:
        raise InputError("cap must be at least 1")
    if threads < 1:
        raise InputError("threads must be positive")
    p.finalize()
    if p.unsat_kind is not None:
        return 0
    if not p.free:
        return 1
    budget = _Budget(max_nodes, max_seconds)
    tasks = _make_tasks(p)
    if threads == 1:
        counts = []
        total = 0
        for combo in tasks:
            r, _ = _run_task(p, combo, budget, cap - total)
            total += r
            if total >= cap:
                return cap
        return total
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_run_task, p, combo, budget, cap)
                   for combo in tasks]
        total = 0
        for f in futures:
            total += f.result()[0]
        return min(total, cap)


def compile(e, G: Structure) -> SearchProblem:
    """Ground a local expression at an input structure.

    Accepts any object with target, carrier, definition, base, and
    forbidden fields; the import-free signature avoids a module cycle.
    """
    if G.signature != e.target:
        raise InputError("input signature does not match the expression target")
    p = SearchProblem(e.carrier, G.n)
    for name, arity in e.target.symbols:
        phi = e.definition.formula(name)
        for a in itertools.product(range(G.n), repeat=arity):
            p.add_requirement(phi, a, G.has(name, a), KIND_REDUCT)
    for ax in e.base.all_axioms():
        for a in itertools.product(range(G.n), repeat=ax.arity):
            p.add_requirement(ax.body, a, True, KIND_AXIOM)
    for F in e.forbidden:
        _add_forbidden(p, F)
    return p.finalize()


def _add_forbidden(p: SearchProblem, F: Structure) -> None:
    """One clause per injective placement of a forbidden pattern: at least
    one tuple of the placement must disagree with the pattern."""
    n = p.n
    if F.n > n:
        return
    for image in itertools.permutations(range(n), F.n):
        lits = []
        for name, arity in F.signature.symbols:
            present = set(F.tuples(name))
            for t in itertools.product(range(F.n), repeat=arity):
                pos = p.varpos[(name, tuple(image[v] for v in t))]
                lits.append((pos, 0 if t in present else 1))
        p.add_clause(lits, KIND_FORBIDDEN)
