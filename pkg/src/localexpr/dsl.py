"""Concrete syntax for signatures, structures, formulas, definitions,
classes, and expressions.

Documents are sequences of named declarations; later declarations may
refer to earlier ones by name.  Parsing resolves everything into the
library's objects, and printing a parsed document parses back to an equal
one.  Variable spellings are not kept: printing always writes x1, x2, ...
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .classes import LocalClass
from .errors import InputError
from .expressions import LocalExpression
from .logic import (And, Atom, Bottom, Eq, Formula, Not, Or, QfDefinition,
                    Top, UniversalSentence, format_formula, formula_arity,
                    validate_formula)
from .structures import Signature, Structure


# ---------------------------------------------------------------------------
# Tokens

_PUNCT = (":=", "<-", "{", "}", "(", ")", ";", ":", ",", "=", "!", "&",
          "|", ".")


@dataclass(frozen=True)
class _Token:
    kind: str  # "name", "int", "end", or the punctuation itself
    value: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    toks = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                toks.append(_Token(p, p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise InputError(f"line {line}, col {col}: unexpected character {c!r}")
    toks.append(_Token("end", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# Documents

Declaration = Union["SignatureDecl", "StructureDecl", "FormulaDecl",
                    "DefinitionDecl", "ClassDecl", "ExpressionDecl"]


@dataclass(frozen=True)
class SignatureDecl:
    name: str
    signature: Signature


@dataclass(frozen=True)
class StructureDecl:
    name: str
    over: str
    structure: Structure


@dataclass(frozen=True)
class FormulaDecl:
    name: str
    arity: int
    over: str
    body: Formula


@dataclass(frozen=True)
class DefinitionDecl:
    name: str
    target: str
    carrier: str
    definition: QfDefinition


@dataclass(frozen=True)
class ClassDecl:
    name: str
    over: str
    bound_names: tuple[str, ...]
    cls: LocalClass


@dataclass(frozen=True)
class ExpressionDecl:
    name: str
    target: str
    carrier: str
    definition: str
    base: str
    forbid_names: tuple[str, ...]
    expression: LocalExpression


@dataclass(frozen=True)
class DslDocument:
    decls: tuple[Declaration, ...]

    def _by_kind(self, kind) -> dict:
        return {d.name: d for d in self.decls if isinstance(d, kind)}

    def signature(self, name: str) -> Signature:
        return self._lookup(SignatureDecl, name).signature

    def structure(self, name: str) -> Structure:
        return self._lookup(StructureDecl, name).structure

    def formula(self, name: str) -> Formula:
        return self._lookup(FormulaDecl, name).body

    def definition(self, name: str) -> QfDefinition:
        return self._lookup(DefinitionDecl, name).definition

    def local_class(self, name: str) -> LocalClass:
        return self._lookup(ClassDecl, name).cls

    def expression(self, name: str) -> LocalExpression:
        return self._lookup(ExpressionDecl, name).expression

    def expression_names(self) -> tuple[str, ...]:
        return tuple(self._by_kind(ExpressionDecl))

    def _lookup(self, kind, name: str):
        d = self._by_kind(kind).get(name)
        if d is None:
            raise InputError(f"document has no {kind.__name__[:-4].lower()} "
                             f"named {name!r}")
        return d


# ---------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    # -- token plumbing

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def error(self, tok: _Token, msg: str):
        raise InputError(f"line {tok.line}, col {tok.col}: {msg}")

    def expect(self, kind: str) -> _Token:
        t = self.next()
        if t.kind != kind:
            what = "name" if kind == "name" else repr(kind)
            self.error(t, f"expected {what}, got {t.value!r}")
        return t

    def keyword(self, word: str) -> _Token:
        t = self.next()
        if t.kind != "name" or t.value != word:
            self.error(t, f"expected {word!r}, got {t.value!r}")
        return t

    def accept(self, kind: str, value: Optional[str] = None) -> Optional[_Token]:
        t = self.peek()
        if t.kind == kind and (value is None or t.value == value):
            return self.next()
        return None

    def int_value(self) -> int:
        return int(self.expect("int").value)

    # -- document

    def document(self) -> DslDocument:
        decls: list[Declaration] = []
        names: dict[tuple, Declaration] = {}

        def declare(d: Declaration, tok: _Token):
            key = (type(d), d.name)
            if key in names:
                self.error(tok, f"duplicate declaration of {d.name!r}")
            names[key] = d
            decls.append(d)

        handlers = {
            "signature": self.signature_decl,
            "structure": self.structure_decl,
            "formula": self.formula_decl,
            "definition": self.definition_decl,
            "class": self.class_decl,
            "expression": self.expression_decl,
        }
        doc = DslDocument(())
        while self.peek().kind != "end":
            t = self.peek()
            if t.kind != "name" or t.value not in handlers:
                self.error(t, "expected a declaration keyword "
                              "(signature, structure, formula, definition, "
                              "class, expression)")
            doc = DslDocument(tuple(decls))
            declare(handlers[t.value](doc), t)
        return DslDocument(tuple(decls))

    def resolve_signature(self, doc: DslDocument, tok: _Token) -> Signature:
        try:
            return doc.signature(tok.value)
        except InputError:
            self.error(tok, f"unknown signature {tok.value!r}")

    # -- declarations

    def signature_decl(self, doc: DslDocument) -> SignatureDecl:
        self.keyword("signature")
        name = self.expect("name").value
        self.expect("{")
        symbols = []
        while not self.accept("}"):
            self.keyword("rel")
            sym = self.expect("name")
            self.expect(":")
            arity = self.int_value()
            if arity < 1:
                self.error(sym, f"symbol {sym.value!r} needs positive arity")
            symbols.append((sym.value, arity))
            self.expect(";")
        return SignatureDecl(name, Signature(tuple(symbols)))

    def structure_decl(self, doc: DslDocument) -> StructureDecl:
        self.keyword("structure")
        name = self.expect("name").value
        self.keyword("over")
        sig_tok = self.expect("name")
        sig = self.resolve_signature(doc, sig_tok)
        self.expect("{")
        self.keyword("vertices")
        n = self.int_value()
        self.expect(";")
        relations: dict[str, list[tuple[int, ...]]] = {}
        while not self.accept("}"):
            sym = self.expect("name")
            if sym.value not in sig:
                self.error(sym, f"symbol {sym.value!r} is not in signature "
                                f"{sig_tok.value!r}")
            if sym.value in relations:
                self.error(sym, f"duplicate relation block for {sym.value!r}")
            self.expect("=")
            relations[sym.value] = self.tupleset(sig.arity(sym.value), sym)
            self.expect(";")
        for tuples in relations.values():
            for t in tuples:
                for v in t:
                    if v >= n:
                        raise InputError(
                            f"structure {name!r}: vertex {v} is out of "
                            f"range for {n} vertices")
        return StructureDecl(name, sig_tok.value,
                             Structure.make(sig, n, relations))

    def tupleset(self, arity: int, at: _Token) -> list[tuple[int, ...]]:
        self.expect("{")
        out = []
        while not self.accept("}"):
            self.expect("(")
            entries = [self.int_value()]
            while self.accept(","):
                entries.append(self.int_value())
            self.expect(")")
            if len(entries) != arity:
                self.error(at, f"tuple {tuple(entries)} has arity "
                               f"{len(entries)}, expected {arity}")
            out.append(tuple(entries))
        return out

    def formula_decl(self, doc: DslDocument) -> FormulaDecl:
        self.keyword("formula")
        name = self.expect("name").value
        self.expect("(")
        vars = self.var_list(paren=True)
        self.expect(")")
        self.keyword("over")
        sig_tok = self.expect("name")
        sig = self.resolve_signature(doc, sig_tok)
        self.expect(":=")
        body = self.fexpr(vars, sig)
        self.expect(";")
        return FormulaDecl(name, len(vars), sig_tok.value, body)

    def definition_decl(self, doc: DslDocument) -> DefinitionDecl:
        self.keyword("definition")
        name = self.expect("name").value
        self.expect(":")
        target_tok = self.expect("name")
        target = self.resolve_signature(doc, target_tok)
        self.expect("<-")
        carrier_tok = self.expect("name")
        carrier = self.resolve_signature(doc, carrier_tok)
        self.expect("{")
        formulas: dict[str, Formula] = {}
        while not self.accept("}"):
            sym = self.expect("name")
            if sym.value not in target:
                self.error(sym, f"symbol {sym.value!r} is not in the "
                                f"target signature {target_tok.value!r}")
            if sym.value in formulas:
                self.error(sym, f"duplicate formula for {sym.value!r}")
            self.expect("(")
            vars = self.var_list(paren=True)
            self.expect(")")
            if len(vars) != target.arity(sym.value):
                self.error(sym, f"{sym.value!r} has arity "
                                f"{target.arity(sym.value)}, "
                                f"got {len(vars)} variables")
            self.expect(":=")
            formulas[sym.value] = self.fexpr(vars, carrier)
            self.expect(";")
        missing = [s for s, _ in target.symbols if s not in formulas]
        if missing:
            raise InputError(f"definition {name!r} lacks formulas for "
                             f"{', '.join(missing)}")
        return DefinitionDecl(name, target_tok.value, carrier_tok.value,
                              QfDefinition.make(target, carrier, formulas))

    def class_decl(self, doc: DslDocument) -> ClassDecl:
        self.keyword("class")
        name = self.expect("name").value
        self.keyword("over")
        sig_tok = self.expect("name")
        sig = self.resolve_signature(doc, sig_tok)
        self.expect("{")
        bound_names: list[str] = []
        bounds: list[Structure] = []
        axioms: list[UniversalSentence] = []
        while not self.accept("}"):
            t = self.next()
            if t.kind == "name" and t.value == "bound":
                ref = self.expect("name")
                try:
                    b = doc.structure(ref.value)
                except InputError:
                    self.error(ref, f"unknown structure {ref.value!r}")
                if b.signature != sig:
                    self.error(ref, f"bound {ref.value!r} is not over "
                                    f"signature {sig_tok.value!r}")
                bound_names.append(ref.value)
                bounds.append(b)
            elif t.kind == "name" and t.value == "axiom":
                self.keyword("forall")
                vars = self.var_list(paren=False)
                self.expect(":")
                axioms.append(UniversalSentence(self.fexpr(vars, sig),
                                                len(vars)))
            else:
                self.error(t, "expected 'bound' or 'axiom'")
            self.expect(";")
        # giving both presentations is allowed; the class cross-checks
        # their agreement on construction
        cls = LocalClass(sig,
                         bounds=tuple(bounds) if bounds or not axioms else None,
                         axioms=tuple(axioms) if axioms else None)
        return ClassDecl(name, sig_tok.value, tuple(bound_names), cls)

    def expression_decl(self, doc: DslDocument) -> ExpressionDecl:
        self.keyword("expression")
        name = self.expect("name").value
        self.expect("{")
        self.keyword("target")
        target_tok = self.expect("name")
        target = self.resolve_signature(doc, target_tok)
        self.expect(";")
        self.keyword("carrier")
        carrier_tok = self.expect("name")
        carrier = self.resolve_signature(doc, carrier_tok)
        self.expect(";")
        self.keyword("definition")
        def_tok = self.expect("name")
        try:
            definition = doc.definition(def_tok.value)
        except InputError:
            self.error(def_tok, f"unknown definition {def_tok.value!r}")
        self.expect(";")
        self.keyword("base")
        base_tok = self.expect("name")
        try:
            base = doc.local_class(base_tok.value)
        except InputError:
            self.error(base_tok, f"unknown class {base_tok.value!r}")
        self.expect(";")
        self.keyword("forbid")
        self.expect("{")
        forbid_names: list[str] = []
        forbidden: list[Structure] = []
        while not self.accept("}"):
            ref = self.expect("name")
            try:
                f = doc.structure(ref.value)
            except InputError:
                self.error(ref, f"unknown structure {ref.value!r}")
            forbid_names.append(ref.value)
            forbidden.append(f)
        self.expect("}")
        expr = LocalExpression(target, carrier, definition, base,
                               tuple(forbidden), name=name)
        return ExpressionDecl(name, target_tok.value, carrier_tok.value,
                              def_tok.value, base_tok.value,
                              tuple(forbid_names), expr)

    # -- variables and formulas

    def var_list(self, paren: bool) -> list[str]:
        """Names separated by commas (inside parentheses, possibly empty)
        or just juxtaposed (after forall, at least one)."""
        vars: list[str] = []
        if paren and self.peek().kind == ")":
            return vars
        while True:
            t = self.expect("name")
            if t.value in vars:
                self.error(t, f"duplicate variable {t.value!r}")
            vars.append(t.value)
            if paren:
                if not self.accept(","):
                    return vars
            else:
                self.accept(",")
                if self.peek().kind != "name":
                    return vars

    def fexpr(self, vars: Sequence[str], sig: Signature) -> Formula:
        return self._disjunction(list(vars), sig)

    def _disjunction(self, vars: list[str], sig: Signature) -> Formula:
        subs = [self._conjunction(vars, sig)]
        while self.accept("|"):
            subs.append(self._conjunction(vars, sig))
        return subs[0] if len(subs) == 1 else Or(tuple(subs))

    def _conjunction(self, vars: list[str], sig: Signature) -> Formula:
        subs = [self._unary(vars, sig)]
        while self.accept("&"):
            subs.append(self._unary(vars, sig))
        return subs[0] if len(subs) == 1 else And(tuple(subs))

    def _var_index(self, tok: _Token, vars: list[str]) -> int:
        if tok.value not in vars:
            self.error(tok, f"unknown variable {tok.value!r}")
        return vars.index(tok.value) + 1

    def _unary(self, vars: list[str], sig: Signature) -> Formula:
        t = self.next()
        if t.kind == "!":
            return Not(self._unary(vars, sig))
        if t.kind == "(":
            inner = self._disjunction(vars, sig)
            self.expect(")")
            return inner
        if t.kind == "name":
            if t.value == "true":
                return Top()
            if t.value == "false":
                return Bottom()
            if self.accept("("):
                if t.value not in sig:
                    self.error(t, f"unknown symbol {t.value!r}")
                args = []
                if self.peek().kind != ")":
                    args.append(self._var_index(self.expect("name"), vars))
                    while self.accept(","):
                        args.append(self._var_index(self.expect("name"), vars))
                self.expect(")")
                if len(args) != sig.arity(t.value):
                    self.error(t, f"symbol {t.value!r} has arity "
                                  f"{sig.arity(t.value)}, got {len(args)} "
                                  "arguments")
                return Atom(t.value, tuple(args))
            i = self._var_index(t, vars)
            self.expect("=")
            j = self._var_index(self.expect("name"), vars)
            return Eq(i, j)
        self.error(t, f"expected a formula, got {t.value!r}")


def parse(text: str) -> DslDocument:
    return _Parser(text).document()


def parse_fexpr(text: str, signature: Signature,
                arity: Optional[int] = None) -> tuple[Formula, int]:
    """A bare formula with variables x1..xk; k defaults to the largest
    index mentioned."""
    if arity is None:
        import re
        arity = max((int(m) for m in re.findall(r"\bx([0-9]+)\b", text)),
                    default=0)
    vars = [f"x{i}" for i in range(1, arity + 1)]
    p = _Parser(text)
    phi = p.fexpr(vars, signature)
    if p.peek().kind != "end":
        p.error(p.peek(), "trailing input after the formula")
    return phi, arity


# ---------------------------------------------------------------------------
# Printer

def _var_names(k: int) -> str:
    return ", ".join(f"x{i}" for i in range(1, k + 1))


def _print_tupleset(tuples: Sequence[tuple[int, ...]]) -> str:
    body = " ".join("(" + ", ".join(str(v) for v in t) + ")" for t in tuples)
    return "{ " + body + " }" if body else "{ }"


def _print_decl(d: Declaration) -> str:
    if isinstance(d, SignatureDecl):
        lines = [f"signature {d.name} {{"]
        for sym, arity in d.signature.symbols:
            lines.append(f"  rel {sym}: {arity};")
        return "\n".join(lines + ["}"])
    if isinstance(d, StructureDecl):
        lines = [f"structure {d.name} over {d.over} {{",
                 f"  vertices {d.structure.n};"]
        for sym, _ in d.structure.signature.symbols:
            tuples = d.structure.tuples(sym)
            if tuples:
                lines.append(f"  {sym} = {_print_tupleset(tuples)};")
        return "\n".join(lines + ["}"])
    if isinstance(d, FormulaDecl):
        return (f"formula {d.name}({_var_names(d.arity)}) over {d.over} "
                f":= {format_formula(d.body)};")
    if isinstance(d, DefinitionDecl):
        lines = [f"definition {d.name}: {d.target} <- {d.carrier} {{"]
        for sym, phi in d.definition.formulas:
            arity = d.definition.source.arity(sym)
            lines.append(f"  {sym}({_var_names(arity)}) := "
                         f"{format_formula(phi)};")
        return "\n".join(lines + ["}"])
    if isinstance(d, ClassDecl):
        lines = [f"class {d.name} over {d.over} {{"]
        for ref in d.bound_names:
            lines.append(f"  bound {ref};")
        for ax in d.cls.axioms or ():
            vars = " ".join(f"x{i}" for i in range(1, ax.arity + 1))
            lines.append(f"  axiom forall {vars}: {format_formula(ax.body)};")
        return "\n".join(lines + ["}"])
    lines = [f"expression {d.name} {{",
             f"  target {d.target};",
             f"  carrier {d.carrier};",
             f"  definition {d.definition};",
             f"  base {d.base};",
             "  forbid { " + " ".join(d.forbid_names) + " }" if d.forbid_names
             else "  forbid { }"]
    return "\n".join(lines + ["}"])


def print_document(doc: DslDocument) -> str:
    return "\n\n".join(_print_decl(d) for d in doc.decls) + "\n"


def document_for_expression(e: LocalExpression, name: str) -> DslDocument:
    """A document that declares everything an expression needs, with
    generated names for the helper declarations."""
    decls: list[Declaration] = []
    sig_names: dict[Signature, str] = {}
    for sig, base_name in ((e.target, "target_sig"), (e.carrier, "carrier_sig")):
        if sig not in sig_names:
            sig_names[sig] = base_name
            decls.append(SignatureDecl(base_name, sig))
    if e.base.bounds is None and e.base.axioms is None:
        raise InputError("cannot print a class with no presentation")
    bound_names = []
    for i, b in enumerate(e.base.bounds or ()):
        bname = f"{name}_bound{i}"
        decls.append(StructureDecl(bname, sig_names[e.carrier], b))
        bound_names.append(bname)
    forbid_names = []
    for i, f in enumerate(e.forbidden):
        fname = f"{name}_forbid{i}"
        decls.append(StructureDecl(fname, sig_names[e.carrier], f))
        forbid_names.append(fname)
    base = LocalClass(e.carrier, bounds=e.base.bounds, axioms=e.base.axioms,
                      tag=e.base.tag)
    decls.append(ClassDecl(f"{name}_base", sig_names[e.carrier],
                           tuple(bound_names), base))
    decls.append(DefinitionDecl(f"{name}_def", sig_names[e.target],
                                sig_names[e.carrier], e.definition))
    expr = LocalExpression(e.target, e.carrier, e.definition, base,
                           e.forbidden, name=name)
    decls.append(ExpressionDecl(name, sig_names[e.target],
                                sig_names[e.carrier], f"{name}_def",
                                f"{name}_base", tuple(forbid_names), expr))
    return DslDocument(tuple(decls))


# ---------------------------------------------------------------------------
# Quantified sentences (the rendering produced by render_snp)

@dataclass(frozen=True)
class SnpSentence:
    """exists R1:a1 ... . forall x1 ... xk . matrix"""

    guessed: tuple[tuple[str, int], ...]
    arity: int
    matrix: Formula


def parse_snp(text: str, input_signature: Signature) -> SnpSentence:
    """Parse an existential-universal sentence whose atoms mix input
    symbols with the guessed ones declared in its prefix."""
    p = _Parser(text)
    guessed: list[tuple[str, int]] = []
    if p.peek().kind == "name" and p.peek().value == "exists":
        p.next()
        while not p.accept("."):
            sym = p.expect("name")
            p.expect(":")
            guessed.append((sym.value, p.int_value()))
    p.keyword("forall")
    vars: list[str] = []
    while not p.accept("."):
        vars.append(p.expect("name").value)
    full = Signature(input_signature.symbols + tuple(guessed))
    matrix = p.fexpr(vars, full)
    if p.peek().kind != "end":
        p.error(p.peek(), "trailing input after the sentence")
    return SnpSentence(tuple(guessed), len(vars), matrix)


def evaluate_snp(s: SnpSentence, G: Structure) -> bool:
    """Truth of the sentence in G by brute force over guessed relations."""
    from .logic import _eval
    slots: list[tuple[str, tuple[int, ...]]] = []
    for sym, arity in s.guessed:
        for t in itertools.product(range(G.n), repeat=arity):
            slots.append((sym, t))
    rel: dict[str, set] = {sym: set(G.tuples(sym))
                           for sym in G.signature.names}
    for sym, _ in s.guessed:
        rel.setdefault(sym, set())
    assignments = list(itertools.product(range(G.n), repeat=s.arity))
    matrix = s.matrix
    for mask in itertools.product((False, True), repeat=len(slots)):
        for on, (sym, t) in zip(mask, slots):
            if on:
                rel[sym].add(t)
        ok = all(_eval(matrix, rel, a) for a in assignments)
        for on, (sym, t) in zip(mask, slots):
            if on:
                rel[sym].discard(t)
        if ok:
            return True
    return False
