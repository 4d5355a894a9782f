"""System T syntax: types, de Bruijn terms, parsing, typechecking, printing.

The core term representation is intrinsically scoped with de Bruijn indices
(index 0 is the most recently bound variable).  Named variables exist only in
the surface syntax, which the parser produces and the typechecker elaborates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Nat:
    """The base type of natural numbers."""


@dataclass(frozen=True)
class Arrow:
    domain: "Ty"
    codomain: "Ty"


Ty = Union[Nat, Arrow]

NAT = Nat()

#: Contexts are tuples of types, innermost binding first.
Ctx = tuple


def arrow(*tys: Ty) -> Ty:
    """Right-nested function type: arrow(a, b, c) = a -> (b -> c)."""
    if not tys:
        raise ValueError("arrow() needs at least one type")
    out = tys[-1]
    for ty in reversed(tys[:-1]):
        out = Arrow(ty, out)
    return out


def format_ty(ty: Ty) -> str:
    if isinstance(ty, Nat):
        return "nat"
    dom = format_ty(ty.domain)
    if isinstance(ty.domain, Arrow):
        dom = f"({dom})"
    return f"{dom} -> {format_ty(ty.codomain)}"


# ---------------------------------------------------------------------------
# Core terms (de Bruijn)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Succ:
    arg: "Term"


@dataclass(frozen=True)
class Rec:
    """Primitive recursion at the annotated motive type.

    step : nat -> motive -> motive, base : motive, arg : nat.
    """

    motive: Ty
    step: "Term"
    base: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Lam:
    domain: Ty
    body: "Term"


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


Term = Union[Var, Zero, Succ, Rec, Lam, App]


def numeral(n: int) -> Term:
    """The closed term with exactly n successors applied to zero."""
    if n < 0:
        raise ValueError("numerals are nonnegative")
    t: Term = Zero()
    for _ in range(n):
        t = Succ(t)
    return t


def numeral_value(term: Term) -> Optional[int]:
    """Inverse of numeral(); None if term is not a literal numeral."""
    n = 0
    while isinstance(term, Succ):
        n += 1
        term = term.arg
    return n if isinstance(term, Zero) else None


# ---------------------------------------------------------------------------
# Surface syntax
# ---------------------------------------------------------------------------

Pos = tuple


@dataclass(frozen=True)
class RVar:
    name: str
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class RZero:
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class RNum:
    value: int
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class RSucc:
    arg: "RawTerm"
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class RRec:
    motive: Ty
    step: "RawTerm"
    base: "RawTerm"
    arg: "RawTerm"
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class RLam:
    name: str
    domain: Ty
    body: "RawTerm"
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class RApp:
    fn: "RawTerm"
    arg: "RawTerm"
    pos: Pos = field(default=(0, 0), compare=False)


RawTerm = Union[RVar, RZero, RNum, RSucc, RRec, RLam, RApp]


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------


class ParseError(Exception):
    def __init__(self, line: int, col: int, expected: str):
        self.line = line
        self.col = col
        self.expected = expected
        super().__init__(f"{line}:{col}: expected {expected}")


class TypeCheckError(Exception):
    def __init__(self, location, expected, found):
        self.location = location
        self.expected = expected
        self.found = found
        exp = format_ty(expected) if isinstance(expected, (Nat, Arrow)) else str(expected)
        fnd = format_ty(found) if isinstance(found, (Nat, Arrow)) else str(found)
        loc = f"{location[0]}:{location[1]}: " if location else ""
        super().__init__(f"{loc}expected {exp}, found {fnd}")


class UnboundVariable(Exception):
    def __init__(self, name: str, location=None):
        self.name = name
        self.location = location
        loc = f"{location[0]}:{location[1]}: " if location else ""
        super().__init__(f"{loc}unbound variable {name}")


class ArityError(Exception):
    """A substitution is missing an assignment for a free index."""


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_KEYWORDS = frozenset({"zero", "succ", "rec", "fun", "nat"})

_TOKEN_RE = re.compile(r"->|[()\[\]:]|\d+|[A-Za-z_][A-Za-z0-9_]*|\S")

_ATOM_STARTERS = frozenset({"zero", "succ", "rec", "(", "num", "ident"})


@dataclass(frozen=True)
class _Token:
    kind: str  # "num" | "ident" | literal text for keywords and symbols
    text: str
    line: int
    col: int


def _tokenize(text: str) -> "list[_Token]":
    starts = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            starts.append(i + 1)

    def pos(offset):
        line = 0
        while line + 1 < len(starts) and starts[line + 1] <= offset:
            line += 1
        return line + 1, offset - starts[line] + 1

    tokens = []
    for m in _TOKEN_RE.finditer(text):
        line, col = pos(m.start())
        tok = m.group()
        if tok.isdigit():
            tokens.append(_Token("num", tok, line, col))
        elif tok[0].isalpha() or tok[0] == "_":
            kind = tok if tok in _KEYWORDS else "ident"
            tokens.append(_Token(kind, tok, line, col))
        elif tok in ("->", "(", ")", "[", "]", ":"):
            tokens.append(_Token(tok, tok, line, col))
        else:
            raise ParseError(line, col, f"a token (got {tok!r})")
    last_line, last_col = pos(len(text)) if text else (1, 1)
    tokens.append(_Token("eof", "", last_line, last_col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: Optional[str] = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(tok.line, tok.col, what or f"'{kind}'")
        return self.next()

    # -- types ---------------------------------------------------------

    def ty(self) -> Ty:
        left = self.ty_atom()
        if self.peek().kind == "->":
            self.next()
            return Arrow(left, self.ty())
        return left

    def ty_atom(self) -> Ty:
        tok = self.peek()
        if tok.kind == "nat":
            self.next()
            return NAT
        if tok.kind == "(":
            self.next()
            inner = self.ty()
            self.expect(")")
            return inner
        raise ParseError(tok.line, tok.col, "a type")

    # -- terms ---------------------------------------------------------

    def term(self) -> RawTerm:
        tok = self.peek()
        if tok.kind == "fun":
            self.next()
            self.expect("(")
            name = self.expect("ident", "a variable name").text
            self.expect(":")
            dom = self.ty()
            self.expect(")")
            self.expect("->")
            body = self.term()
            return RLam(name, dom, body, pos=(tok.line, tok.col))
        return self.app()

    def app(self) -> RawTerm:
        head = self.atom()
        while self.peek().kind in _ATOM_STARTERS:
            arg = self.atom()
            head = RApp(head, arg, pos=head.pos)
        return head

    def atom(self) -> RawTerm:
        tok = self.peek()
        p = (tok.line, tok.col)
        if tok.kind == "zero":
            self.next()
            return RZero(pos=p)
        if tok.kind == "num":
            self.next()
            return RNum(int(tok.text), pos=p)
        if tok.kind == "ident":
            self.next()
            return RVar(tok.text, pos=p)
        if tok.kind == "succ":
            self.next()
            return RSucc(self.atom(), pos=p)
        if tok.kind == "rec":
            self.next()
            self.expect("[")
            motive = self.ty()
            self.expect("]")
            step = self.atom()
            base = self.atom()
            arg = self.atom()
            return RRec(motive, step, base, arg, pos=p)
        if tok.kind == "(":
            self.next()
            inner = self.term()
            self.expect(")")
            return inner
        raise ParseError(tok.line, tok.col, "a term")


def parse(text: str) -> RawTerm:
    """Parse one surface-syntax term; application is left-associative."""
    p = _Parser(text)
    term = p.term()
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(tok.line, tok.col, "end of input")
    return term


# ---------------------------------------------------------------------------
# Typechecking
# ---------------------------------------------------------------------------


def typecheck(raw: RawTerm, scope=()) -> Term:
    """Elaborate a surface term into a well-typed de Bruijn term.

    scope is a sequence of (name, type) pairs, innermost binding first; the
    resulting term lives in the context of just the types.
    """
    term, _ = _synth(raw, tuple(scope))
    return term


def _synth(raw: RawTerm, scope) -> "tuple[Term, Ty]":
    if isinstance(raw, RVar):
        for i, (name, ty) in enumerate(scope):
            if name == raw.name:
                return Var(i), ty
        raise UnboundVariable(raw.name, raw.pos)
    if isinstance(raw, RZero):
        return Zero(), NAT
    if isinstance(raw, RNum):
        return numeral(raw.value), NAT
    if isinstance(raw, RSucc):
        arg, ty = _synth(raw.arg, scope)
        if ty != NAT:
            raise TypeCheckError(raw.arg.pos, NAT, ty)
        return Succ(arg), NAT
    if isinstance(raw, RRec):
        want_step = arrow(NAT, raw.motive, raw.motive)
        step, sty = _synth(raw.step, scope)
        if sty != want_step:
            raise TypeCheckError(raw.step.pos, want_step, sty)
        base, bty = _synth(raw.base, scope)
        if bty != raw.motive:
            raise TypeCheckError(raw.base.pos, raw.motive, bty)
        arg, aty = _synth(raw.arg, scope)
        if aty != NAT:
            raise TypeCheckError(raw.arg.pos, NAT, aty)
        return Rec(raw.motive, step, base, arg), raw.motive
    if isinstance(raw, RLam):
        body, bty = _synth(raw.body, ((raw.name, raw.domain),) + scope)
        return Lam(raw.domain, body), Arrow(raw.domain, bty)
    if isinstance(raw, RApp):
        fn, fty = _synth(raw.fn, scope)
        if not isinstance(fty, Arrow):
            raise TypeCheckError(raw.fn.pos, "a function type", fty)
        arg, aty = _synth(raw.arg, scope)
        if aty != fty.domain:
            raise TypeCheckError(raw.arg.pos, fty.domain, aty)
        return App(fn, arg), fty.codomain
    raise TypeError(f"not a raw term: {raw!r}")


def infer(term: Term, ctx=()) -> Ty:
    """Synthesize the type of a well-scoped de Bruijn term."""
    ctx = tuple(ctx)
    if isinstance(term, Var):
        if term.index >= len(ctx):
            raise TypeCheckError(None, "a bound variable", f"index {term.index} in context of length {len(ctx)}")
        return ctx[term.index]
    if isinstance(term, Zero):
        return NAT
    if isinstance(term, Succ):
        ty = infer(term.arg, ctx)
        if ty != NAT:
            raise TypeCheckError(None, NAT, ty)
        return NAT
    if isinstance(term, Rec):
        want_step = arrow(NAT, term.motive, term.motive)
        sty = infer(term.step, ctx)
        if sty != want_step:
            raise TypeCheckError(None, want_step, sty)
        bty = infer(term.base, ctx)
        if bty != term.motive:
            raise TypeCheckError(None, term.motive, bty)
        aty = infer(term.arg, ctx)
        if aty != NAT:
            raise TypeCheckError(None, NAT, aty)
        return term.motive
    if isinstance(term, Lam):
        return Arrow(term.domain, infer(term.body, (term.domain,) + ctx))
    if isinstance(term, App):
        fty = infer(term.fn, ctx)
        if not isinstance(fty, Arrow):
            raise TypeCheckError(None, "a function type", fty)
        aty = infer(term.arg, ctx)
        if aty != fty.domain:
            raise TypeCheckError(None, fty.domain, aty)
        return fty.codomain
    raise TypeError(f"not a term: {term!r}")


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------


def shift(term: Term, amount: int, cutoff: int = 0) -> Term:
    """Add amount to every free index >= cutoff."""
    if isinstance(term, Var):
        return Var(term.index + amount) if term.index >= cutoff else term
    if isinstance(term, Zero):
        return term
    if isinstance(term, Succ):
        return Succ(shift(term.arg, amount, cutoff))
    if isinstance(term, Rec):
        return Rec(
            term.motive,
            shift(term.step, amount, cutoff),
            shift(term.base, amount, cutoff),
            shift(term.arg, amount, cutoff),
        )
    if isinstance(term, Lam):
        return Lam(term.domain, shift(term.body, amount, cutoff + 1))
    return App(shift(term.fn, amount, cutoff), shift(term.arg, amount, cutoff))


def substitute(term: Term, subst: "Mapping[int, Term]") -> Term:
    """Simultaneous capture-free substitution for the free variables of term.

    Every free index of term must be assigned a replacement; replacements are
    shifted as they cross binders, so closed replacements are used as-is.
    """

    def go(t: Term, depth: int) -> Term:
        if isinstance(t, Var):
            if t.index < depth:
                return t
            j = t.index - depth
            if j not in subst:
                raise ArityError(f"no substitute for free index {j}")
            return shift(subst[j], depth)
        if isinstance(t, Zero):
            return t
        if isinstance(t, Succ):
            return Succ(go(t.arg, depth))
        if isinstance(t, Rec):
            return Rec(t.motive, go(t.step, depth), go(t.base, depth), go(t.arg, depth))
        if isinstance(t, Lam):
            return Lam(t.domain, go(t.body, depth + 1))
        return App(go(t.fn, depth), go(t.arg, depth))

    return go(term, 0)


def occurs_free(term: Term, index: int) -> bool:
    """Does de Bruijn index `index` occur free in term?"""
    if isinstance(term, Var):
        return term.index == index
    if isinstance(term, Zero):
        return False
    if isinstance(term, Succ):
        return occurs_free(term.arg, index)
    if isinstance(term, Rec):
        return (
            occurs_free(term.step, index)
            or occurs_free(term.base, index)
            or occurs_free(term.arg, index)
        )
    if isinstance(term, Lam):
        return occurs_free(term.body, index + 1)
    return occurs_free(term.fn, index) or occurs_free(term.arg, index)


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _binder_name(depth: int) -> str:
    q, r = divmod(depth, 26)
    return _LETTERS[r] + (str(q) if q else "")


def pretty(term: Term, free_names=()) -> str:
    """Deterministic surface syntax; parse(pretty(t)) elaborates back to t.

    Binder names are chosen by depth, numerals are re-sugared, and anything
    that is not an atom is parenthesized in argument position.
    """
    return _pp_term(term, tuple(free_names))


def _pp_term(t: Term, names) -> str:
    if isinstance(t, Lam):
        name = _binder_name(len(names))
        body = _pp_term(t.body, (name,) + names)
        return f"fun ({name} : {format_ty(t.domain)}) -> {body}"
    return _pp_app(t, names)


def _pp_app(t: Term, names) -> str:
    n = numeral_value(t)
    if n is not None:
        return "zero" if n == 0 else str(n)
    if isinstance(t, App):
        head = _pp_app(t.fn, names) if isinstance(t.fn, App) else _pp_atom(t.fn, names)
        return f"{head} {_pp_atom(t.arg, names)}"
    if isinstance(t, Succ):
        return f"succ {_pp_atom(t.arg, names)}"
    if isinstance(t, Rec):
        return (
            f"rec[{format_ty(t.motive)}] {_pp_atom(t.step, names)}"
            f" {_pp_atom(t.base, names)} {_pp_atom(t.arg, names)}"
        )
    return _pp_atom(t, names)


def _pp_atom(t: Term, names) -> str:
    n = numeral_value(t)
    if n is not None:
        return "zero" if n == 0 else str(n)
    if isinstance(t, Var):
        if t.index >= len(names):
            raise ValueError(f"free index {t.index} has no name")
        return names[t.index]
    return f"({_pp_term(t, names)})"
