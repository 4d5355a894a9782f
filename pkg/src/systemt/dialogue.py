"""Dialogue trees and the tree-model semantics of System T.

A dialogue tree is a well-founded tree whose branch nodes carry an oracle
query and whose children are indexed by the possible answers.  Children are
represented as total functions, so trees over the full answer alphabet of
naturals stay finite objects; materialization happens only when printing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .syntax import (
    NAT,
    App,
    Arrow,
    Lam,
    Rec,
    Succ,
    Term,
    Ty,
    Var,
    Zero,
    arrow,
    format_ty,
    infer,
)

BAIRE_FN = arrow(Arrow(NAT, NAT), NAT)


class TypeMismatch(Exception):
    """A term does not have the type an operation requires."""


# ---------------------------------------------------------------------------
# Trees and oracles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    value: int


@dataclass(frozen=True)
class Branch:
    query: int
    children: Callable[[object], "DTree"]


DTree = Union[Leaf, Branch]


@dataclass(frozen=True)
class Oracle:
    """A point of the Baire space: explicit finite prefix, constant tail.

    The prefix is canonicalized by dropping trailing entries equal to the
    default, so structural equality coincides with pointwise equality.
    """

    prefix: "tuple[int, ...]" = ()
    default: int = 0

    def __post_init__(self):
        prefix = tuple(self.prefix)
        while prefix and prefix[-1] == self.default:
            prefix = prefix[:-1]
        object.__setattr__(self, "prefix", prefix)

    def lookup(self, i: int) -> int:
        return self.prefix[i] if i < len(self.prefix) else self.default

    def __call__(self, i: int) -> int:
        return self.lookup(i)

    def spec(self) -> str:
        head = ",".join(str(n) for n in self.prefix)
        return f"{head};default={self.default}" if head else f"default={self.default}"

    @classmethod
    def from_spec(cls, text: str) -> "Oracle":
        head, default = _split_spec(text)
        try:
            prefix = tuple(int(part) for part in head)
            return cls(prefix, int(default))
        except ValueError:
            raise ValueError(f"bad oracle spec {text!r}") from None


def _split_spec(text: str):
    body = text.strip()
    if ";" in body:
        head, _, tail = body.partition(";")
    else:
        head, tail = ("", body) if "default=" in body else (body, "")
    tail = tail.strip()
    if not tail.startswith("default="):
        raise ValueError(f"bad oracle spec {text!r}: missing default=")
    entries = [part.strip() for part in head.split(",") if part.strip()]
    return entries, tail[len("default="):].strip()


# ---------------------------------------------------------------------------
# The dialogue operator and monad structure
# ---------------------------------------------------------------------------


def dieval(tree: DTree, answers) -> int:
    """Run a tree against an answer source, following the answered branch."""
    while isinstance(tree, Branch):
        tree = tree.children(answers(tree.query))
    return tree.value


def kleisli(fn: Callable[[int], DTree], tree: DTree) -> DTree:
    """Graft fn onto every leaf, keeping branch nodes in place."""
    if isinstance(tree, Leaf):
        return fn(tree.value)
    children = tree.children
    return Branch(tree.query, lambda a: kleisli(fn, children(a)))


def functor_map(fn: Callable[[int], int], tree: DTree) -> DTree:
    return kleisli(lambda n: Leaf(fn(n)), tree)


def generic(tree: DTree) -> DTree:
    """Insert a query node at every leaf: the tree-model oracle argument."""
    return kleisli(lambda n: Branch(n, Leaf), tree)


# ---------------------------------------------------------------------------
# Tree-model values and evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeV:
    tree: DTree


@dataclass(frozen=True)
class DFunV:
    fn: Callable[["DialValue"], "DialValue"]


DialValue = Union[TreeV, DFunV]

DialEnv = tuple


def apply_dial(fn: DialValue, arg: DialValue) -> DialValue:
    if isinstance(fn, TreeV):
        raise TypeMismatch("a ground value was applied as a function")
    return fn.fn(arg)


def gkleisli(ty: Ty, fn: Callable[[int], DialValue], tree: DTree) -> DialValue:
    """Kleisli extension lifted pointwise through arrow types."""
    if ty == NAT:
        return TreeV(kleisli(lambda n: _as_tree(fn(n)), tree))
    cod = ty.codomain
    return DFunV(lambda s: gkleisli(cod, lambda n: apply_dial(fn(n), s), tree))


def _as_tree(v: DialValue) -> DTree:
    if not isinstance(v, TreeV):
        raise TypeMismatch("expected a ground value")
    return v.tree


def eval_dial(term: Term, env: DialEnv = ()) -> DialValue:
    """Evaluate a well-typed term in the tree model."""
    if isinstance(term, Var):
        return env[term.index]
    if isinstance(term, Zero):
        return TreeV(Leaf(0))
    if isinstance(term, Succ):
        return TreeV(functor_map(lambda n: n + 1, _as_tree(eval_dial(term.arg, env))))
    if isinstance(term, Lam):
        body = term.body
        return DFunV(lambda v: eval_dial(body, (v,) + env))
    if isinstance(term, App):
        return apply_dial(eval_dial(term.fn, env), eval_dial(term.arg, env))
    if isinstance(term, Rec):
        stepv = eval_dial(term.step, env)
        basev = eval_dial(term.base, env)
        argv = eval_dial(term.arg, env)

        def iterate(n: int) -> DialValue:
            acc = basev
            for k in range(n):
                acc = apply_dial(apply_dial(stepv, TreeV(Leaf(k))), acc)
            return acc

        return gkleisli(term.motive, iterate, _as_tree(argv))
    raise TypeError(f"not a term: {term!r}")


def dialogue_tree(term: Term) -> DTree:
    """The tree of queries a closed term of type (nat -> nat) -> nat performs."""
    ty = infer(term, ())
    if ty != BAIRE_FN:
        raise TypeMismatch(f"expected {format_ty(BAIRE_FN)}, found {format_ty(ty)}")
    out = apply_dial(eval_dial(term), DFunV(lambda s: TreeV(generic(_as_tree(s)))))
    return _as_tree(out)


# ---------------------------------------------------------------------------
# Bounded materialization
# ---------------------------------------------------------------------------


def tree_sexpr(tree: DTree, answers: int = 2, depth: int = 64) -> str:
    """Render a tree over the answer alphabet {0..answers-1}, cutting at depth.

    Subtrees past the depth bound are replaced by the marker (...).
    """
    if isinstance(tree, Leaf):
        return f"(leaf {tree.value})"
    if depth <= 0:
        return "(...)"
    kids = " ".join(
        f"({a} {tree_sexpr(tree.children(a), answers, depth - 1)})"
        for a in range(answers)
    )
    return f"(branch {tree.query} {kids})"
