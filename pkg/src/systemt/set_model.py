"""Set-theoretic semantics: terms evaluate to numbers and host functions.

Evaluation goes through a one-pass compilation of the term into nested Python
closures; this is the usual environment semantics, staged so that the term is
traversed once however many times the resulting value is applied.
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
    infer,
    occurs_free,
)


class SemanticsBug(AssertionError):
    """A value was used at the wrong shape; only a typechecker bug can cause this."""


@dataclass(frozen=True)
class NatV:
    value: int


class FunV:
    """A semantic function value; compared by identity, applied via .fn."""

    __slots__ = ("fn", "domain", "codomain")

    def __init__(self, fn: Callable[["SetValue"], "SetValue"], domain: Ty, codomain: Ty):
        self.fn = fn
        self.domain = domain
        self.codomain = codomain

    def __repr__(self):
        from .syntax import format_ty

        return f"FunV(<fn>, {format_ty(Arrow(self.domain, self.codomain))})"


SetValue = Union[NatV, FunV]

#: Environments are tuples of values, innermost binding first.
SetEnv = tuple

_SMALL = tuple(NatV(i) for i in range(4096))


def natv(n: int) -> NatV:
    """NatV with small values interned."""
    return _SMALL[n] if n < 4096 else NatV(n)


def value_type(v: SetValue) -> Ty:
    if isinstance(v, NatV):
        return NAT
    return Arrow(v.domain, v.codomain)


def apply_set(fn: SetValue, arg: SetValue) -> SetValue:
    if isinstance(fn, NatV):
        raise SemanticsBug("a number was applied as a function")
    return fn.fn(arg)


def lift_oracle(alpha) -> FunV:
    """Wrap a point of the Baire space as a value of type nat -> nat.

    Accepts anything callable on naturals (an Oracle or a plain function).
    """
    return FunV(lambda v: natv(alpha(v.value)), NAT, NAT)


def eval_set(term: Term, env: SetEnv = ()) -> SetValue:
    """Evaluate a well-typed term under an environment matching its context."""
    env = tuple(env)
    ctx = tuple(value_type(v) for v in env)
    return compile_set(term, ctx)(env)


def compile_set(term: Term, ctx=()) -> Callable[[SetEnv], SetValue]:
    """Compile a well-typed term into a closure over environments."""
    if isinstance(term, Var):
        i = term.index
        return lambda env: env[i]
    if isinstance(term, Zero):
        zero = _SMALL[0]
        return lambda env: zero
    if isinstance(term, Succ):
        # collapse successor chains so deep numerals cost one frame, not one each
        k = 0
        core = term
        while isinstance(core, Succ):
            k += 1
            core = core.arg
        corec = compile_set(core, ctx)
        return lambda env: natv(corec(env).value + k)
    if isinstance(term, Lam):
        dom = term.domain
        inner = (dom,) + tuple(ctx)
        cod = infer(term.body, inner)
        bodyc = compile_set(term.body, inner)
        def make(env):
            return FunV(lambda v: bodyc((v,) + env), dom, cod)
        return make
    if isinstance(term, App):
        fnc = compile_set(term.fn, ctx)
        argc = compile_set(term.arg, ctx)
        def apply(env):
            fn = fnc(env)
            if isinstance(fn, NatV):
                raise SemanticsBug("a number was applied as a function")
            return fn.fn(argc(env))
        return apply
    if isinstance(term, Rec):
        basec = compile_set(term.base, ctx)
        argc = compile_set(term.arg, ctx)
        step = term.step
        drops = _step_drops_result(step)
        if isinstance(step, Lam) and isinstance(step.body, Lam):
            # Uncurried fast path: applying a syntactic double-lambda to the
            # index and the accumulator is just evaluating its body under two
            # extra bindings.
            bodyc = compile_set(
                step.body.body, (step.body.domain, step.domain) + tuple(ctx)
            )
            if drops:
                # The step never reads the recursive result, so only the last
                # iteration matters; skipping the others is sound because
                # evaluation is pure and total.
                def run(env):
                    n = argc(env).value
                    if n == 0:
                        return basec(env)
                    return bodyc((None, natv(n - 1)) + env)
            else:
                def run(env):
                    n = argc(env).value
                    acc = basec(env)
                    for k in range(n):
                        acc = bodyc((acc, natv(k)) + env)
                    return acc
        else:
            stepc = compile_set(step, ctx)

            def run(env):
                n = argc(env).value
                acc = basec(env)
                if n:
                    fn = stepc(env).fn
                    for k in range(n):
                        acc = fn(natv(k)).fn(acc)
                return acc
        return run
    raise TypeError(f"not a term: {term!r}")


def _step_drops_result(step: Term) -> bool:
    return (
        isinstance(step, Lam)
        and isinstance(step.body, Lam)
        and not occurs_free(step.body.body, 0)
    )
