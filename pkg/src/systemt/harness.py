"""Differential test harness: generators, property suites, and shrinking.

Term generation is type-directed: at every site a constructor compatible with
the target type is drawn by weight, with a strictly decreasing node budget
guaranteeing termination; an exhausted budget falls back to the canonical
inhabitant of the target type.  Each suite replays one of the toolkit's
correctness properties over generated inputs and reports failures together
with a greedily shrunk witness.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import product
from typing import Callable, Optional

from . import church, dialogue, moduli
from .dialogue import BAIRE_FN, Branch, DTree, Leaf, Oracle
from .moduli import BoolOracle, embed
from .set_model import SetValue, apply_set, eval_set, lift_oracle, natv
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
    infer,
    numeral,
    parse,
    pretty,
    typecheck,
)

# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    size_budget: int = 25
    numeral_cap: int = 4
    rec_weight: int = 2
    lam_weight: int = 4
    app_weight: int = 5
    var_weight: int = 4

    def __post_init__(self):
        weights = (self.rec_weight, self.lam_weight, self.app_weight, self.var_weight)
        if any(w < 0 for w in weights) or not any(weights):
            raise ValueError("weights must be nonnegative and not all zero")


_NUMERAL_WEIGHT = 2
_SUCC_WEIGHT = 1

#: Argument types synthesized for generated applications.
_ARG_POOL = (NAT, Arrow(NAT, NAT))


def canonical(ty: Ty) -> Term:
    """The fallback inhabitant: zero at nat, constant functions at arrows."""
    if ty == NAT:
        return Zero()
    return Lam(ty.domain, canonical(ty.codomain))


def _ty_size(ty: Ty) -> int:
    if ty == NAT:
        return 1
    return 1 + _ty_size(ty.domain) + _ty_size(ty.codomain)


def _mix(seed: int, salt: int) -> int:
    return (seed * 1_000_003 + salt) & 0x7FFFFFFFFFFFFFFF


def gen_term(cfg: GenConfig, target: Ty, ctx=()) -> Term:
    """A well-typed term of the target type, deterministic in the seed."""
    rng = random.Random(cfg.seed)
    budget = [cfg.size_budget]
    return _gen(rng, cfg, budget, target, tuple(ctx))


def _gen(rng, cfg, budget, target, ctx) -> Term:
    if budget[0] <= 0:
        return canonical(target)
    budget[0] -= 1

    choices = []
    var_sites = [i for i, ty in enumerate(ctx) if ty == target]
    if var_sites:
        choices.append(("var", cfg.var_weight))
    if budget[0] >= 4 and _ty_size(target) <= 8:
        # app and rec fan out into children at larger types; unchecked, the
        # fallback inhabitants of those types would swamp the node budget
        choices.append(("app", cfg.app_weight))
        choices.append(("rec", cfg.rec_weight))
    if target == NAT:
        choices.append(("num", _NUMERAL_WEIGHT))
        choices.append(("succ", _SUCC_WEIGHT))
    else:
        choices.append(("lam", cfg.lam_weight))

    kinds = [k for k, w in choices for _ in range(w)]
    kind = rng.choice(kinds)

    if kind == "var":
        return Var(rng.choice(var_sites))
    if kind == "num":
        n = rng.randint(0, max(0, min(cfg.numeral_cap, budget[0])))
        budget[0] -= n
        return numeral(n)
    if kind == "succ":
        return Succ(_gen(rng, cfg, budget, NAT, ctx))
    if kind == "lam":
        body = _gen(rng, cfg, budget, target.codomain, (target.domain,) + ctx)
        return Lam(target.domain, body)
    if kind == "app":
        arg_ty = rng.choice(_ARG_POOL)
        # prefer a variable head when one fits: generated functionals should
        # mostly exercise what they bind rather than fresh constant functions
        heads = [
            (i, dom)
            for i, ty in enumerate(ctx)
            if isinstance(ty, Arrow) and ty.codomain == target
            for dom in [ty.domain]
            if dom in _ARG_POOL
        ]
        if heads and rng.random() < 0.75:
            i, arg_ty = rng.choice(heads)
            return App(Var(i), _gen(rng, cfg, budget, arg_ty, ctx))
        fn = _gen(rng, cfg, budget, Arrow(arg_ty, target), ctx)
        arg = _gen(rng, cfg, budget, arg_ty, ctx)
        return App(fn, arg)
    # rec at the target motive
    step = _gen(rng, cfg, budget, arrow(NAT, target, target), ctx)
    base = _gen(rng, cfg, budget, target, ctx)
    arg = _gen(rng, cfg, budget, NAT, ctx)
    return Rec(target, step, base, arg)


def gen_oracle(cfg: GenConfig) -> Oracle:
    """A Baire point with prefix length in [0, 16] and entries in [0, 10]."""
    rng = random.Random(cfg.seed)
    prefix = tuple(rng.randint(0, 10) for _ in range(rng.randint(0, 16)))
    return Oracle(prefix, rng.randint(0, 10))


def gen_tree(cfg: GenConfig, depth: int = 4) -> DTree:
    """A finite random tree; children vary over a few answers, then repeat."""
    rng = random.Random(cfg.seed)

    def go(d):
        if d == 0 or rng.random() < 0.3:
            return Leaf(rng.randint(0, 12))
        query = rng.randint(0, 12)
        width = rng.randint(1, 3)
        kids = tuple(go(d - 1) for _ in range(width + 1))

        def children(a, kids=kids, width=width):
            return kids[a] if isinstance(a, int) and a < width else kids[width]

        return Branch(query, children)

    return go(depth)


# ---------------------------------------------------------------------------
# The fixed term corpus
# ---------------------------------------------------------------------------

CORPUS = (
    ("const7", "fun (a : nat -> nat) -> 7"),
    ("a4", "fun (a : nat -> nat) -> a 4"),
    ("aa2", "fun (a : nat -> nat) -> a (a 2)"),
    ("a0", "fun (a : nat -> nat) -> a 0"),
    ("aaa0", "fun (a : nat -> nat) -> a (a (a 0))"),
    ("succs", "fun (a : nat -> nat) -> succ (succ (a (succ (a 3))))"),
    ("letlike", "fun (a : nat -> nat) -> (fun (b : nat) -> succ (a b)) (a 5)"),
    (
        "addrec",
        "fun (a : nat -> nat) -> rec[nat] (fun (i : nat) -> fun (r : nat) -> succ r) (a 1) (a 2)",
    ),
    (
        "chase",
        "fun (a : nat -> nat) -> rec[nat] (fun (i : nat) -> fun (r : nat) -> a r) 3 (a 0)",
    ),
    (
        "compose",
        "fun (a : nat -> nat) -> rec[nat -> nat]"
        " (fun (i : nat) -> fun (g : nat -> nat) -> fun (x : nat) -> a (g x))"
        " (fun (x : nat) -> x) 2 7",
    ),
)


@lru_cache(maxsize=None)
def corpus_terms() -> "tuple[Term, ...]":
    return tuple(typecheck(parse(src)) for _, src in CORPUS)


# ---------------------------------------------------------------------------
# Reports and shrinking
# ---------------------------------------------------------------------------


@dataclass
class Failure:
    term: Optional[str]
    oracle: Optional[str]
    detail: str


@dataclass
class Report:
    suite: str
    cases: int
    failures: "list[Failure]" = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        state = "ok" if self.passed else f"{len(self.failures)} FAILED"
        return f"{self.suite}: {self.cases} cases, {self.seconds:.1f}s [{state}]"


def _subterm_sites(term: Term, ctx=()):
    """Yield (path, subterm, type-in-context) for every proper position."""

    def walk(t, ctx, path):
        yield path, t, ctx
        if isinstance(t, Succ):
            yield from walk(t.arg, ctx, path + ("arg",))
        elif isinstance(t, Rec):
            yield from walk(t.step, ctx, path + ("step",))
            yield from walk(t.base, ctx, path + ("base",))
            yield from walk(t.arg, ctx, path + ("arg",))
        elif isinstance(t, Lam):
            yield from walk(t.body, (t.domain,) + ctx, path + ("body",))
        elif isinstance(t, App):
            yield from walk(t.fn, ctx, path + ("fn",))
            yield from walk(t.arg, ctx, path + ("arg",))

    yield from walk(term, tuple(ctx), ())


def _replace_at(term: Term, path, new: Term) -> Term:
    if not path:
        return new
    key, rest = path[0], path[1:]
    if isinstance(term, Succ):
        return Succ(_replace_at(term.arg, rest, new))
    if isinstance(term, Rec):
        parts = {"step": term.step, "base": term.base, "arg": term.arg}
        parts[key] = _replace_at(parts[key], rest, new)
        return Rec(term.motive, parts["step"], parts["base"], parts["arg"])
    if isinstance(term, Lam):
        return Lam(term.domain, _replace_at(term.body, rest, new))
    if isinstance(term, App):
        if key == "fn":
            return App(_replace_at(term.fn, rest, new), term.arg)
        return App(term.fn, _replace_at(term.arg, rest, new))
    raise ValueError(f"bad path {path!r} into {term!r}")


def shrink_term(term: Term, still_fails: Callable[[Term], bool]) -> Term:
    """Greedily replace subterms with canonical inhabitants while the failure
    reproduces.  Candidates are well-typed by construction; nothing else is
    assumed about them."""
    improved = True
    while improved:
        improved = False
        for path, sub, ctx in _subterm_sites(term):
            ty = infer(sub, ctx)
            replacement = canonical(ty)
            if sub == replacement:
                continue
            candidate = _replace_at(term, path, replacement)
            try:
                failing = still_fails(candidate)
            except Exception:
                failing = False
            if failing:
                term = candidate
                improved = True
                break
    return term


# ---------------------------------------------------------------------------
# Sampled hereditarily extensional equality
# ---------------------------------------------------------------------------


def hee_check(shape: Ty, a: SetValue, b: SetValue, samples: int = 50, seed: int = 0) -> bool:
    """Sampled extensional comparison at shapes nat | nat -> sigma.

    Exact at nat; at arrows it samples arguments in [0, 50] and recurses, so a
    False answer is a genuine refutation while True is only sampled evidence.
    """
    rng = random.Random(seed)
    return _hee(shape, a, b, samples, rng)


def _hee(shape, a, b, samples, rng):
    if shape == NAT:
        return a.value == b.value
    if not (isinstance(shape, Arrow) and shape.domain == NAT):
        raise ValueError(f"hee_check is restricted to shapes nat | nat -> sigma, got {shape}")
    for _ in range(samples):
        n = natv(rng.randint(0, 50))
        if not _hee(shape.codomain, apply_set(a, n), apply_set(b, n), samples, rng):
            return False
    return True


# ---------------------------------------------------------------------------
# Definable probes for comparing values at translated types
# ---------------------------------------------------------------------------


def handler_battery(motive: Ty):
    """Leaf/branch handler pairs of type (nat -> A) and ((nat -> A) -> nat -> A),
    all definable, for observing encoded-tree values at motive A."""
    leaf_srcs, branch_srcs = _battery_sources(motive)
    leafs = [eval_set(typecheck(parse(s))) for s in leaf_srcs]
    branches = [eval_set(typecheck(parse(s))) for s in branch_srcs]
    return [(e, b) for e in leafs for b in branches]


def _battery_sources(motive: Ty):
    if motive == NAT:
        return (
            ["fun (z : nat) -> z", "fun (z : nat) -> succ (succ z)"],
            [
                "fun (g : nat -> nat) -> fun (x : nat) -> g x",
                "fun (g : nat -> nat) -> fun (x : nat) -> g (succ x)",
                "fun (g : nat -> nat) -> fun (x : nat) -> succ (g (g x))",
            ],
        )
    if motive == Arrow(NAT, NAT):
        return (
            ["fun (z : nat) -> fun (w : nat) -> z", "fun (z : nat) -> fun (w : nat) -> succ z"],
            [
                "fun (g : nat -> nat -> nat) -> fun (x : nat) -> fun (w : nat) -> g x w",
                "fun (g : nat -> nat -> nat) -> fun (x : nat) -> fun (w : nat) -> g (g x w) x",
            ],
        )
    if motive == BAIRE_FN:
        return (
            [
                "fun (z : nat) -> fun (u : nat -> nat) -> z",
                "fun (z : nat) -> fun (u : nat -> nat) -> u z",
            ],
            [
                "fun (g : nat -> (nat -> nat) -> nat) -> fun (x : nat) -> fun (u : nat -> nat) -> g (u x) u",
                "fun (g : nat -> (nat -> nat) -> nat) -> fun (x : nat) -> fun (u : nat -> nat) -> g x u",
            ],
        )
    raise ValueError(f"no handler battery for motive {motive}")


def values_agree(ty: Ty, a: SetValue, b: SetValue, rng: random.Random, depth: int = 3) -> bool:
    """Compare two values extensionally at ty by probing with definable points."""
    if ty == NAT:
        return a.value == b.value
    for probe in _probes(ty.domain, rng, depth):
        if not values_agree(ty.codomain, apply_set(a, probe), apply_set(b, probe), rng, depth):
            return False
    return True


def _probes(ty: Ty, rng: random.Random, depth: int):
    if ty == NAT:
        return [natv(rng.randint(0, 20)) for _ in range(depth)]
    if ty == Arrow(NAT, NAT):
        specs = [Oracle((rng.randint(0, 9),), rng.randint(0, 9)) for _ in range(depth)]
        return [lift_oracle(o) for o in specs]
    cfg = GenConfig(seed=rng.randint(0, 2**32), size_budget=8)
    return [eval_set(gen_term(cfg, ty))]


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

SUITE_IDS = (
    "thm16",
    "lem36",
    "thm37",
    "lem40",
    "lem44",
    "thm45",
    "lem50",
    "lem54",
    "thm55",
)

_TREE_SUITES = frozenset({"lem36"})


def run_suite(
    which: str,
    cfg: GenConfig = GenConfig(),
    n_terms: int = 100,
    n_oracles: int = 20,
    extra_terms=(),
) -> Report:
    """Run one property suite over generated inputs plus any extra terms.

    For the tree-based suite (lem36) n_terms counts generated trees.  Failing
    cases are recorded with a shrunk term and the oracle that witnessed them.
    """
    if which not in SUITE_IDS:
        raise ValueError(f"unknown suite {which!r}; pick one of {', '.join(SUITE_IDS)}")
    started = time.perf_counter()
    oracles = [gen_oracle(replace(cfg, seed=_mix(cfg.seed, 7919 + i))) for i in range(n_oracles)]
    report = Report(suite=which, cases=0)
    if which in _TREE_SUITES:
        trees = [gen_tree(replace(cfg, seed=_mix(cfg.seed, i))) for i in range(n_terms)]
        _run_tree_suite(which, report, trees, oracles)
    else:
        terms = list(extra_terms)
        terms += [
            gen_term(replace(cfg, seed=_mix(cfg.seed, i)), BAIRE_FN) for i in range(n_terms)
        ]
        _run_term_suite(which, report, terms, oracles, cfg)
    report.seconds = time.perf_counter() - started
    return report


def _run_tree_suite(which, report, trees, oracles):
    df = eval_set(church.dialogue_f_int())
    for d in trees:
        enc_b = church.encode(d, BAIRE_FN)
        for alpha in oracles:
            report.cases += 1
            lhs = dialogue.dieval(d, alpha)
            rhs = apply_set(apply_set(df, enc_b), lift_oracle(alpha)).value
            if lhs != rhs:
                report.failures.append(
                    Failure(None, alpha.spec(), f"dieval {lhs} != internal dialogue {rhs}")
                )


def _term_check(which, cfg):
    """Per-term case builder: term -> (oracle -> (ok, detail))."""
    if which == "thm16":

        def check(term):
            tv = eval_set(term)
            d = dialogue.dialogue_tree(term)

            def case(alpha):
                lhs = apply_set(tv, lift_oracle(alpha)).value
                rhs = dialogue.dieval(d, alpha)
                return lhs == rhs, f"set model {lhs} != dialogue {rhs}"

            return case

        return check

    if which == "thm37":
        df = church.dialogue_f_int()

        def check(term):
            tv = eval_set(term)
            internal = eval_set(App(df, church.dialogue_tree_int(term, BAIRE_FN)))

            def case(alpha):
                a = lift_oracle(alpha)
                lhs = apply_set(tv, a).value
                rhs = apply_set(internal, a).value
                return lhs == rhs, f"set model {lhs} != internal dialogue {rhs}"

            return case

        return check

    if which == "lem40":
        mqi = eval_set(moduli.max_question_int())

        def check(term):
            d = dialogue.dialogue_tree(term)
            enc = church.encode(d, NAT)
            folded = apply_set(mqi, enc)

            def case(alpha):
                lhs = moduli.max_question(d, alpha)
                rhs = apply_set(folded, lift_oracle(alpha)).value
                if lhs != rhs:
                    return False, f"max question: external {lhs} != internal {rhs}"
                lhs_m = moduli.modulus(d, alpha)
                if lhs_m != rhs + 1:
                    return False, f"modulus: external {lhs_m} != internal {rhs + 1}"
                return True, ""

            return case

        return check

    if which == "lem44":
        mqi = moduli.max_question_int()
        mi = moduli.modulus_int()

        def check(term):
            d = dialogue.dialogue_tree(term)
            dti = church.dialogue_tree_int(term, NAT)
            maxq_v = eval_set(App(mqi, dti))
            mod_v = eval_set(App(mi, dti))

            def case(alpha):
                a = lift_oracle(alpha)
                ext_q = moduli.max_question(d, alpha)
                int_q = apply_set(maxq_v, a).value
                if ext_q != int_q:
                    return False, f"max question: external {ext_q} != internal {int_q}"
                ext_m = moduli.modulus(d, alpha)
                int_m = apply_set(mod_v, a).value
                if ext_m != int_m:
                    return False, f"modulus: external {ext_m} != internal {int_m}"
                return True, ""

            return case

        return check

    if which == "thm45":
        mi = moduli.modulus_int()

        def check(term):
            tv = eval_set(term)
            mod_v = eval_set(App(mi, church.dialogue_tree_int(term, NAT)))

            def case(alpha):
                rng = random.Random(_mix(cfg.seed, hash((alpha.prefix, alpha.default)) & 0xFFFF))
                m = apply_set(mod_v, lift_oracle(alpha)).value
                want = apply_set(tv, lift_oracle(alpha)).value
                for _ in range(50):
                    beta = agreeing_oracle(alpha, m, rng)
                    got = apply_set(tv, lift_oracle(beta)).value
                    if got != want:
                        return False, (
                            f"modulus {m} not respected: value {want} at {alpha.spec()}"
                            f" but {got} at {beta.spec()}"
                        )
                return True, ""

            return case

        return check

    raise ValueError(which)


def agreeing_oracle(alpha: Oracle, m: int, rng: random.Random) -> Oracle:
    """An oracle agreeing with alpha on [0, m), arbitrary afterwards."""
    prefix = tuple(alpha(i) for i in range(m))
    tail = tuple(rng.randint(0, 10) for _ in range(rng.randint(0, 8)))
    return Oracle(prefix + tail, rng.randint(0, 10))


def _run_term_suite(which, report, terms, oracles, cfg):
    if which in ("lem50", "lem54", "thm55"):
        return _run_uniform_suite(which, report, terms, cfg)
    check = _term_check(which, cfg)
    for term in terms:
        case = check(term)
        for alpha in oracles:
            report.cases += 1
            ok, detail = case(alpha)
            if not ok:
                report.failures.append(_shrunk_failure(which, cfg, term, alpha, detail))


def _shrunk_failure(which, cfg, term, alpha, detail) -> Failure:
    def still_fails(candidate):
        ok, _ = _term_check(which, cfg)(candidate)(alpha)
        return not ok

    small = shrink_term(term, still_fails)
    return Failure(pretty(small), alpha.spec(), detail)


def _run_uniform_suite(which, report, terms, cfg):
    mbqi = eval_set(moduli.max_bool_question_int())
    mui = moduli.modulus_uni_int()
    for term in terms:
        report.cases += 1
        d = dialogue.dialogue_tree(term)
        pruned = moduli.prune(d)
        ext_q = moduli.max_bool_question(pruned)
        detail = None
        if which == "lem50":
            int_q = apply_set(mbqi, church.encode(d, NAT)).value
            if ext_q != int_q:
                detail = f"uniform max question: external {ext_q} != internal {int_q}"
        elif which == "lem54":
            int_q = eval_set(App(moduli.max_bool_question_int(), church.dialogue_tree_int(term, NAT))).value
            if ext_q != int_q:
                detail = f"uniform max question: external {ext_q} != internal {int_q}"
        else:  # thm55
            m = eval_set(App(mui, church.dialogue_tree_int(term, NAT))).value
            if m != 1 + ext_q:
                detail = f"uniform modulus {m} != 1 + tree max {ext_q}"
            else:
                detail = _check_uniform_continuity(term, m, cfg)
        if detail is not None:
            report.failures.append(_uniform_failure(which, cfg, term, detail))
    return report


def _check_uniform_continuity(term, m, cfg) -> Optional[str]:
    """All Cantor points agreeing on [0, m) must give equal values: exhaustive
    over the 2^m prefixes when m <= 12, sampled otherwise."""
    tv = eval_set(term)
    rng = random.Random(_mix(cfg.seed, 104729))

    def value_at(bo: BoolOracle) -> int:
        return apply_set(tv, lift_oracle(embed(bo))).value

    def check_prefix(bits) -> Optional[str]:
        pair = []
        for _ in range(2):
            tail = tuple(rng.random() < 0.5 for _ in range(rng.randint(0, 6)))
            pair.append(BoolOracle(bits + tail, rng.random() < 0.5))
        v1, v2 = value_at(pair[0]), value_at(pair[1])
        if v1 != v2:
            return (
                f"uniform modulus {m} not respected:"
                f" {v1} at {pair[0].spec()} vs {v2} at {pair[1].spec()}"
            )
        return None

    if m <= 12:
        for bits in product((False, True), repeat=m):
            bad = check_prefix(bits)
            if bad:
                return bad
    else:
        for _ in range(200):
            bits = tuple(rng.random() < 0.5 for _ in range(m))
            bad = check_prefix(bits)
            if bad:
                return bad
    return None


def _uniform_failure(which, cfg, term, detail) -> Failure:
    def still_fails(candidate):
        probe = Report(suite=which, cases=0)
        _run_uniform_suite(which, probe, [candidate], cfg)
        return not probe.passed

    small = shrink_term(term, still_fails)
    return Failure(pretty(small), None, detail)
