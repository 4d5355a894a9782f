"""Command-line surface: check, eval, tree, translate, modulus, umodulus, selftest.

Exit codes: 0 on success, 1 on parse/type errors, 2 on a selftest or
verification failure.
"""

from __future__ import annotations

import argparse
import random
import sys

from . import church, harness, moduli
from .dialogue import BAIRE_FN, Oracle, TypeMismatch, dialogue_tree, tree_sexpr
from .set_model import apply_set, eval_set, lift_oracle
from .syntax import App, NAT, ParseError, Term, TypeCheckError, UnboundVariable, format_ty, infer, parse, pretty, typecheck

#: Per-suite (terms-or-trees, oracles) scales of the default selftest run.
SELFTEST_SCALES = {
    "thm16": (500, 20),
    "lem36": (200, 20),
    "thm37": (500, 20),
    "lem40": (500, 20),
    "lem44": (500, 20),
    "thm45": (500, 10),
    "lem50": (500, 0),
    "lem54": (500, 0),
    "thm55": (500, 0),
}

_MOTIVES = {"nat": NAT, "baire": BAIRE_FN}


def _load_term(path: str) -> Term:
    with open(path, encoding="utf-8") as handle:
        return typecheck(parse(handle.read()))


def _require_baire_fn(term: Term) -> None:
    ty = infer(term, ())
    if ty != BAIRE_FN:
        raise TypeMismatch(f"expected {format_ty(BAIRE_FN)}, found {format_ty(ty)}")


def cmd_check(args) -> int:
    term = _load_term(args.file)
    print(format_ty(infer(term, ())))
    return 0


def cmd_eval(args) -> int:
    term = _load_term(args.file)
    _require_baire_fn(term)
    alpha = Oracle.from_spec(args.oracle)
    print(apply_set(eval_set(term), lift_oracle(alpha)).value)
    return 0


def cmd_tree(args) -> int:
    term = _load_term(args.file)
    print(tree_sexpr(dialogue_tree(term), answers=args.answers, depth=args.depth))
    return 0


def cmd_translate(args) -> int:
    term = _load_term(args.file)
    print(pretty(church.dialogue_tree_int(term, _MOTIVES[args.motive])))
    return 0


def cmd_modulus(args) -> int:
    term = _load_term(args.file)
    _require_baire_fn(term)
    alpha = Oracle.from_spec(args.oracle)
    mod_v = eval_set(App(moduli.modulus_int(), church.dialogue_tree_int(term, NAT)))
    m = apply_set(mod_v, lift_oracle(alpha)).value
    print(m)
    if args.verify:
        tv = eval_set(term)
        want = apply_set(tv, lift_oracle(alpha)).value
        rng = random.Random(args.seed)
        for i in range(args.verify):
            beta = harness.agreeing_oracle(alpha, m, rng)
            got = apply_set(tv, lift_oracle(beta)).value
            if got != want:
                print(f"disagreement at {beta.spec()}: {got} != {want}")
                return 2
        print(f"verified: {args.verify} sampled points agreeing to {m} give {want}")
    return 0


def cmd_umodulus(args) -> int:
    term = _load_term(args.file)
    _require_baire_fn(term)
    print(eval_set(App(moduli.modulus_uni_int(), church.dialogue_tree_int(term, NAT))).value)
    return 0


def cmd_selftest(args) -> int:
    suites = [args.suite] if args.suite else list(harness.SUITE_IDS)
    cfg = harness.GenConfig(seed=args.seed)
    corpus = harness.corpus_terms()
    failed = False
    for suite in suites:
        n_terms, n_oracles = SELFTEST_SCALES[suite]
        if args.terms is not None:
            n_terms = args.terms
        if args.oracles is not None:
            n_oracles = args.oracles
        report = harness.run_suite(suite, cfg, n_terms, n_oracles, extra_terms=corpus)
        print(report.summary())
        for failure in report.failures:
            failed = True
            where = f" oracle {failure.oracle}" if failure.oracle else ""
            term = f" term {failure.term}" if failure.term else ""
            print(f"  FAIL{term}{where}: {failure.detail}")
    return 2 if failed else 0


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="systemt", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="typecheck a term and print its type")
    p.add_argument("file")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("eval", help="apply a (nat -> nat) -> nat term to an oracle")
    p.add_argument("file")
    p.add_argument("--oracle", required=True, help='e.g. "5,6,7;default=1"')
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("tree", help="print the dialogue tree as an s-expression")
    p.add_argument("file")
    p.add_argument("--answers", type=int, default=2, help="materialized answer alphabet {0..K-1}")
    p.add_argument("--depth", type=int, default=64, help="depth bound; deeper subtrees print (...)")
    p.set_defaults(run=cmd_tree)

    p = sub.add_parser("translate", help="print the encoded-tree term for a file")
    p.add_argument("file")
    p.add_argument("--motive", choices=sorted(_MOTIVES), required=True)
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser("modulus", help="internal modulus of continuity at an oracle")
    p.add_argument("file")
    p.add_argument("--oracle", required=True)
    p.add_argument("--verify", type=int, default=0, metavar="N", help="sample N agreeing points")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_modulus)

    p = sub.add_parser("umodulus", help="internal uniform modulus over the Cantor space")
    p.add_argument("file")
    p.set_defaults(run=cmd_umodulus)

    p = sub.add_parser("selftest", help="run the differential property suites")
    p.add_argument("--suite", choices=harness.SUITE_IDS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--terms", type=int, default=None, help="override generated inputs per suite")
    p.add_argument("--oracles", type=int, default=None, help="override oracles per input")
    p.set_defaults(run=cmd_selftest)

    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (ParseError, TypeCheckError, UnboundVariable, TypeMismatch, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
