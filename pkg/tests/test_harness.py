import pytest

from systemt import church, dialogue
from systemt.dialogue import BAIRE_FN, Branch, Leaf
from systemt.harness import (
    CORPUS,
    GenConfig,
    SUITE_IDS,
    agreeing_oracle,
    canonical,
    corpus_terms,
    gen_oracle,
    gen_term,
    hee_check,
    run_suite,
    shrink_term,
)
from systemt.set_model import NatV, eval_set
from systemt.syntax import NAT, App, Arrow, Lam, Succ, Var, Zero, infer, numeral, parse, typecheck


# -- generation -----------------------------------------------------------------


def test_gen_term_budget_zero_falls_back_to_canonical():
    t = gen_term(GenConfig(seed=1, size_budget=0), NAT)
    assert t == numeral(0)
    f = gen_term(GenConfig(seed=1, size_budget=0), BAIRE_FN)
    assert f == Lam(Arrow(NAT, NAT), Zero())


def test_gen_term_well_typed_at_target():
    for seed in range(40):
        t = gen_term(GenConfig(seed=seed), BAIRE_FN)
        assert infer(t, ()) == BAIRE_FN


def test_gen_term_deterministic_in_seed():
    cfg = GenConfig(seed=42)
    assert gen_term(cfg, BAIRE_FN) == gen_term(cfg, BAIRE_FN)
    assert gen_term(GenConfig(seed=1), BAIRE_FN) != gen_term(GenConfig(seed=2), BAIRE_FN)


def test_gen_term_stays_near_budget():
    def size(t):
        if isinstance(t, (Var, Zero)):
            return 1
        if isinstance(t, Succ):
            return 1 + size(t.arg)
        if isinstance(t, Lam):
            return 1 + size(t.body)
        if isinstance(t, App):
            return 1 + size(t.fn) + size(t.arg)
        return 1 + size(t.step) + size(t.base) + size(t.arg)

    # fallbacks may add a small constant of canonical nodes past the budget
    for seed in range(30):
        cfg = GenConfig(seed=seed, size_budget=25)
        assert size(gen_term(cfg, BAIRE_FN)) <= 25 + 40


def test_gen_config_rejects_bad_weights():
    with pytest.raises(ValueError):
        GenConfig(rec_weight=-1)
    with pytest.raises(ValueError):
        GenConfig(rec_weight=0, lam_weight=0, app_weight=0, var_weight=0)


def test_gen_oracle_reproducible_and_bounded():
    cfg = GenConfig(seed=9)
    assert gen_oracle(cfg) == gen_oracle(cfg)
    for seed in range(50):
        alpha = gen_oracle(GenConfig(seed=seed))
        assert len(alpha.prefix) <= 16
        assert all(0 <= v <= 10 for v in alpha.prefix)
        assert 0 <= alpha.default <= 10


def test_gen_oracle_mostly_distinct_across_seeds():
    specs = {gen_oracle(GenConfig(seed=s)).spec() for s in range(100)}
    assert len(specs) >= 95


def test_corpus_is_ten_closed_baire_functionals():
    assert len(CORPUS) == 10
    for t in corpus_terms():
        assert infer(t, ()) == BAIRE_FN


def test_agreeing_oracle_agrees_on_prefix():
    import random

    alpha = gen_oracle(GenConfig(seed=3))
    rng = random.Random(0)
    for m in [0, 1, 5, 9]:
        beta = agreeing_oracle(alpha, m, rng)
        assert all(alpha(i) == beta(i) for i in range(m))


# -- suites ---------------------------------------------------------------------


def test_run_suite_rejects_unknown_id():
    with pytest.raises(ValueError):
        run_suite("thm99")


def test_run_suite_zero_cases_is_empty_pass():
    report = run_suite("thm16", GenConfig(seed=0), n_terms=0, n_oracles=5)
    assert report.cases == 0
    assert report.passed


@pytest.mark.parametrize("suite", SUITE_IDS)
def test_all_suites_pass_at_small_scale(suite):
    report = run_suite(suite, GenConfig(seed=11), n_terms=15, n_oracles=4, extra_terms=corpus_terms())
    assert report.passed, report.failures[:3]
    assert report.cases > 0


def test_corrupted_translation_is_caught_with_shrunk_witness(monkeypatch):
    original = church.translate

    def corrupted(term, motive):
        if isinstance(term, Succ):
            return corrupted(term.arg, motive)  # drop successors
        if isinstance(term, App):
            return App(corrupted(term.fn, motive), corrupted(term.arg, motive))
        if isinstance(term, Lam):
            return Lam(church.translate_type(term.domain, motive), corrupted(term.body, motive))
        return original(term, motive)

    monkeypatch.setattr(church, "translate", corrupted)
    report = run_suite("thm37", GenConfig(seed=5), n_terms=20, n_oracles=5, extra_terms=corpus_terms())
    assert not report.passed
    witness = report.failures[0]
    assert witness.term is not None
    # the witness still fails and is small enough to read
    assert len(witness.term) < 200
    shrunk = typecheck(parse(witness.term))
    assert infer(shrunk, ()) == BAIRE_FN


def test_corrupted_generic_is_caught(monkeypatch):
    from systemt.dialogue import kleisli

    monkeypatch.setattr(
        dialogue, "generic", lambda tree: kleisli(lambda n: Branch(0, Leaf), tree)
    )
    report = run_suite("thm16", GenConfig(seed=5), n_terms=20, n_oracles=5, extra_terms=corpus_terms())
    assert not report.passed


def test_corrupted_uniform_modulus_is_caught(monkeypatch):
    original = church.dialogue_tree_int

    def wrong(term, motive):
        return original(corpus_terms()[0], motive)  # always the constant term's tree

    monkeypatch.setattr(church, "dialogue_tree_int", wrong)
    report = run_suite("lem54", GenConfig(seed=5), n_terms=10, n_oracles=0, extra_terms=corpus_terms())
    assert not report.passed


# -- shrinking --------------------------------------------------------------------


def test_shrink_reaches_a_locally_minimal_witness():
    from systemt.harness import _replace_at, _subterm_sites

    big = typecheck(
        parse(
            "fun (a : nat -> nat) -> rec[nat] (fun (i : nat) -> fun (r : nat) -> succ r)"
            " (a (succ (a 3))) (a 2)"
        )
    )

    def fails_if_queries(t):  # pretend any term whose tree queries something fails
        d = dialogue.dialogue_tree(t)
        return isinstance(d, Branch)

    small = shrink_term(big, fails_if_queries)
    assert fails_if_queries(small)
    # no single canonical replacement keeps the failure: the greedy loop is done
    for path, sub, ctx in _subterm_sites(small):
        replacement = canonical(infer(sub, ctx))
        if sub == replacement:
            continue
        candidate = _replace_at(small, path, replacement)
        assert not fails_if_queries(candidate)


def test_shrink_keeps_term_well_typed():
    t = corpus_terms()[5]
    small = shrink_term(t, lambda _: True)  # everything "fails": shrinks to canonical
    assert infer(small, ()) == BAIRE_FN
    assert small == canonical(BAIRE_FN)


# -- hee_check --------------------------------------------------------------------


def test_hee_check_ground():
    assert hee_check(NAT, NatV(3), NatV(3))
    assert not hee_check(NAT, NatV(3), NatV(4))


def test_hee_check_first_order_functions():
    ident = eval_set(typecheck(parse("fun (x : nat) -> x")))
    via_rec = eval_set(
        typecheck(parse("fun (x : nat) -> rec[nat] (fun (i : nat) -> fun (r : nat) -> succ r) x zero"))
    )
    succ = eval_set(typecheck(parse("fun (x : nat) -> succ x")))
    assert hee_check(Arrow(NAT, NAT), ident, via_rec, samples=50, seed=3)
    assert not hee_check(Arrow(NAT, NAT), ident, succ, samples=50, seed=3)


def test_hee_check_symmetric_with_same_seed():
    f = eval_set(typecheck(parse("fun (x : nat) -> succ x")))
    g = eval_set(typecheck(parse("fun (x : nat) -> succ (succ x)")))
    assert hee_check(Arrow(NAT, NAT), f, g, seed=9) == hee_check(Arrow(NAT, NAT), g, f, seed=9)


def test_hee_check_rejects_other_shapes():
    v = eval_set(typecheck(parse("fun (g : nat -> nat) -> g 1")))
    with pytest.raises(ValueError):
        hee_check(Arrow(Arrow(NAT, NAT), NAT), v, v)
