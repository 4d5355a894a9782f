"""System T toolkit: dialogue trees, Church-encoded extraction, moduli of continuity."""

from .church import (
    church_type,
    dialogue_f_int,
    dialogue_tree_int,
    encode,
    generic_int,
    gkleisli_int,
    kleisli_int,
    leaf_int,
    branch_int,
    functor_int,
    translate,
    translate_type,
)
from .dialogue import (
    BAIRE_FN,
    Branch,
    DFunV,
    DTree,
    Leaf,
    Oracle,
    TreeV,
    TypeMismatch,
    dialogue_tree,
    dieval,
    eval_dial,
    functor_map,
    generic,
    gkleisli,
    kleisli,
    tree_sexpr,
)
from .harness import GenConfig, Report, corpus_terms, gen_oracle, gen_term, hee_check, run_suite
from .moduli import (
    BoolOracle,
    embed,
    max_bool_question,
    max_bool_question_int,
    max_question,
    max_question_int,
    max_term,
    modulus,
    modulus_int,
    modulus_uni,
    modulus_uni_int,
    prune,
)
from .set_model import FunV, NatV, apply_set, eval_set, lift_oracle
from .syntax import (
    NAT,
    App,
    Arrow,
    Ctx,
    Lam,
    Nat,
    Rec,
    Succ,
    Term,
    Ty,
    Var,
    Zero,
    arrow,
    format_ty,
    infer,
    numeral,
    parse,
    pretty,
    substitute,
    typecheck,
)
