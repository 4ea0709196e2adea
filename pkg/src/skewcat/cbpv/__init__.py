"""The F fragment of call-by-push-value and its RetSeq semantics."""

from .syntax import (
    CBase,
    CCon,
    CbpvSignature,
    FType,
    Return,
    TermEnumerator,
    To,
    Var,
    VCon,
    VType,
    free_vars,
    parse,
    parse_judgement,
    parse_signature,
    parse_term,
    parse_value,
    substitute,
    term_size,
    typecheck,
)
from .semantics import (
    CartesianBase,
    Interpretation,
    RetSeqModel,
    boolean_lattice_base,
    builtin_models,
    check_base,
    check_calculus_laws,
    check_retseq,
    denote,
    exception_model,
    fixture_interpretation,
    fixture_signature,
    identity_model,
    law_instances,
    meet_semilattice_base,
    model_from_json,
    mutate_model,
    substitution_lemma,
    terminal_base,
)
from .forms import (
    BimoduleMulticategory,
    Direction,
    ShortFormModel,
    check_short,
    convert_form,
    retseq_monoid_equivalence,
)
