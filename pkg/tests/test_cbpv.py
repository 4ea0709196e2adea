import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from skewcat.cbpv import (
    CbpvSignature,
    Direction,
    FType,
    Return,
    TermEnumerator,
    To,
    Var,
    VType,
    boolean_lattice_base,
    check_base,
    check_calculus_laws,
    check_retseq,
    check_short,
    convert_form,
    denote,
    exception_model,
    fixture_interpretation,
    fixture_signature,
    free_vars,
    identity_model,
    model_from_json,
    mutate_model,
    parse_judgement,
    parse_signature,
    parse_term,
    retseq_monoid_equivalence,
    substitute,
    substitution_lemma,
    typecheck,
)
from skewcat.cbpv.semantics import FIXTURE_CONTEXTS
from skewcat.errors import CbpvSyntaxError, CbpvTypeError, SignatureError

from conftest import DATA

SIG = fixture_signature()
GOLDEN = json.loads((DATA / "typecheck_golden.json").read_text())


@pytest.fixture(scope="module")
def models():
    base = boolean_lattice_base()
    return {"identity": identity_model(base), "exception": exception_model(base)}


@pytest.mark.parametrize("case", GOLDEN, ids=[c["judgement"] for c in GOLDEN])
def test_typecheck_golden(case):
    ctx, t = parse_judgement(case["judgement"])
    want = case["expect"]
    if want.startswith("!"):
        with pytest.raises(CbpvTypeError) as info:
            typecheck(SIG, ctx, t)
        assert info.value.rule == want[1:]
    else:
        assert str(typecheck(SIG, ctx, t)) == want


def test_golden_suite_size():
    assert len(GOLDEN) == 30
    assert sum(c["expect"].startswith("!") for c in GOLDEN) == 13


def test_sequencing_nests_to_the_right():
    t = parse_term("g(v) to x. return x to y. h(y)")
    assert isinstance(t, To) and isinstance(t.body, To)


def test_syntax_errors_carry_positions():
    with pytest.raises(CbpvSyntaxError) as info:
        parse_term("g(v) to . h(x)")
    assert info.value.position == 8
    for bad in ("return", "g(v", "v:a |- ", "g(v) to x h(x)"):
        with pytest.raises(CbpvSyntaxError):
            parse_judgement(bad) if "|-" in bad else parse_term(bad)


def test_signature_text_and_json():
    text = (DATA / "fixture.cbpv").read_text()
    assert parse_signature(text) == SIG
    assert CbpvSignature.from_json(json.loads(json.dumps(SIG.to_json()))) == SIG
    with pytest.raises(SignatureError):
        CbpvSignature.from_json({"value_types": ["a"], "value_constructors": {"f": {"args": ["z"], "result": "a"}}})


def test_capture_avoiding_substitution():
    t = parse_term("g(v) to x0. h(w)")
    out = substitute({"w": Var("x0"), "v": Var("v")}, t)
    assert "x0" in free_vars(out)
    assert out.var != "x0"
    assert typecheck(SIG, (("v", VType("a")), ("x0", VType("b"))), out) == typecheck(
        SIG, (("v", VType("a")), ("w", VType("b"))), t)


ENUM = TermEnumerator(SIG)
TERMS = [(ctx, b, t) for ctx in FIXTURE_CONTEXTS for b in SIG.all_computation_types()
         for n in range(1, 6) for t in ENUM.computations(ctx, b, n)]


@settings(max_examples=200)
@given(st.sampled_from(TERMS))
def test_enumerated_terms_are_well_typed(item):
    ctx, b, t = item
    assert typecheck(SIG, ctx, t) == b
    assert parse_term(str(t)) == t


def test_base_is_lawful():
    assert check_base(boolean_lattice_base()) == []


@pytest.mark.parametrize("name", ["identity", "exception"])
def test_models_are_lawful(models, name):
    m = models[name]
    assert check_retseq(m) == []
    viol, n = check_calculus_laws(m, fixture_interpretation(m), SIG, 5)
    assert viol == [] and n > 0
    assert substitution_lemma(m, fixture_interpretation(m), SIG, samples=30, rng=random.Random(1)) == []


def test_exception_is_strict_in_bottom(models):
    from skewcat.cbpv.semantics import BOTTOM

    m = models["exception"]
    hits = [out for (g, a, b, first, n), out in m.to.items() if first == BOTTOM]
    assert hits and all(out == BOTTOM for out in hits)
    interp = fixture_interpretation(m)
    ctx = (("v", VType("a")),)
    ret = denote(m, interp, SIG, ctx, parse_term("return v"))
    assert ret == denote(m, interp, SIG, ctx, parse_term("return v to x. return x"))


@pytest.mark.parametrize("name", ["identity", "exception"])
def test_round_trips_are_byte_exact(models, name):
    m = models[name]
    short = convert_form(Direction.LONG_TO_SHORT, m)
    back = convert_form(Direction.SHORT_TO_LONG, short)
    assert back.dumps() == m.dumps()
    again = convert_form(Direction.LONG_TO_SHORT, back)
    assert again.dumps() == short.dumps()
    assert model_from_json(json.loads(m.dumps())).dumps() == m.dumps()
    assert model_from_json(json.loads(short.dumps())).dumps() == short.dumps()


@pytest.mark.parametrize("name", ["identity", "exception"])
def test_mutations_keep_forms_and_columns_in_step(models, name):
    m = models[name]
    rng = random.Random(5)
    caught = 0
    for _ in range(10):
        bad, _ = mutate_model(m, rng)
        long_ok = not check_retseq(bad)
        short_ok = not check_short(convert_form(Direction.LONG_TO_SHORT, bad))
        assert long_ok == short_ok
        eq = retseq_monoid_equivalence(bad)
        assert eq.agree and eq.short_ok == short_ok
        caught += not long_ok
    assert caught > 0


def test_equivalence_on_lawful_models(models):
    for m in models.values():
        eq = retseq_monoid_equivalence(m)
        assert eq.short_ok and eq.monoid_ok and eq.agree
