import pytest
from hypothesis import given, settings, strategies as st

from skewcat.equality import (
    AxiomMode,
    Verdict,
    agreement,
    enumerate_normal_forms,
    enumerate_terms,
    group_by_normal_form,
    law_instances,
    mode_divergence,
    normalize,
    oracle_equal,
    realize,
)
from skewcat.errors import ArrowMismatch, CardinalityGuard, InfeasibleNormalForm
from skewcat.equality import NormalForm, Node, Slot
from skewcat.kernel import Kind, infer, parse_term, size

from conftest import monoid_signature

SIG = monoid_signature()
P = parse_term


def nf(text):
    return normalize(SIG, P(text))


def test_identity_laws_collapse():
    assert nf("cmp(id(x), 0, m)") == nf("m")
    assert nf("cmp(m, 0, lloR(id(x)))") == nf("m")
    assert nf("cmp(m, 1, lloL(id(x)))") == nf("m")


def test_loosenings_commute():
    assert nf("lloL(lloR(m))") == nf("lloR(lloL(m))")


def test_loosening_passes_through_composites():
    assert nf("lloL(cmp(m, 1, lloL(m)))") == nf("cmp(lloL(m), 1, lloL(m))")


def test_free_monoid_laws_do_not_hold():
    assert nf("cmp(lloL(m), 0, e)") != nf("lloL(id(x))")
    assert nf("cmp(m, 0, lloR(m))") != nf("cmp(m, 1, lloL(m))")


def test_interchange():
    left = "cmp(cmp(lloL(lloR(m)), 0, e), 0, e)"
    right = "cmp(cmp(lloL(lloR(m)), 1, e), 0, e)"
    assert nf(left) == nf(right)


def test_normal_form_text():
    assert str(nf("cmp(m, 0, lloR(m))")) == "TT m(m(<x>, <x>), <x>) -> x"


def test_realize_is_a_section():
    for n in enumerate_normal_forms(SIG, 3):
        t = realize(SIG, n)
        assert normalize(SIG, t) == n


def test_infeasible_normal_form():
    bad = NormalForm(Kind.TL, Node("u", (Slot("x"),)), "x")
    with pytest.raises(InfeasibleNormalForm):
        realize(SIG, bad)


def _trees_with(n):
    """Trees over m (binary), e (nullary), u (unary) with exactly n nodes."""
    if n == 0:
        return 1
    total = (n == 1) + _trees_with(n - 1)  # e, u
    total += sum(_trees_with(a) * _trees_with(n - 1 - a) for a in range(n))  # m
    return total


def _left_tight_trees(n):
    """Trees whose leftmost spine only passes through m."""
    if n == 0:
        return 1
    return sum(_left_tight_trees(a) * _trees_with(n - 1 - a) for a in range(n))


def _right_tight_trees(n):
    """Rightmost spine through m or u."""
    if n == 0:
        return 1
    via_m = sum(_trees_with(a) * _right_tight_trees(n - 1 - a) for a in range(n))
    return via_m + _right_tight_trees(n - 1)


def _both_tight_trees(n):
    # a spine fully through m on both sides; u is left-loose so never on the left spine
    if n == 0:
        return 1
    return sum(_left_tight_trees(a) * _right_tight_trees(n - 1 - a) for a in range(n))


def test_normal_form_count_against_formula():
    for top in range(1, 4):
        ll = sum(_trees_with(n) for n in range(top + 1))
        tl = sum(_left_tight_trees(n) for n in range(top + 1))
        lt = sum(_right_tight_trees(n) for n in range(top + 1))
        tt = sum(_both_tight_trees(n) for n in range(top + 1))
        got = enumerate_normal_forms(SIG, top)
        counts = {k: sum(1 for g in got if g.kind is k) for k in Kind}
        assert counts == {Kind.LL: ll, Kind.TL: tl, Kind.LT: lt, Kind.TT: tt}


def test_corpus_classes_match_normal_forms():
    terms = enumerate_terms(SIG, 2)
    assert len(group_by_normal_form(SIG, terms)) == len(enumerate_normal_forms(SIG, 2))


def test_oracle_verdicts():
    assert oracle_equal(SIG, P("lloL(lloR(m))"), P("lloR(lloL(m))")) is Verdict.EQUAL
    assert oracle_equal(SIG, P("cmp(lloL(m), 0, e)"), P("lloL(id(x))")) is Verdict.DISTINCT
    deep = P("cmp(cmp(lloL(lloR(m)), 0, e), 0, e)")
    other = P("cmp(cmp(lloL(lloR(m)), 1, e), 0, e)")
    assert oracle_equal(SIG, deep, other, step_bound=64) is Verdict.EQUAL
    assert oracle_equal(SIG, deep, other, step_bound=1, size_bound=size(deep) + 4) in (Verdict.EQUAL, Verdict.UNKNOWN)
    with pytest.raises(ArrowMismatch):
        oracle_equal(SIG, P("m"), P("e"))


def test_unknown_when_steps_run_out():
    t = P("cmp(id(x), 0, cmp(id(x), 0, cmp(id(x), 0, m)))")
    assert oracle_equal(SIG, t, P("m"), step_bound=1) is Verdict.UNKNOWN
    assert oracle_equal(SIG, t, P("m")) is Verdict.EQUAL


def test_strict_mode_is_finer():
    a, b = P("cmp(lloL(m), 1, lloL(m))"), P("lloL(cmp(m, 1, lloL(m)))")
    assert oracle_equal(SIG, a, b, AxiomMode.UNIFORM) is Verdict.EQUAL
    assert oracle_equal(SIG, a, b, AxiomMode.STRICT) is Verdict.DISTINCT


def test_agreement_small_corpus():
    rep = agreement(SIG, enumerate_terms(SIG, 2))
    assert rep.completed and not rep.disagreements


def test_divergence_lists_classes():
    out = mode_divergence(SIG, enumerate_terms(SIG, 2))
    assert out["completed"]
    assert all(c["unreached"] for c in out["divergent_classes"])


def test_enumeration_guard():
    with pytest.raises(CardinalityGuard):
        enumerate_terms(SIG, 3, limit=100)


CORPUS = enumerate_terms(SIG, 3)


@settings(max_examples=150)
@given(st.sampled_from(CORPUS), st.sampled_from(["uniform", "strict"]))
def test_every_rewrite_preserves_the_normal_form(t, mode):
    before = normalize(SIG, t)
    for _, r in law_instances(SIG, t, AxiomMode(mode), size(t) + 4):
        assert infer(SIG, r) == infer(SIG, t)
        assert normalize(SIG, r) == before
