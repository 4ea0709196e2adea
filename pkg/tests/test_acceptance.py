"""Acceptance run: one recorded line per criterion, summarised at the end of
the session.  Every check pairs the library with an oracle written here or
in the neighbouring test modules."""

import itertools
import json
import random
import time

import pytest

from skewcat.category import diamond, discrete, find_isomorphism, fixture_categories, parallel_pair, z2_category
from skewcat.cbpv import (
    Direction,
    boolean_lattice_base,
    check_calculus_laws,
    check_retseq,
    check_short,
    convert_form,
    exception_model,
    fixture_interpretation,
    fixture_signature,
    identity_model,
    model_from_json as cbpv_model_from_json,
    mutate_model,
    parse_judgement,
    retseq_monoid_equivalence,
    substitution_lemma,
    typecheck,
)
from skewcat.equality import (
    DEFAULT_SLACK,
    AxiomMode,
    Verdict,
    agreement,
    enumerate_terms,
    group_by_normal_form,
    mode_divergence,
    normalize,
    oracle_equal,
)
from skewcat.kernel import infer, size
from skewcat.errors import CardinalityGuard, CbpvTypeError
from skewcat.model import (
    LeftSkewLift,
    Matrix,
    SeqModel,
    all_matrices,
    check_axioms,
    find_tensor,
    from_category_seq,
    from_setmat,
    from_span,
    lift_to_biskew,
    mutate,
    setmat_plain,
    tabulate,
    terminal_model,
)
from skewcat.monoid import biased_counterpart, check_unbiased, enumerate_monoids, expand_unbiased, monoid_category, unbiased_unique
from skewcat.relmonad import check_relmonad, enumerate_relmonads, extend_functor, mutate_relmonad, relmonad_candidates, relmonad_monoid_equivalence

from conftest import ACCEPTANCE, DATA, monoid_signature
from test_kernel import _scan
from test_monoid import span_categories
from test_relmonad import fixtures as relmonad_fixtures

SIG = monoid_signature()
E2 = ("p", "q")
STAR = ("*",)


def record(n, ok, detail):
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")


def reflexive(E, mats):
    """Matrices with a nonempty diagonal in every row."""
    return [X for X in mats if all(X(e, e) for e in E)]


def test_criterion_1_classification():
    start = time.monotonic()
    accepted, expected = _scan()
    elapsed = time.monotonic() - start
    extras = set(accepted) - set(expected)
    misses = set(expected) - set(accepted)
    wrong = [k for k in set(accepted) & set(expected) if accepted[k] != expected[k]]
    ok = not extras and not misses and not wrong and len(set(accepted.values())) == 9 and elapsed < 1
    record(1, ok, f"{len(accepted)} accepted, {len(extras)} extra, {len(misses)} missed, {elapsed:.2f}s")
    assert ok


def test_criterion_2_reduced_corpus():
    """Exact agreement at three generator occurrences, where the whole corpus
    fits comfortably."""
    terms = enumerate_terms(SIG, 3)
    rep = agreement(SIG, terms, AxiomMode.UNIFORM, deadline=300)
    test_criterion_2_reduced_corpus.report = rep
    # the class-wise shortcut is cross-checked pair by pair on a sample
    rng = random.Random(17)
    by_arrow = {}
    for t in terms:
        by_arrow.setdefault(infer(SIG, t), []).append(t)
    groups = [g for g in by_arrow.values() if len(g) > 1]
    classes = [g for g in group_by_normal_form(SIG, terms).values() if len(g) > 1]
    off = 0
    for k in range(80):
        t, u = rng.sample(rng.choice(classes if k % 2 else groups), 2)
        verdict = oracle_equal(SIG, t, u, AxiomMode.UNIFORM, size_bound=max(size(t), size(u)) + DEFAULT_SLACK)
        off += (verdict is Verdict.EQUAL) != (normalize(SIG, t) == normalize(SIG, u))
    assert off == 0
    print(f"<=3 occurrences: {rep.terms} terms, {rep.classes} classes, {rep.closures} closures, "
          f"{len(rep.disagreements)} disagreements, completed={rep.completed}, {rep.elapsed:.0f}s")
    assert rep.ok


@pytest.mark.xfail(strict=True, reason="the five-occurrence corpus exceeds the enumeration guard and the time budget")
def test_criterion_2_agreement():
    start = time.monotonic()
    reduced = getattr(test_criterion_2_reduced_corpus, "report", None)
    small = (f"<=3: {reduced.terms} terms, {len(reduced.disagreements)} disagreements"
             if reduced is not None else "<=3 not run")
    try:
        terms = enumerate_terms(SIG, 5)
    except CardinalityGuard as exc:
        record(2, False, f"<=5 not attempted in full: {exc} after {time.monotonic() - start:.1f}s; {small}")
        raise
    budget = max(0.0, 300 - (time.monotonic() - start))
    rep = agreement(SIG, terms, AxiomMode.UNIFORM, deadline=budget)
    record(2, rep.ok, f"<=5: {rep.terms} terms, completed={rep.completed}, "
                      f"{len(rep.disagreements)} disagreements; {small}")
    assert rep.ok


def test_criterion_3_mode_divergence():
    out = mode_divergence(SIG, enumerate_terms(SIG, 3), deadline=300)
    listed = out["divergent_classes"]
    shown = all(c["unreached"] and c["normal_form"] for c in listed)
    for c in listed[:5]:
        print(f"  {c['normal_form']}: strict closure of {c['root']} misses {len(c['unreached'])}")
    ok = out["completed"] and shown
    record(3, ok, f"<=3 occurrences: {out['classes']} classes, {len(listed)} diverge under strict laws, all listed")
    assert ok


def _axiom_builders():
    out = [("terminal", terminal_model(4))]
    for c in fixture_categories():
        plain = SeqModel(c, 4)
        left = LeftSkewLift(plain)
        out += [(f"Seq({c.name})", plain), (f"Seq({c.name}) left", left), (f"Seq({c.name}) bi", lift_to_biskew(left))]
    for E, mats in ((("p",), all_matrices(("p",), ("p",), STAR)), (E2, reflexive(E2, all_matrices(E2, E2, STAR)))):
        plain = setmat_plain(E, mats, 4)
        left = LeftSkewLift(plain)
        out += [(f"SetMat|E|={len(E)}", plain), (f"SetMat|E|={len(E)} left", left),
                (f"SetMat|E|={len(E)} bi", lift_to_biskew(left))]
    one = Matrix.of("S", {("a", "b"): (0,)})
    out.append(("span 1x1x1", from_span(("a",), ("b",), ("i",), {"i": "a"}, {"i": "b"}, [one], arity_bound=4)))
    wide = Matrix.of("W", {("a", "b"): (0,), ("a", "c"): (0,)})
    out.append(("span 1x2x2", from_span(("a",), ("b", "c"), ("i", "j"), {"i": "a", "j": "a"},
                                        {"i": "b", "j": "c"}, [wide], arity_bound=4)))
    return out


def _mutation_fixtures():
    two = Matrix.of("X", {("a", "b"): (0, 1)})
    return [
        ("Seq(Z2) a4", tabulate(from_category_seq(z2_category(), 4))),
        ("Seq(Par) a4", tabulate(from_category_seq(parallel_pair(), 4))),
        ("span 2-entry a3", tabulate(from_span(("a",), ("b",), ("i",), {"i": "a"}, {"i": "b"}, [two], arity_bound=3))),
    ]


def test_criterion_4_axiom_checker():
    failing = []
    for name, model in _axiom_builders():
        for mode in (AxiomMode.UNIFORM,) + ((AxiomMode.STRICT,) if model.flavour == "biskew" else ()):
            if check_axioms(model, mode):
                failing.append(f"{name} {mode.value}")
    survivors = []
    builders = len(_axiom_builders())
    for name, table in _mutation_fixtures():
        if check_axioms(table):
            failing.append(f"{name} unmutated")
        rng = random.Random(2024)
        for _ in range(20):
            broken, what = mutate(table, rng)
            if not check_axioms(broken, limit=1):
                survivors.append(f"{name}: {what}")
    ok = not failing and not survivors
    record(4, ok, f"{builders} builders at arity 4, {len(failing)} with violations; "
                  f"60 mutations, {len(survivors)} undetected")
    assert ok, (failing, survivors)


def _seq_monoids():
    out = []
    for c in fixture_categories():
        model = from_category_seq(c, 4)
        out.append((c, model, monoid_category(model)))
    return out


def test_criterion_5_seq_monoids():
    bad = []
    for c, model, mc in _seq_monoids():
        if len(c.objects) > 3 or len(c.morphisms) > 8:
            bad.append(f"{c.name} too large for the fixture bound")
        if len(mc.monoids) != len(c.objects):
            bad.append(f"{c.name}: {len(mc.monoids)} monoids")
        if find_isomorphism(mc.category, c) is None:
            bad.append(f"{c.name}: not isomorphic")
    record(5, not bad, f"{len(fixture_categories())} categories, arity 4; " + (", ".join(bad) or "all exact"))
    assert not bad


def test_criterion_6_setmat_categories():
    ident = {e: e for e in E2}
    rows = []
    for X in all_matrices(E2, E2, STAR):
        ours = len(enumerate_monoids(from_setmat(E2, STAR, [X], arity_bound=4)))
        rows.append((X.name, ours, span_categories(E2, E2, E2, ident, ident, X)))
    mismatches = [r for r in rows if r[1] != r[2]]
    total = sum(r[1] for r in rows)
    record(6, not mismatches, f"16 matrices over |E|=2, {total} monoids in all, {len(mismatches)} mismatches")
    assert not mismatches


SPAN = (("a",), ("b",), ("i",), {"i": "a"}, {"i": "b"})


def test_criterion_7_span_monoids():
    X = Matrix.of("X", {("a", "b"): (0, 1)})
    ours = len(enumerate_monoids(from_span(*SPAN, [X], arity_bound=4)))
    theirs = span_categories(*SPAN, X)
    record(7, ours == theirs, f"{ours} monoids, brute force {theirs}")
    assert ours == theirs


def test_criterion_8_coherence():
    start = time.monotonic()
    models = [m for _, m, _ in _seq_monoids()]
    models += [from_setmat(E2, STAR, [X], arity_bound=4) for X in all_matrices(E2, E2, STAR)]
    models.append(from_span(*SPAN, [Matrix.of("X", {("a", "b"): (0, 1)})], arity_bound=4))
    checked, bad = 0, []
    for model in models:
        for mon in enumerate_monoids(model):
            checked += 1
            fam = expand_unbiased(model, mon, 4)
            if check_unbiased(model, fam):
                bad.append(f"{model.name}: family fails")
            if biased_counterpart(fam) != mon:
                bad.append(f"{model.name}: no round trip")
            if not unbiased_unique(model, mon, 4):
                bad.append(f"{model.name}: not unique")
    elapsed = time.monotonic() - start
    ok = not bad and elapsed < 600
    record(8, ok, f"{checked} monoids at arity 4, {len(bad)} failures, {elapsed:.0f}s")
    assert ok, bad


def test_criterion_9_lifts():
    stages = []
    for c in fixture_categories():
        stages.append((c.name, SeqModel(c, 3)))
    for E in (("p",), E2):
        stages.append((f"SetMat|E|={len(E)}", setmat_plain(E, all_matrices(E, E, STAR), 3)))
    bad = []
    for name, plain in stages:
        left = LeftSkewLift(plain)
        bi = lift_to_biskew(left)
        cats = [monoid_category(m).category for m in (plain, left, bi)]
        if find_isomorphism(cats[0], cats[1]) is None:
            bad.append(f"{name} left")
        if find_isomorphism(cats[1], cats[2]) is None:
            bad.append(f"{name} bi")
    record(9, not bad, f"{len(stages)} fixtures, both stages; " + (", ".join(bad) or "all isomorphic"))
    assert not bad


def test_criterion_10_relative_monads():
    rows, bad = [], []
    for name, O in relmonad_fixtures().items():
        cands = list(relmonad_candidates(O))
        rng = random.Random(11)
        lawful = enumerate_relmonads(O)
        mutants = [mutate_relmonad(O, rng.choice(lawful), rng)[0] for _ in range(50)]
        for R in cands + mutants:
            direct = not check_relmonad(O, R) and not extend_functor(O, R)[1]
            eq = relmonad_monoid_equivalence(O, R)
            if direct != eq.monoid_ok or direct != eq.relmonad_ok:
                bad.append(f"{name}: {json.dumps(R.to_json(), sort_keys=True)}")
        rows.append(f"{name} {len(cands)}+50")
    record(10, not bad, f"{', '.join(rows)} checked, {len(bad)} disagreements")
    assert not bad


def test_criterion_11_cbpv():
    start = time.monotonic()
    sig = fixture_signature()
    golden = json.loads((DATA / "typecheck_golden.json").read_text())
    wrong = 0
    for case in golden:
        ctx, t = parse_judgement(case["judgement"])
        try:
            got = str(typecheck(sig, ctx, t))
        except CbpvTypeError as exc:
            got = "!" + exc.rule
        wrong += got != case["expect"]
    base = boolean_lattice_base()
    notes, bad = [], []
    if wrong or len(golden) != 30:
        bad.append(f"typechecker missed {wrong} of {len(golden)}")
    for m in (identity_model(base), exception_model(base)):
        interp = fixture_interpretation(m)
        if check_retseq(m):
            bad.append(f"{m.name} RetSeq")
        viol, n = check_calculus_laws(m, interp, sig, 7)
        if viol:
            bad.append(f"{m.name} laws")
        if substitution_lemma(m, interp, sig, samples=100, rng=random.Random(3)):
            bad.append(f"{m.name} substitution")
        short = convert_form(Direction.LONG_TO_SHORT, m)
        if convert_form(Direction.SHORT_TO_LONG, short).dumps() != m.dumps():
            bad.append(f"{m.name} round trip")
        if cbpv_model_from_json(json.loads(short.dumps())).dumps() != short.dumps():
            bad.append(f"{m.name} short serialisation")
        rng = random.Random(9)
        for _ in range(20):
            mutant, _ = mutate_model(m, rng)
            if (not check_retseq(mutant)) != (not check_short(convert_form(Direction.LONG_TO_SHORT, mutant))):
                bad.append(f"{m.name} law preservation")
            if not retseq_monoid_equivalence(mutant).agree:
                bad.append(f"{m.name} equivalence")
        notes.append(f"{m.name}: {n} law instances")
    elapsed = time.monotonic() - start
    ok = not bad and elapsed < 600
    record(11, ok, f"30 golden cases, {'; '.join(notes)}, {elapsed:.0f}s" + (f"; {', '.join(bad)}" if bad else ""))
    assert ok, bad


def _join(c, x, y):
    """Least upper bound read off the hom-sets of a poset category."""
    le = lambda u, v: bool(c.hom(u, v))
    ups = [z for z in c.objects if le(x, z) and le(y, z)]
    least = [z for z in ups if all(le(z, w) for w in ups)]
    return least[0] if least else None


def test_criterion_12_tensor():
    c = diamond()
    model = SeqModel(c, 3)
    wrong = []
    for x, y in itertools.product(c.objects, repeat=2):
        found = find_tensor(model, (x, y))
        if found is None or found[0] != _join(c, x, y):
            wrong.append((x, y))
    absent = find_tensor(SeqModel(discrete(("a", "b")), 3), ("a", "b")) is None
    ok = not wrong and absent
    record(12, ok, f"16 pairs in the diamond, {len(wrong)} wrong; discrete pair has no tensor: {absent}")
    assert ok
