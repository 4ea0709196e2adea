import itertools

import pytest

from skewcat.category import discrete, fixture_categories, find_isomorphism, z2_category
from skewcat.errors import ArityBoundExceeded, HomMembership
from skewcat.kernel import Kind
from skewcat.model import (
    LeftSkewLift,
    Matrix,
    Mor,
    SeqModel,
    all_matrices,
    from_category_seq,
    from_setmat,
    from_span,
    lift_to_biskew,
    setmat_plain,
)
from skewcat.monoid import (
    MonoidData,
    biased_counterpart,
    check_homomorphism,
    check_monoid,
    check_unbiased,
    count_unbiased,
    enumerate_monoids,
    expand_unbiased,
    hom_unbiased_ok,
    monoid_category,
    unbiased_unique,
)


def span_categories(A, B, E, f, g, X):
    """Brute-force count of categories on the span with hom sets X.

    An identity picks id_i in X(f i, g i); a composition picks, for each
    a, i, b, a function X(a, g i) x X(f i, b) -> X(a, b).  Both are
    enumerated in full and the unit and associativity laws tested
    directly.
    """
    ids = [X(f[i], g[i]) for i in E]
    slots = [(a, i, b) for a in A for i in E for b in B]
    tables = []
    for a, i, b in slots:
        cells = list(itertools.product(X(a, g[i]), X(f[i], b)))
        tables.append([dict(zip(cells, out)) for out in itertools.product(X(a, b), repeat=len(cells))])
    count = 0
    for id_pick in itertools.product(*ids):
        ident = dict(zip(E, id_pick))
        for pick in itertools.product(*tables):
            comp = dict(zip(slots, pick))

            def c(a, i, b, h, l):
                return comp[(a, i, b)][(h, l)]

            ok = all(c(f[i], i, b, ident[i], l) == l for i in E for b in B for l in X(f[i], b))
            ok = ok and all(c(a, i, g[i], h, ident[i]) == h for a in A for i in E for h in X(a, g[i]))
            if ok:
                # (h;k);l = h;(k;l) for h : a -> g i, k : f i -> g j, l : f j -> b
                for a, i, j, b in itertools.product(A, E, E, B):
                    for h, k, l in itertools.product(X(a, g[i]), X(f[i], g[j]), X(f[j], b)):
                        if c(a, j, b, c(a, i, g[j], h, k), l) != c(a, i, b, h, c(f[i], j, b, k, l)):
                            ok = False
                            break
                    if not ok:
                        break
            count += ok
    return count


def test_brute_force_counter_on_known_cases():
    one = ("*",)
    full = Matrix.of("F", {("*", "*"): (0, 1)})
    # the labelled two-element monoids: two choices of unit, two structures
    assert span_categories(one, one, one, {"*": "*"}, {"*": "*"}, full) == 4
    empty = Matrix.of("Z", {})
    assert span_categories(one, one, one, {"*": "*"}, {"*": "*"}, empty) == 0


@pytest.mark.parametrize("cat", fixture_categories(), ids=lambda c: c.name)
def test_monoids_in_seq_are_objects(cat):
    for model in (SeqModel(cat, 3), LeftSkewLift(SeqModel(cat, 3)), from_category_seq(cat, 3)):
        mc = monoid_category(model)
        assert len(mc.monoids) == len(cat.objects)
        assert find_isomorphism(mc.category, cat) is not None


def test_hom_counts_match_in_seq():
    for cat in fixture_categories():
        mc = monoid_category(from_category_seq(cat, 3))
        ours = sorted(len(mc.category.hom(a, b)) for a in mc.category.objects for b in mc.category.objects)
        theirs = sorted(len(cat.hom(a, b)) for a in cat.objects for b in cat.objects)
        assert ours == theirs


def test_setmat_monoids_are_categories():
    E = ("p", "q")
    ident = {e: e for e in E}
    for X in all_matrices(E, E, ("*",)):
        model = from_setmat(E, ("*",), [X], arity_bound=3)
        assert len(enumerate_monoids(model)) == span_categories(E, E, E, ident, ident, X), X


def test_span_monoids_match_brute_force():
    A, B, E = ("a",), ("b",), ("i",)
    f, g = {"i": "a"}, {"i": "b"}
    for entries in [(0, 1), (0,), ()]:
        X = Matrix.of("X", {("a", "b"): entries})
        model = from_span(A, B, E, f, g, [X], arity_bound=3)
        assert len(enumerate_monoids(model)) == span_categories(A, B, E, f, g, X)


def test_span_with_two_points():
    A, B, E = ("a",), ("b",), ("i", "j")
    f, g = {"i": "a", "j": "a"}, {"i": "b", "j": "b"}
    X = Matrix.of("X", {("a", "b"): (0, 1)})
    model = from_span(A, B, E, f, g, [X], arity_bound=3)
    assert len(enumerate_monoids(model)) == span_categories(A, B, E, f, g, X)


def test_lifts_preserve_monoids():
    for cat in fixture_categories():
        plain = SeqModel(cat, 3)
        left = LeftSkewLift(plain)
        bi = lift_to_biskew(left)
        cats = [monoid_category(m).category for m in (plain, left, bi)]
        assert find_isomorphism(cats[0], cats[1]) is not None
        assert find_isomorphism(cats[1], cats[2]) is not None
    E = ("p", "q")
    mats = all_matrices(E, E, ("*",))
    plain = setmat_plain(E, mats, 3)
    left = LeftSkewLift(plain)
    bi = lift_to_biskew(left)
    cats = [monoid_category(m).category for m in (plain, left, bi)]
    assert find_isomorphism(cats[0], cats[1]) is not None
    assert find_isomorphism(cats[1], cats[2]) is not None


def test_monoid_check_rejects_wrong_hom():
    model = from_category_seq(z2_category(), 3)
    mon = enumerate_monoids(model)[0]
    with pytest.raises(HomMembership):
        check_monoid(model, MonoidData(mon.carrier, mon.e, mon.m))


def test_failing_candidates_name_their_laws():
    model = from_category_seq(z2_category(), 3)
    good = enumerate_monoids(model)
    for m in model.hom(Kind.TT, ("*", "*"), "*"):
        for e in model.hom(Kind.LL, (), "*"):
            cand = MonoidData("*", m, e)
            laws = {v.law for v in check_monoid(model, cand)}
            assert (not laws) == (cand in good)
            assert laws <= {"left-unit", "right-unit", "associativity"}


def test_homomorphisms_in_z2():
    model = from_category_seq(z2_category(), 3)
    mon = enumerate_monoids(model)[0]
    homs = [f for f in model.hom(Kind.TT, (mon.carrier,), mon.carrier) if not check_homomorphism(model, mon, mon, f)]
    assert len(homs) == 2


def _coherent(model, mon, N):
    fam = expand_unbiased(model, mon, N)
    assert check_unbiased(model, fam) == []
    assert biased_counterpart(fam) == mon
    assert unbiased_unique(model, mon, N)
    return fam


def test_coherence_on_seq_fixtures():
    for cat in fixture_categories():
        model = from_category_seq(cat, 4)
        for mon in enumerate_monoids(model):
            _coherent(model, mon, 4)


def test_coherence_on_setmat():
    E = ("p", "q")
    model = from_setmat(E, ("*",), all_matrices(E, E, ("*",)), arity_bound=4)
    mons = enumerate_monoids(model)
    assert len(mons) == 4
    for mon in mons:
        _coherent(model, mon, 4)


def test_family_homomorphisms():
    model = from_category_seq(z2_category(), 4)
    mon = enumerate_monoids(model)[0]
    fam = _coherent(model, mon, 4)
    for f in model.hom(Kind.TT, (mon.carrier,), mon.carrier):
        assert hom_unbiased_ok(model, fam, fam, f) == (not check_homomorphism(model, mon, mon, f))


def test_family_mutation_is_caught():
    model = from_category_seq(z2_category(), 4)
    mon = enumerate_monoids(model)[0]
    fam = expand_unbiased(model, mon, 4)
    other = [m for m in model.hom(Kind.LL, ("*",) * 3, "*") if m != fam.ll[3]]
    fam.set(Kind.LL, 3, other[0])
    assert check_unbiased(model, fam)


def test_uniqueness_needs_compositions():
    """Without the composition constraints the family is underdetermined
    whenever some hom-set has two elements."""
    model = from_category_seq(z2_category(), 3)
    mon = enumerate_monoids(model)[0]
    assert count_unbiased(model, mon, 3, compositions=False) == 2
    assert count_unbiased(model, mon, 3) == 1


def test_arity_guard():
    model = from_category_seq(z2_category(), 3)
    mon = enumerate_monoids(model)[0]
    with pytest.raises(ArityBoundExceeded):
        expand_unbiased(model, mon, 4)
    with pytest.raises(ValueError):
        expand_unbiased(SeqModel(z2_category(), 3), mon, 3)
