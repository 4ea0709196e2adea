import itertools

import pytest
from hypothesis import given, strategies as st

from skewcat.errors import (
    BoundaryKindMismatch,
    IndexOutOfRange,
    LoosenOnLooseSide,
    NotAForm,
    ObjectMismatch,
    SignatureError,
    TermError,
    UnknownGenerator,
)
from skewcat.kernel import (
    Arrow,
    Cmp,
    Form,
    Gen,
    Id,
    Kind,
    Side,
    Signature,
    compose,
    form_of,
    identity,
    infer,
    lloL,
    lloR,
    loosen,
    parse_term,
    size,
    well_formed,
)
from skewcat.equality import enumerate_terms

from conftest import monoid_signature

X = "x"
LL, TL, LT, TT = Kind.LL, Kind.TL, Kind.LT, Kind.TT


def table_schema(gk, n, i, fk):
    """The nine composition schemas, read off one at a time.

    Each clause names g's kind, where the slot sits (``a'``/``c'`` mean a
    nonempty list of neighbours), and the kind f must have.
    """
    before, after = i, n - 1 - i
    if gk == LL and fk == LL:
        return Form.A
    if gk == TL and fk == LL and before >= 1:
        return Form.B
    if gk == LT and fk == LL and after >= 1:
        return Form.C
    if gk == TT and fk == LL and before >= 1 and after >= 1:
        return Form.D
    if gk == TL and fk == TL and before == 0:
        return Form.E
    if gk == TT and fk == TL and before == 0 and after >= 1:
        return Form.F
    if gk == LT and fk == LT and after == 0:
        return Form.G
    if gk == TT and fk == LT and after == 0 and before >= 1:
        return Form.H
    if gk == TT and fk == TT and n == 1:
        return Form.I
    return None


def _scan():
    accepted, expected = {}, {}
    for gk, fk in itertools.product(Kind, repeat=2):
        for n in range(1, 4):
            for m in range(0, 4):
                if fk.tight and m == 0:
                    continue
                g = Arrow(gk, (X,) * n, X)
                f = Arrow(fk, (X,) * m, X)
                for i in range(n):
                    key = (gk, n, i, fk, m)
                    want = table_schema(gk, n, i, fk)
                    if want is not None:
                        expected[key] = want
                    try:
                        accepted[key] = form_of(g, i, f)
                    except NotAForm:
                        pass
    return accepted, expected


def test_classification_matches_table():
    accepted, expected = _scan()
    assert set(accepted) == set(expected)
    assert accepted == expected
    assert {f for f in accepted.values()} == set(Form)


def test_each_form_has_its_own_schema():
    accepted, _ = _scan()
    shapes = {}
    for (gk, n, i, fk, _m), form in accepted.items():
        shapes.setdefault(form, set()).add((gk, fk))
    assert all(len(v) == 1 for v in shapes.values())


def test_loose_g_nullary_slot_has_no_form():
    with pytest.raises(NotAForm):
        form_of(Arrow(TT, (X, X), X), 0, Arrow(LL, (), X))


def test_identity_arrow():
    assert infer(monoid_signature(), Id(X)) == Arrow(TT, (X,), X)


def test_right_unit_side_is_tight_loose(sig):
    t = Cmp(lloR(Gen("m")), 1, Gen("e"))
    assert infer(sig, t) == Arrow(TL, (X,), X)


def test_boundary_mismatch(sig):
    with pytest.raises(BoundaryKindMismatch):
        infer(sig, Cmp(Gen("m"), 0, Gen("e")))


def test_associativity_sides(sig):
    three = Arrow(TT, (X, X, X), X)
    assert infer(sig, compose(sig, Gen("m"), 0, lloR(Gen("m")))) == three
    assert infer(sig, compose(sig, Gen("m"), 1, lloL(Gen("m")))) == three
    assert infer(sig, compose(sig, Id(X), 0, Gen("m"))) == Arrow(TT, (X, X), X)


def test_loosenings(sig):
    assert infer(sig, loosen(Side.LEFT, loosen(Side.RIGHT, Gen("m")))) == Arrow(LL, (X, X), X)
    assert infer(sig, loosen(Side.LEFT, identity(X))) == Arrow(LT, (X,), X)
    with pytest.raises(LoosenOnLooseSide):
        loosen(Side.LEFT, Gen("e"), sig)
    with pytest.raises(LoosenOnLooseSide):
        infer(sig, lloL(Gen("u")))


def test_errors(sig):
    with pytest.raises(UnknownGenerator):
        infer(sig, Gen("q"))
    with pytest.raises(IndexOutOfRange):
        infer(sig, Cmp(Gen("m"), 2, Id(X)))
    two = Signature.build(["x", "y"], {"k": ("LL", ("y",), "x"), "c": ("LL", (), "x")})
    with pytest.raises(ObjectMismatch):
        infer(two, Cmp(Gen("k"), 0, Gen("c")))
    with pytest.raises(TermError):
        Arrow(TL, (), X)


def test_signature_validation():
    with pytest.raises(SignatureError):
        Signature.build(["x"], {"k": ("LL", ("y",), "x")})
    with pytest.raises(SignatureError):
        Signature.build(["x", "x"], {})
    with pytest.raises(TermError):
        Signature.build(["x"], {"k": ("TL", (), "x")})


def test_parse_errors():
    for bad in ("cmp(m, x, e)", "lloQ(m)", "id()", "m)", "cmp(m, 0 e)", "m @"):
        with pytest.raises(TermError):
            parse_term(bad)


CORPUS = enumerate_terms(monoid_signature(), 2)


@given(st.sampled_from(CORPUS))
def test_print_parse_round_trip(t):
    assert parse_term(str(t)) == t
    assert parse_term(str(t).replace(" ", "  ")) == t


@given(st.sampled_from(CORPUS), st.sampled_from(CORPUS), st.integers(0, 3))
def test_composition_preserves_kind_and_splices(g, f, i):
    sig = monoid_signature()
    t = Cmp(g, i, f)
    if not well_formed(sig, t):
        return
    a, ga, fa = infer(sig, t), infer(sig, g), infer(sig, f)
    assert a.kind is ga.kind
    assert a.arity == ga.arity + fa.arity - 1
    assert size(t) == size(g) + size(f) + 1
    assert not (a.kind.tight and a.arity == 0)
