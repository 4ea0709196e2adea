import itertools
import json
import random

import pytest

from skewcat.category import arrow_category, chain3, parallel_pair, terminal_category, z2_category
from skewcat.errors import DanglingReference, TypeMismatch
from skewcat.relmonad import (
    BimoduleData,
    FunctorData,
    RelMonadData,
    alternative_extensions_rejected,
    backward_bimodule,
    bimodule_iso,
    check_bimodule,
    check_functor,
    check_relmonad,
    constant_functor,
    enumerate_relmonads,
    extend_functor,
    forward_bimodule,
    hom_bimodule,
    identity_functor,
    mutate_relmonad,
    relmonad_candidates,
    relmonad_monoid_equivalence,
)


def par_to_z2():
    return FunctorData(parallel_pair(), z2_category(), {0: "*", 1: "*"},
                       {"id0": "1", "id1": "1", "p": "s", "q": "1"}, "F")


def fixtures():
    return {
        "hom": hom_bimodule(z2_category()),
        "forward": forward_bimodule(par_to_z2()),
        "backward": backward_bimodule(constant_functor(z2_category(), terminal_category(), "*")),
    }


def kleisli_triples(c):
    """Monads (T, eta, mu) on ``c`` found by brute force, reported as the
    Kleisli data (T, eta, k |-> Tk ; mu)."""
    objs, names = list(c.objects), list(c.morphisms)
    found = []
    for image in itertools.product(objs, repeat=len(objs)):
        T0 = dict(zip(objs, image))
        maps = [c.hom(T0[c.dom(f)], T0[c.cod(f)]) for f in names]
        for pick in itertools.product(*maps):
            T1 = dict(zip(names, pick))
            if any(T1[c.id(x)] != c.id(T0[x]) for x in objs):
                continue
            if any(T1[h] != c.then(T1[f], T1[g]) for (f, g), h in c.composition.items()):
                continue
            etas = [c.hom(x, T0[x]) for x in objs]
            mus = [c.hom(T0[T0[x]], T0[x]) for x in objs]
            for ep in itertools.product(*etas):
                eta = dict(zip(objs, ep))
                if any(c.then(f, eta[c.cod(f)]) != c.then(eta[c.dom(f)], T1[f]) for f in names):
                    continue
                for mp in itertools.product(*mus):
                    mu = dict(zip(objs, mp))
                    if any(c.then(T1[T1[f]], mu[c.cod(f)]) != c.then(mu[c.dom(f)], T1[f]) for f in names):
                        continue
                    if any(c.then(T1[eta[x]], mu[x]) != c.id(T0[x]) for x in objs):
                        continue
                    if any(c.then(eta[T0[x]], mu[x]) != c.id(T0[x]) for x in objs):
                        continue
                    if any(c.then(T1[mu[x]], mu[x]) != c.then(mu[T0[x]], mu[x]) for x in objs):
                        continue
                    ext = {(x, y, k): c.then(T1[k], mu[y]) for x in objs for y in objs for k in c.hom(x, T0[y])}
                    found.append((T0, eta, ext))
    return found


def _key(R):
    return json.dumps(R.to_json() if isinstance(R, RelMonadData)
                      else RelMonadData(*R).to_json(), sort_keys=True)


@pytest.mark.parametrize("cat", [terminal_category, arrow_category, z2_category, parallel_pair, chain3])
def test_relative_monads_on_hom_are_kleisli_triples(cat):
    c = cat()
    O = hom_bimodule(c)
    ours = {_key(R) for R in enumerate_relmonads(O)}
    theirs = {_key(t) for t in kleisli_triples(c)}
    assert ours == theirs


def test_bimodule_fixtures_are_lawful():
    for O in fixtures().values():
        assert check_bimodule(O) == []
    assert check_functor(par_to_z2()) == []


def test_bimodule_json_round_trip():
    for O in fixtures().values():
        back = BimoduleData.from_json(json.loads(json.dumps(O.to_json())))
        assert json.dumps(back.to_json(), sort_keys=True) == json.dumps(O.to_json(), sort_keys=True)


def test_dangling_references():
    doc = hom_bimodule(z2_category()).to_json()
    doc["sets"]["*,nowhere"] = []
    with pytest.raises(DanglingReference):
        BimoduleData.from_json(doc)
    bad = FunctorData(z2_category(), z2_category(), {"*": "*"}, {"1": "1"}, "G")
    with pytest.raises(DanglingReference):
        check_functor(bad)


def test_broken_action_is_reported():
    O = hom_bimodule(z2_category())
    O.left[("s", "*", "s")] = "s"
    laws = {v.law for v in check_bimodule(O)}
    assert laws


def test_type_mismatch():
    O = hom_bimodule(z2_category())
    R = enumerate_relmonads(O)[0]
    with pytest.raises(TypeMismatch):
        check_relmonad(O, RelMonadData(R.T, {"*": "nope"}, R.ext))


def test_forward_along_identity_is_hom():
    c = parallel_pair()
    assert bimodule_iso(forward_bimodule(identity_functor(c)), hom_bimodule(c)) is not None


def test_galois_connection():
    """L -| U gives D(Lx, y) ~ C(x, Uy) as bimodules."""
    two, one = arrow_category(), terminal_category()
    L = FunctorData(two, one, {0: "*", 1: "*"}, {f: one.id("*") for f in two.morphisms}, "L")
    top = FunctorData(one, two, {"*": 1}, {one.id("*"): two.id(1)}, "U")
    bottom = FunctorData(one, two, {"*": 0}, {one.id("*"): two.id(0)}, "U0")
    assert bimodule_iso(forward_bimodule(L), backward_bimodule(top)) is not None
    assert bimodule_iso(forward_bimodule(L), backward_bimodule(bottom)) is None


def test_extension_is_unique_choice():
    for O in fixtures().values():
        for R in enumerate_relmonads(O):
            Tf, viol = extend_functor(O, R)
            assert viol == []
            assert check_functor(Tf) == []
            assert alternative_extensions_rejected(O, R)


@pytest.mark.parametrize("name", ["hom", "forward", "backward"])
def test_both_columns_agree_on_candidates(name):
    O = fixtures()[name]
    for R in relmonad_candidates(O):
        eq = relmonad_monoid_equivalence(O, R)
        passes = not check_relmonad(O, R) and not extend_functor(O, R)[1]
        assert eq.relmonad_ok == passes
        assert eq.agree


@pytest.mark.parametrize("name", ["hom", "forward", "backward"])
def test_both_columns_agree_on_mutations(name):
    O = fixtures()[name]
    rng = random.Random(7)
    base = enumerate_relmonads(O)
    for _ in range(20):
        R, _ = mutate_relmonad(O, rng.choice(base), rng)
        assert relmonad_monoid_equivalence(O, R).agree


def test_mutation_needs_room():
    O = hom_bimodule(arrow_category())
    R = enumerate_relmonads(O)[0]
    with pytest.raises(ValueError):
        mutate_relmonad(O, R, random.Random(0))


def test_relmonad_json_round_trip():
    O = fixtures()["forward"]
    for R in enumerate_relmonads(O):
        assert _key(RelMonadData.from_json(json.loads(_key(R)), O)) == _key(R)
