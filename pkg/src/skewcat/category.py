"""Finite categories given by explicit tables, plus a few fixtures."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import DanglingReference
from .violation import Violation, expect


@dataclass
class FiniteCategory:
    objects: tuple
    morphisms: dict  # name -> (dom, cod), in a fixed order
    identities: dict  # object -> name
    composition: dict  # (f, g) -> f;g  (diagrammatic order)
    name: str = "C"
    _homs: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.objects = tuple(self.objects)
        self.morphisms = dict(self.morphisms)

    def dom(self, f):
        return self.morphisms[f][0]

    def cod(self, f):
        return self.morphisms[f][1]

    def hom(self, a, b) -> list:
        if self._homs is None:
            homs = {}
            for f, (d, c) in self.morphisms.items():
                homs.setdefault((d, c), []).append(f)
            self._homs = homs
        return self._homs.get((a, b), [])

    def id(self, x):
        return self.identities[x]

    def then(self, f, g):
        """``f`` followed by ``g``."""
        return self.composition[(f, g)]

    def _out(self, x):
        return [g for g, (d, _) in self.morphisms.items() if d == x]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "objects": list(self.objects),
            "morphisms": [{"name": f, "dom": d, "cod": c} for f, (d, c) in self.morphisms.items()],
            "identities": dict(self.identities),
            "composition": {f"{f};{g}": h for (f, g), h in self.composition.items()},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "FiniteCategory":
        mors = {}
        for m in doc["morphisms"]:
            mors[m["name"]] = (m["dom"], m["cod"])
        comp = {}
        for key, h in doc["composition"].items():
            f, g = key.split(";")
            comp[(f.strip(), g.strip())] = h
        by_text = {str(x): x for x in doc["objects"]}
        idents = {by_text.get(str(x), x): f for x, f in doc["identities"].items()}
        cat = cls(tuple(doc["objects"]), mors, idents, comp, doc.get("name", "C"))
        cat.check_references()
        return cat

    def check_references(self):
        objs = set(self.objects)
        for f, (d, c) in self.morphisms.items():
            if d not in objs or c not in objs:
                raise DanglingReference(f"morphism {f} has undeclared endpoint")
        for x, f in self.identities.items():
            if x not in objs or f not in self.morphisms:
                raise DanglingReference(f"identity of {x} refers to {f!r}")
        for (f, g), h in self.composition.items():
            for n in (f, g, h):
                if n not in self.morphisms:
                    raise DanglingReference(f"composition table mentions unknown morphism {n!r}")


def check_category(c: FiniteCategory) -> list:
    out: list[Violation] = []
    c.check_references()
    for x in c.objects:
        if x not in c.identities:
            out.append(Violation("identity-missing", (x,), None, x))
            continue
        i = c.identities[x]
        expect(out, "identity-typed", (x,), c.morphisms[i], (x, x))
    for f, (d, e) in c.morphisms.items():
        for g in c._out(e):
            key = (f, g)
            if key not in c.composition:
                out.append(Violation("composite-missing", key, None, key))
                continue
            h = c.composition[key]
            expect(out, "composite-typed", key, c.morphisms[h], (d, c.cod(g)))
    if out:
        return out
    for f, (d, e) in c.morphisms.items():
        expect(out, "left-unit", (f,), c.then(c.id(d), f), f)
        expect(out, "right-unit", (f,), c.then(f, c.id(e)), f)
        for g in c._out(e):
            fg = c.then(f, g)
            for h in c._out(c.cod(g)):
                expect(out, "associativity", (f, g, h), c.then(fg, h), c.then(f, c.then(g, h)))
    return out


# ---------------------------------------------------------------------------
# builders


def from_poset(elements, leq, name="P") -> FiniteCategory:
    """Thin category; the unique arrow a -> b is named ``a<=b``."""
    elements = tuple(elements)
    mors = {}
    for a, b in itertools.product(elements, repeat=2):
        if leq(a, b):
            mors[f"{a}<={b}"] = (a, b)
    ids = {a: f"{a}<={a}" for a in elements}
    comp = {}
    for a, b, c in itertools.product(elements, repeat=3):
        if leq(a, b) and leq(b, c):
            comp[(f"{a}<={b}", f"{b}<={c}")] = f"{a}<={c}"
    return FiniteCategory(elements, mors, ids, comp, name)


def from_monoid(elements, mult, unit, name="M", obj="*") -> FiniteCategory:
    """One-object category; ``mult(a, b)`` is ``a`` followed by ``b``."""
    mors = {e: (obj, obj) for e in elements}
    comp = {(a, b): mult(a, b) for a in elements for b in elements}
    return FiniteCategory((obj,), mors, {obj: unit}, comp, name)


def discrete(objects, name="Disc") -> FiniteCategory:
    return from_poset(objects, lambda a, b: a == b, name)


def terminal_category() -> FiniteCategory:
    return discrete(("*",), "1")


def arrow_category() -> FiniteCategory:
    return from_poset((0, 1), lambda a, b: a <= b, "2")


def z2_category() -> FiniteCategory:
    return from_monoid(("1", "s"), lambda a, b: "1" if a == b else "s", "1", "Z2")


def parallel_pair() -> FiniteCategory:
    mors = {"id0": (0, 0), "id1": (1, 1), "p": (0, 1), "q": (0, 1)}
    comp = {("id0", "id0"): "id0", ("id1", "id1"): "id1"}
    for f in ("p", "q"):
        comp[("id0", f)] = f
        comp[(f, "id1")] = f
    return FiniteCategory((0, 1), mors, {0: "id0", 1: "id1"}, comp, "Par")


def chain3() -> FiniteCategory:
    return from_poset((0, 1, 2), lambda a, b: a <= b, "3")


def diamond() -> FiniteCategory:
    """The four-element lattice bot < a, b < top."""
    below = {("bot", "a"), ("bot", "b"), ("bot", "top"), ("a", "top"), ("b", "top")}
    return from_poset(("bot", "a", "b", "top"), lambda x, y: x == y or (x, y) in below, "Diamond")


def fixture_categories() -> list:
    return [terminal_category(), arrow_category(), z2_category(), parallel_pair(), chain3()]


def relabel(c: FiniteCategory, objmap: dict, mormap: dict | None = None) -> FiniteCategory:
    mormap = mormap or {f: f for f in c.morphisms}
    return FiniteCategory(
        tuple(objmap[x] for x in c.objects),
        {mormap[f]: (objmap[d], objmap[e]) for f, (d, e) in c.morphisms.items()},
        {objmap[x]: mormap[f] for x, f in c.identities.items()},
        {(mormap[f], mormap[g]): mormap[h] for (f, g), h in c.composition.items()},
        c.name,
    )


def isomorphic_under(c: FiniteCategory, d: FiniteCategory, objmap: dict, mormap: dict) -> bool:
    """Do the given bijections carry ``c``'s tables onto ``d``'s?"""
    if sorted(map(repr, objmap.values())) != sorted(map(repr, d.objects)) or len(objmap) != len(c.objects):
        return False
    if len(set(mormap.values())) != len(d.morphisms) or len(mormap) != len(c.morphisms):
        return False
    for f, (a, b) in c.morphisms.items():
        if d.morphisms.get(mormap[f]) != (objmap[a], objmap[b]):
            return False
    for x in c.objects:
        if mormap[c.id(x)] != d.id(objmap[x]):
            return False
    for (f, g), h in c.composition.items():
        if d.then(mormap[f], mormap[g]) != mormap[h]:
            return False
    return True


def find_isomorphism(c: FiniteCategory, d: FiniteCategory):
    """First (objmap, mormap) witnessing c ≅ d, or None.  Exhaustive."""
    if len(c.objects) != len(d.objects) or len(c.morphisms) != len(d.morphisms):
        return None
    for image in itertools.permutations(d.objects):
        objmap = dict(zip(c.objects, image))
        pairs = [(a, b) for a in c.objects for b in c.objects]
        if any(len(c.hom(a, b)) != len(d.hom(objmap[a], objmap[b])) for a, b in pairs):
            continue
        choices = [list(itertools.permutations(d.hom(objmap[a], objmap[b]))) for a, b in pairs]
        for pick in itertools.product(*choices):
            mormap = {}
            for (a, b), targets in zip(pairs, pick):
                mormap.update(zip(c.hom(a, b), targets))
            if isomorphic_under(c, d, objmap, mormap):
                return objmap, mormap
    return None
