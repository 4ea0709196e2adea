"""Functors, bimodules and relative monads between finite categories.

An element of a bimodule O : C -|-> D is addressed by ``(x, y, label)`` with
``x`` a C-object, ``y`` a D-object and ``label`` a name unique inside
O(x, y).  The two actions are tables:

* ``left[(f, y, label)]`` for f : x' -> x in C and label in O(x, y), giving
  a label in O(x', y);
* ``right[(x, label, h)]`` for label in O(x, y) and h : y -> y' in D, giving a
  label in O(x, y').
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .category import FiniteCategory, check_category
from .errors import DEFAULT_GUARD, DanglingReference, TypeMismatch, guard
from .violation import Violation, expect


@dataclass
class FunctorData:
    source: FiniteCategory
    target: FiniteCategory
    objects: dict
    morphisms: dict
    name: str = "F"

    def __call__(self, f):
        return self.morphisms[f]


def identity_functor(c: FiniteCategory) -> FunctorData:
    return FunctorData(c, c, {x: x for x in c.objects}, {f: f for f in c.morphisms}, "Id")


def constant_functor(c: FiniteCategory, d: FiniteCategory, y) -> FunctorData:
    return FunctorData(c, d, {x: y for x in c.objects}, {f: d.id(y) for f in c.morphisms}, f"const_{y}")


def check_functor(F: FunctorData) -> list:
    c, d = F.source, F.target
    out: list[Violation] = []
    for x in c.objects:
        if x not in F.objects or F.objects[x] not in d.objects:
            raise DanglingReference(f"{F.name} has no valid image for object {x!r}")
    for f in c.morphisms:
        if f not in F.morphisms or F.morphisms[f] not in d.morphisms:
            raise DanglingReference(f"{F.name} has no valid image for morphism {f!r}")
    for f, (a, b) in c.morphisms.items():
        expect(out, "functor-typed", (f,), d.morphisms[F(f)], (F.objects[a], F.objects[b]))
    if out:
        return out
    for x in c.objects:
        expect(out, "functor-identity", (x,), F(c.id(x)), d.id(F.objects[x]))
    for (f, g), h in c.composition.items():
        expect(out, "functor-composition", (f, g), F(h), d.then(F(f), F(g)))
    return out


@dataclass
class BimoduleData:
    C: FiniteCategory
    D: FiniteCategory
    sets: dict  # (x, y) -> tuple of labels
    left: dict  # (f, y, label) -> label
    right: dict  # (x, label, h) -> label
    name: str = "O"

    def elems(self, x, y) -> tuple:
        return tuple(self.sets.get((x, y), ()))

    def act_left(self, f, y, label):
        return self.left[(f, y, label)]

    def act_right(self, x, label, h):
        return self.right[(x, label, h)]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "C": self.C.to_json(),
            "D": self.D.to_json(),
            "sets": {f"{x},{y}": list(v) for (x, y), v in self.sets.items()},
            "left_action": {f"{f}|{y}|{g}": r for (f, y, g), r in self.left.items()},
            "right_action": {f"{x}|{g}|{h}": r for (x, g, h), r in self.right.items()},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "BimoduleData":
        C = FiniteCategory.from_json(doc["C"])
        D = FiniteCategory.from_json(doc["D"])
        cobj = {str(x): x for x in C.objects}
        dobj = {str(y): y for y in D.objects}

        def parse_pair(key):
            x, y = key.split(",")
            if x not in cobj or y not in dobj:
                raise DanglingReference(f"bimodule set {key!r} names an unknown object")
            return cobj[x], dobj[y]

        sets = {parse_pair(k): tuple(v) for k, v in doc["sets"].items()}
        left = {}
        for k, r in doc["left_action"].items():
            f, y, g = k.split("|")
            left[(f, dobj.get(y, y), g)] = r
        right = {}
        for k, r in doc["right_action"].items():
            x, g, h = k.split("|")
            right[(cobj.get(x, x), g, h)] = r
        return cls(C, D, sets, left, right, doc.get("name", "O"))


def check_bimodule(O: BimoduleData) -> list:
    C, D = O.C, O.D
    out: list[Violation] = []
    for x in C.objects:
        for y in D.objects:
            for g in O.elems(x, y):
                for f in [f for f, (_, b) in C.morphisms.items() if b == x]:
                    key = (f, y, g)
                    if key not in O.left:
                        raise DanglingReference(f"left action undefined on {key}")
                    expect(out, "left-typed", key, O.left[key] in O.elems(C.dom(f), y), True)
                for h in [h for h, (a, _) in D.morphisms.items() if a == y]:
                    key = (x, g, h)
                    if key not in O.right:
                        raise DanglingReference(f"right action undefined on {key}")
                    expect(out, "right-typed", key, O.right[key] in O.elems(x, D.cod(h)), True)
    if out:
        return out
    for (x, y), labels in O.sets.items():
        for g in labels:
            expect(out, "left-unit", (x, y, g), O.act_left(C.id(x), y, g), g)
            expect(out, "right-unit", (x, y, g), O.act_right(x, g, D.id(y)), g)
            into = [f for f, (_, b) in C.morphisms.items() if b == x]
            outof = [h for h, (a, _) in D.morphisms.items() if a == y]
            for f in into:
                for f2 in [f2 for f2, (_, b) in C.morphisms.items() if b == C.dom(f)]:
                    expect(out, "left-associativity", (f2, f, g),
                           O.act_left(C.then(f2, f), y, g), O.act_left(f2, y, O.act_left(f, y, g)))
                for h in outof:
                    expect(out, "mixed-associativity", (f, g, h),
                           O.act_right(C.dom(f), O.act_left(f, y, g), h), O.act_left(f, D.cod(h), O.act_right(x, g, h)))
            for h in outof:
                for h2 in [h2 for h2, (a, _) in D.morphisms.items() if a == D.cod(h)]:
                    expect(out, "right-associativity", (g, h, h2),
                           O.act_right(x, g, D.then(h, h2)), O.act_right(x, O.act_right(x, g, h), h2))
    return out


def check_structure(kind: str, data) -> list:
    """Exhaustive law check for ``kind`` in {category, functor, bimodule}."""
    if kind == "category":
        return check_category(data)
    if kind == "functor":
        return check_functor(data)
    if kind == "bimodule":
        return check_bimodule(data)
    raise ValueError(f"unknown structure kind {kind!r}")


def hom_bimodule(c: FiniteCategory) -> BimoduleData:
    sets = {(x, y): tuple(c.hom(x, y)) for x in c.objects for y in c.objects}
    left, right = {}, {}
    for (f, g), h in c.composition.items():
        left[(f, c.cod(g), g)] = h
        right[(c.dom(f), f, g)] = h
    return BimoduleData(c, c, sets, left, right, f"hom({c.name})")


def forward_bimodule(F: FunctorData) -> BimoduleData:
    """O(x, y) = D(Fx, y); C acts through F, D by composition."""
    C, D = F.source, F.target
    sets = {(x, y): tuple(D.hom(F.objects[x], y)) for x in C.objects for y in D.objects}
    left, right = {}, {}
    for (x, y), labels in sets.items():
        for g in labels:
            for f in [f for f, (_, b) in C.morphisms.items() if b == x]:
                left[(f, y, g)] = D.then(F(f), g)
            for h in [h for h, (a, _) in D.morphisms.items() if a == y]:
                right[(x, g, h)] = D.then(g, h)
    return BimoduleData(C, D, sets, left, right, f"fwd({F.name})")


def backward_bimodule(U: FunctorData) -> BimoduleData:
    """O(x, y) = C(x, Uy) for U : D -> C; D acts through U."""
    D, C = U.source, U.target
    sets = {(x, y): tuple(C.hom(x, U.objects[y])) for x in C.objects for y in D.objects}
    left, right = {}, {}
    for (x, y), labels in sets.items():
        for g in labels:
            for f in [f for f, (_, b) in C.morphisms.items() if b == x]:
                left[(f, y, g)] = C.then(f, g)
            for h in [h for h, (a, _) in D.morphisms.items() if a == y]:
                right[(x, g, h)] = C.then(g, U(h))
    return BimoduleData(C, D, sets, left, right, f"bwd({U.name})")


def bimodule_iso(O: BimoduleData, P: BimoduleData, limit: int | None = DEFAULT_GUARD):
    """First family of bijections O(x,y) -> P(x,y) commuting with both
    actions, or None.  Both bimodules must share their boundary categories."""
    if O.C.objects != P.C.objects or O.D.objects != P.D.objects:
        return None
    keys = [(x, y) for x in O.C.objects for y in O.D.objects]
    if any(len(O.elems(*k)) != len(P.elems(*k)) for k in keys):
        return None
    choices = [list(itertools.permutations(P.elems(*k))) for k in keys]
    total = 1
    for ch in choices:
        total *= len(ch)
    guard(total, limit, "bimodule bijections")
    for pick in itertools.product(*choices):
        phi = {k: dict(zip(O.elems(*k), img)) for k, img in zip(keys, pick)}
        ok = True
        for (f, y, g), r in O.left.items():
            x = O.C.cod(f)
            if P.left[(f, y, phi[(x, y)][g])] != phi[(O.C.dom(f), y)][r]:
                ok = False
                break
        if ok:
            for (x, g, h), r in O.right.items():
                y = O.D.dom(h)
                if P.right[(x, phi[(x, y)][g], h)] != phi[(x, O.D.cod(h))][r]:
                    ok = False
                    break
        if ok:
            return phi
    return None


# ---------------------------------------------------------------------------
# relative monads


@dataclass
class RelMonadData:
    T: dict  # C-object -> D-object
    eta: dict  # x -> label in O(x, Tx)
    ext: dict  # (x, y, label in O(x, Ty)) -> D-morphism Tx -> Ty

    def to_json(self) -> dict:
        return {
            "T": {str(x): y for x, y in self.T.items()},
            "eta": {str(x): g for x, g in self.eta.items()},
            "ext": {f"{x},{y},{k}": h for (x, y, k), h in self.ext.items()},
        }

    @classmethod
    def from_json(cls, doc: dict, O: BimoduleData) -> "RelMonadData":
        cobj = {str(x): x for x in O.C.objects}
        dobj = {str(y): y for y in O.D.objects}

        def c(x):
            if x not in cobj:
                raise DanglingReference(f"unknown C-object {x!r}")
            return cobj[x]

        T = {c(x): dobj.get(str(y), y) for x, y in doc["T"].items()}
        eta = {c(x): g for x, g in doc["eta"].items()}
        ext = {}
        for k, h in doc["ext"].items():
            x, y, g = k.split(",", 2)
            ext[(c(x), c(y), g)] = h
        return cls(T, eta, ext)


def _typecheck(O: BimoduleData, R: RelMonadData) -> None:
    C, D = O.C, O.D
    for x in C.objects:
        if R.T.get(x) not in D.objects:
            raise TypeMismatch(f"T({x!r}) is not a D-object")
        if R.eta.get(x) not in O.elems(x, R.T[x]):
            raise TypeMismatch(f"eta_{x} is not in O({x}, {R.T[x]})")
    for x in C.objects:
        for y in C.objects:
            for k in O.elems(x, R.T[y]):
                h = R.ext.get((x, y, k))
                if h is None or D.morphisms.get(h) != (R.T[x], R.T[y]):
                    raise TypeMismatch(f"ext of {k!r} : {x} -> T{y} is not a D-morphism T{x} -> T{y}")


def check_relmonad(O: BimoduleData, R: RelMonadData) -> list:
    _typecheck(O, R)
    C, D = O.C, O.D
    T, eta, ext = R.T, R.eta, R.ext
    out: list[Violation] = []
    for x in C.objects:
        for y in C.objects:
            for k in O.elems(x, T[y]):
                expect(out, "unit-triangle", ((x, y), (k,)), O.act_right(x, eta[x], ext[(x, y, k)]), k)
    for x in C.objects:
        expect(out, "eta-ext", ((x,), ()), ext[(x, x, eta[x])], D.id(T[x]))
    for x, y, z in itertools.product(C.objects, repeat=3):
        for k in O.elems(x, T[y]):
            for l in O.elems(y, T[z]):
                kl = O.act_right(x, k, ext[(y, z, l)])
                expect(out, "ext-associativity", ((x, y, z), (k, l)),
                       ext[(x, z, kl)], D.then(ext[(x, y, k)], ext[(y, z, l)]))
    return out


def _extension(O: BimoduleData, R: RelMonadData) -> FunctorData:
    C = O.C
    mors = {}
    for f, (x, y) in C.morphisms.items():
        mors[f] = R.ext[(x, y, O.act_left(f, R.T[y], R.eta[y]))]
    return FunctorData(C, O.D, dict(R.T), mors, "T")


def extend_functor(O: BimoduleData, R: RelMonadData):
    """T k := (k ; eta_y)*, plus functoriality and the naturality squares."""
    _typecheck(O, R)
    Tf = _extension(O, R)
    return Tf, _naturality(O, R, Tf)


def _naturality(O, R, Tf) -> list:
    C, D = O.C, O.D
    T, eta, ext = R.T, R.eta, R.ext
    out = check_functor(Tf)
    for f, (u, x) in C.morphisms.items():
        expect(out, "eta-natural", (("f", f), (u,), ()),
               O.act_left(f, T[x], eta[x]), O.act_right(u, eta[u], Tf(f)))
        for y in C.objects:
            for g in O.elems(x, T[y]):
                expect(out, "ext-natural-source", (("f", f), (x, y), (g,)),
                       ext[(u, y, O.act_left(f, T[y], g))], D.then(Tf(f), ext[(x, y, g)]))
    for h, (y, z) in C.morphisms.items():
        for x in C.objects:
            for g in O.elems(x, T[y]):
                expect(out, "ext-natural-target", (("h", h), (x, y), (g,)),
                       ext[(x, z, O.act_right(x, g, Tf(h)))], D.then(ext[(x, y, g)], Tf(h)))
    return out


def relmonad_candidates(O: BimoduleData, limit: int | None = DEFAULT_GUARD, prune: bool = False):
    """Every well-typed (T, eta, ext), deterministic order.  With ``prune``
    each ext entry is restricted to values satisfying the unit triangle,
    which every relative monad must."""
    C, D = O.C, O.D
    cobjs = C.objects
    for image in itertools.product(D.objects, repeat=len(cobjs)):
        T = dict(zip(cobjs, image))
        etas = [O.elems(x, T[x]) for x in cobjs]
        keys = [(x, y, k) for x in cobjs for y in cobjs for k in O.elems(x, T[y])]
        for eta_pick in itertools.product(*etas):
            eta = dict(zip(cobjs, eta_pick))
            options = []
            for x, y, k in keys:
                hs = D.hom(T[x], T[y])
                if prune:
                    hs = [h for h in hs if O.act_right(x, eta[x], h) == k]
                options.append(hs)
            total = 1
            for o in options:
                total *= len(o)
            guard(total, limit, "relative monad candidates")
            for ext_pick in itertools.product(*options):
                yield RelMonadData(T, eta, dict(zip(keys, ext_pick)))


def enumerate_relmonads(O: BimoduleData, limit: int | None = DEFAULT_GUARD) -> list:
    out = []
    for R in relmonad_candidates(O, limit, prune=True):
        if not check_relmonad(O, R):
            out.append(R)
    return out


def mutate_relmonad(O: BimoduleData, R: RelMonadData, rng: random.Random):
    """Change one eta or ext entry to a different well-typed value."""
    spots = []
    for x in O.C.objects:
        alts = [g for g in O.elems(x, R.T[x]) if g != R.eta[x]]
        if alts:
            spots.append(("eta", x, alts))
    for key, h in R.ext.items():
        x, y, _ = key
        alts = [a for a in O.D.hom(R.T[x], R.T[y]) if a != h]
        if alts:
            spots.append(("ext", key, alts))
    if not spots:
        raise ValueError("every component has a single well-typed value")
    what, key, alts = spots[rng.randrange(len(spots))]
    value = alts[rng.randrange(len(alts))]
    eta, ext = dict(R.eta), dict(R.ext)
    (eta if what == "eta" else ext)[key] = value
    return RelMonadData(dict(R.T), eta, ext), f"{what}[{key}] := {value}"


def alternative_extensions_rejected(O: BimoduleData, R: RelMonadData, limit: int | None = DEFAULT_GUARD) -> bool:
    """Every functor-candidate morphism map other than (k ; eta)* breaks
    some naturality square."""
    canonical = _extension(O, R)
    C, D = O.C, O.D
    names = list(C.morphisms)
    options = [D.hom(R.T[C.dom(f)], R.T[C.cod(f)]) for f in names]
    total = 1
    for o in options:
        total *= len(o)
    guard(total, limit, "alternative extensions")
    for pick in itertools.product(*options):
        mors = dict(zip(names, pick))
        if mors == canonical.morphisms:
            continue
        alt = FunctorData(C, D, dict(R.T), mors, "T'")
        if not _naturality(O, R, alt):
            return False
    return True


# ---------------------------------------------------------------------------
# the pointwise left-skew multicategory of functors C -> D


@dataclass(frozen=True)
class Family:
    """A morphism of the functor multicategory with every carrier equal to
    one fixed T.  ``args`` counts O-arguments.  Indices are the C-objects
    x_0..x_args; argument j lies in O(x_j, T x_{j+1}).  A loose family
    returns a label in O(x_0, T x_args); a tight one a D-morphism
    T x_0 -> T x_args."""

    tight: bool
    args: int
    fn: object = field(compare=False)

    @property
    def arity(self) -> int:
        return self.args + (1 if self.tight else 0)


class PointwiseMulticategory:
    def __init__(self, O: BimoduleData, T: FunctorData):
        self.O, self.T = O, T

    def loosen(self, f: Family) -> Family:
        if not f.tight:
            raise ValueError("already loose")
        O, T = self.O, self.T

        def fn(xs, args):
            return O.act_right(xs[0], args[0], f.fn(xs[1:], args[1:]))

        return Family(False, f.args + 1, fn)

    def identity(self) -> Family:
        D, T = self.O.D, self.T
        return Family(True, 0, lambda xs, args: D.id(T.objects[xs[0]]))

    def compose(self, g: Family, i: int, f: Family) -> Family:
        if not 0 <= i < g.arity:
            raise IndexError(i)
        D = self.O.D
        if g.tight and i == 0:
            if not f.tight:
                raise ValueError("the tight slot needs a tight family")
            m = f.args

            def fn(xs, args):
                return D.then(f.fn(xs[: m + 1], args[:m]), g.fn(xs[m:], args[m:]))

            return Family(True, m + g.args, fn)
        if f.tight:
            raise ValueError("a loose slot needs a loose family")
        a = i - 1 if g.tight else i
        m = f.args

        def fn(xs, args):
            inner = f.fn(xs[a : a + m + 1], args[a : a + m])
            return g.fn(xs[: a + 1] + xs[a + m :], args[:a] + (inner,) + args[a + m :])

        return Family(g.tight, g.args + m - 1, fn)

    def instances(self, n: int):
        """All (indices, arguments) for a family with ``n`` arguments."""
        O, T = self.O, self.T
        for xs in itertools.product(self.O.C.objects, repeat=n + 1):
            sets = [O.elems(xs[j], T.objects[xs[j + 1]]) for j in range(n)]
            for args in itertools.product(*sets):
                yield xs, args

    def equal(self, law, f: Family, g: Family, out: list, log: list) -> None:
        assert f.tight == g.tight and f.args == g.args
        for xs, args in self.instances(f.args):
            lhs, rhs = f.fn(xs, args), g.fn(xs, args)
            log.append((law, (xs, args), lhs == rhs))
            expect(out, law, (xs, args), lhs, rhs)

    def extranatural(self, name, phi: Family, out: list, log: list) -> None:
        """Naturality of ``phi`` in each index separately."""
        O, T, C, D = self.O, self.T, self.O.C, self.O.D
        n = phi.args

        def record(law, witness, lhs, rhs):
            log.append((law, witness, lhs == rhs))
            expect(out, law, witness, lhs, rhs)

        if n == 0 and not phi.tight:
            for f, (u, x) in C.morphisms.items():
                record(f"{name}-extranatural", (("f", f), (u,), ()),
                       O.act_left(f, T.objects[x], phi.fn((x,), ())), O.act_right(u, phi.fn((u,), ()), T(f)))
            return
        if n == 0:
            return
        for xs, args in self.instances(n):
            x0 = xs[0]
            for f, (u, _) in [(f, ab) for f, ab in C.morphisms.items() if ab[1] == x0]:
                moved = (O.act_left(f, T.objects[xs[1]], args[0]),) + args[1:]
                lhs = phi.fn((u,) + xs[1:], moved)
                here = phi.fn(xs, args)
                rhs = D.then(T(f), here) if phi.tight else O.act_left(f, T.objects[xs[-1]], here)
                record(f"{name}-natural-source", (("f", f), xs, args), lhs, rhs)
            last = xs[-1]
            for h, (_, z) in [(h, ab) for h, ab in C.morphisms.items() if ab[0] == last]:
                moved = args[:-1] + (O.act_right(xs[-2], args[-1], T(h)),)
                lhs = phi.fn(xs[:-1] + (z,), moved)
                here = phi.fn(xs, args)
                rhs = D.then(here, T(h)) if phi.tight else O.act_right(x0, here, T(h))
                record(f"{name}-natural-target", (("h", h), xs, args), lhs, rhs)
            for j in range(1, n):
                for h, (_, z) in [(h, ab) for h, ab in C.morphisms.items() if ab[0] == xs[j]]:
                    for l in O.elems(z, T.objects[xs[j + 1]]):
                        a1 = args[:j - 1] + (O.act_right(xs[j - 1], args[j - 1], T(h)), l) + args[j + 1:]
                        a2 = args[:j] + (O.act_left(h, T.objects[xs[j + 1]], l),) + args[j + 1:]
                        lhs = phi.fn(xs[:j] + (z,) + xs[j + 1:], a1)
                        rhs = phi.fn(xs, a2)
                        record(f"{name}-dinatural-{j}", (("h", h), xs, args, l), lhs, rhs)


@dataclass
class EquivalenceReport:
    relmonad: list  # (law, witness, passed)
    monoid: list
    relmonad_ok: bool
    monoid_ok: bool
    pairing_ok: bool

    @property
    def agree(self) -> bool:
        return self.relmonad_ok == self.monoid_ok and self.pairing_ok

    def summary(self) -> dict:
        def tally(rows):
            out = {}
            for law, _, ok in rows:
                p, f = out.get(law, (0, 0))
                out[law] = (p + ok, f + (not ok))
            return out

        return {"relmonad": tally(self.relmonad), "monoid": tally(self.monoid),
                "relmonad_ok": self.relmonad_ok, "monoid_ok": self.monoid_ok, "agree": self.agree}


# monoid-column law -> relative-monad-column law with the same instances
PAIRED_LAWS = {
    "left-unit": "unit-triangle",
    "right-unit": "eta-ext",
    "associativity": "ext-associativity",
    "m-natural-source": "ext-natural-source",
    "m-natural-target": "ext-natural-target",
    "e-extranatural": "eta-natural",
    "carrier-functor-identity": "functor-identity",
    "carrier-functor-composition": "functor-composition",
}


def _instances_relmonad(O, R) -> list:
    rows = []
    T, eta, ext = R.T, R.eta, R.ext
    C, D = O.C, O.D
    for x in C.objects:
        for y in C.objects:
            for k in O.elems(x, T[y]):
                rows.append(("unit-triangle", ((x, y), (k,)), O.act_right(x, eta[x], ext[(x, y, k)]) == k))
    for x in C.objects:
        rows.append(("eta-ext", ((x,), ()), ext[(x, x, eta[x])] == D.id(T[x])))
    for x, y, z in itertools.product(C.objects, repeat=3):
        for k in O.elems(x, T[y]):
            for l in O.elems(y, T[z]):
                kl = O.act_right(x, k, ext[(y, z, l)])
                rows.append(("ext-associativity", ((x, y, z), (k, l)),
                             ext[(x, z, kl)] == D.then(ext[(x, y, k)], ext[(y, z, l)])))
    Tf = _extension(O, R)
    for v in _naturality(O, R, Tf):
        rows.append((v.law, v.witness, False))
    return rows


def relmonad_monoid_equivalence(O: BimoduleData, R: RelMonadData) -> EquivalenceReport:
    """Check R both as a relative monad and as a monoid (T, ext, eta) in the
    left-skew multicategory of functors, side by side."""
    _typecheck(O, R)
    rel_viol = check_relmonad(O, R)
    Tf, nat_viol = extend_functor(O, R)
    relmonad_rows = _instances_relmonad(O, R)

    P = PointwiseMulticategory(O, Tf)
    m = Family(True, 1, lambda xs, args: R.ext[(xs[0], xs[1], args[0])])
    e = Family(False, 0, lambda xs, args: R.eta[xs[0]])
    one = P.identity()
    viol: list = []
    log: list = []
    for v in check_functor(Tf):
        viol.append(v)
        log.append(("carrier-" + v.law, v.witness, False))
    P.equal("left-unit", P.compose(P.loosen(m), 0, e), P.loosen(one), viol, log)
    P.equal("right-unit", P.compose(m, 1, e), one, viol, log)
    P.equal("associativity", P.compose(m, 0, m), P.compose(m, 1, P.loosen(m)), viol, log)
    P.extranatural("m", m, viol, log)
    P.extranatural("e", e, viol, log)

    failing_m = {}
    for law, w, ok in log:
        if not ok:
            failing_m.setdefault(law, set()).add(w)
    failing_r = {}
    for law, w, ok in relmonad_rows:
        if not ok:
            failing_r.setdefault(law, set()).add(w)
    pairing = all(failing_m.get(ml, set()) == failing_r.get(rl, set()) for ml, rl in PAIRED_LAWS.items())
    return EquivalenceReport(relmonad_rows, log, not rel_viol and not nat_viol, not viol, pairing)
