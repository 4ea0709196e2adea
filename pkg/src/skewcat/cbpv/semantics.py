"""Cartesian bases, RetSeq models and denotations of the F fragment."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field

from ..category import FiniteCategory, check_category, discrete, from_poset
from ..errors import InterpretationGap, CardinalityGuard, DEFAULT_GUARD, guard
from ..relmonad import BimoduleData, check_bimodule
from ..violation import Violation, expect
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
    substitute,
    term_size,
    typecheck,
)


@dataclass
class CartesianBase:
    """A finite category with chosen terminal object and binary products,
    together with value denotations X, computation denotations Y and the
    maps j : X -> Ob C and F : X -> Y."""

    C: FiniteCategory
    terminal: object
    products: dict  # (a, b) -> (a x b, pi, pi')
    X: tuple
    Y: tuple
    j: dict
    F: dict
    name: str = "base"

    def prod(self, a, b):
        return self.products[(a, b)][0]

    def pi(self, a, b):
        return self.products[(a, b)][1]

    def pi2(self, a, b):
        return self.products[(a, b)][2]

    def bang(self, a):
        return self.C.hom(a, self.terminal)[0]

    def pair(self, f, g):
        """The unique h with h;pi = f and h;pi' = g."""
        C = self.C
        src, a, b = C.dom(f), C.cod(f), C.cod(g)
        p = self.prod(a, b)
        hits = [h for h in C.hom(src, p) if C.then(h, self.pi(a, b)) == f and C.then(h, self.pi2(a, b)) == g]
        if len(hits) != 1:
            raise ValueError(f"no unique pairing of {f} and {g}")
        return hits[0]

    def times(self, f, x):
        """f x jA as a map Gamma' x x -> Gamma x x, written for x = jA."""
        C = self.C
        g2, g = C.dom(f), C.cod(f)
        return self.pair(C.then(self.pi(g2, x), f), self.pi2(g2, x))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "C": self.C.to_json(),
            "terminal": self.terminal,
            "products": [{"left": a, "right": b, "product": p, "pi": f, "pi2": g} for (a, b), (p, f, g) in self.products.items()],
            "X": list(self.X),
            "Y": list(self.Y),
            "j": dict(self.j),
            "F": dict(self.F),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CartesianBase":
        if "lattice" in doc:
            lat = doc["lattice"]
            below = {tuple(p) for p in lat["leq"]}
            return meet_semilattice_base(lat["elements"], lambda a, b: a == b or (a, b) in below,
                                         doc["X"], doc["Y"], doc["j"], doc["F"], doc.get("name", "base"))
        C = FiniteCategory.from_json(doc["C"])
        prods = {(p["left"], p["right"]): (p["product"], p["pi"], p["pi2"]) for p in doc["products"]}
        return cls(C, doc["terminal"], prods, tuple(doc["X"]), tuple(doc["Y"]), dict(doc["j"]), dict(doc["F"]),
                   doc.get("name", "base"))


def meet_semilattice_base(elements, leq, X, Y, j, F, name="base") -> CartesianBase:
    """Poset category with meets as products and the top as terminal."""
    elements = tuple(elements)
    C = from_poset(elements, leq, name)

    def glb(a, b):
        lower = [c for c in elements if leq(c, a) and leq(c, b)]
        best = [c for c in lower if all(leq(d, c) for d in lower)]
        if len(best) != 1:
            raise ValueError(f"{a} and {b} have no meet")
        return best[0]

    tops = [t for t in elements if all(leq(a, t) for a in elements)]
    if len(tops) != 1:
        raise ValueError("no top element")
    prods = {}
    for a, b in itertools.product(elements, repeat=2):
        m = glb(a, b)
        prods[(a, b)] = (m, f"{m}<={a}", f"{m}<={b}")
    return CartesianBase(C, tops[0], prods, tuple(X), tuple(Y), dict(j), dict(F), name)


def boolean_lattice_base() -> CartesianBase:
    """Subsets of {p, q} ordered by inclusion; value types a, b with
    j(a) = p, j(b) = pq (the top); Y = {Fa, Fb, K}."""
    elements = ("0", "p", "q", "pq")

    def leq(x, y):
        return set(x.replace("0", "")) <= set(y.replace("0", ""))

    return meet_semilattice_base(elements, leq, ("a", "b"), ("Fa", "Fb", "K"),
                                 {"a": "p", "b": "pq"}, {"a": "Fa", "b": "Fb"}, "Bool2")


def terminal_base() -> CartesianBase:
    return meet_semilattice_base(("*",), lambda x, y: True, ("a",), ("Fa",), {"a": "*"}, {"a": "Fa"}, "trivial")


def check_base(base: CartesianBase) -> list:
    C = base.C
    out = list(check_category(C))
    if out:
        return out
    for x in C.objects:
        expect(out, "terminal", (x,), len(C.hom(x, base.terminal)), 1)
    for (a, b), (p, f, g) in base.products.items():
        expect(out, "projection-typed", (a, b), (C.morphisms.get(f), C.morphisms.get(g)), ((p, a), (p, b)))
    if out:
        return out
    for (a, b), (p, pf, pg) in base.products.items():
        for c in C.objects:
            for f in C.hom(c, a):
                for g in C.hom(c, b):
                    hits = [h for h in C.hom(c, p) if C.then(h, pf) == f and C.then(h, pg) == g]
                    expect(out, "product-beta", (f, g), len(hits), 1)
            for h in C.hom(c, p):
                expect(out, "product-eta", (h,), base.pair(C.then(h, pf), C.then(h, pg)), h)
    for a in base.X:
        if base.j.get(a) not in C.objects:
            out.append(Violation("j-typed", (a,), base.j.get(a), "a C-object"))
        if base.F.get(a) not in base.Y:
            out.append(Violation("F-typed", (a,), base.F.get(a), "an element of Y"))
    return out


# ---------------------------------------------------------------------------
# RetSeq models (long form)


@dataclass
class RetSeqModel:
    base: CartesianBase
    O: BimoduleData  # C -|-> discrete(Y)
    ret: dict  # (Gamma, A, V) -> element of O(Gamma, FA)
    to: dict  # (Gamma, A, B, M, N) -> element of O(Gamma, B)
    name: str = "model"

    def act(self, f, b, s):
        return self.O.act_left(f, b, s)

    def elems(self, gamma, b):
        return self.O.elems(gamma, b)

    def seq(self, gamma, a, b, m, n):
        return self.to[(gamma, a, b, m, n)]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "form": "long",
            "base": self.base.to_json(),
            "sets": {f"{g}|{b}": list(v) for (g, b), v in self.O.sets.items()},
            "action": {f"{f}|{b}|{s}": r for (f, b, s), r in self.O.left.items()},
            "ret": {f"{g}|{a}|{v}": r for (g, a, v), r in self.ret.items()},
            "to": {"|".join(map(str, k)): r for k, r in self.to.items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def copy(self) -> "RetSeqModel":
        O = BimoduleData(self.O.C, self.O.D, dict(self.O.sets), dict(self.O.left), dict(self.O.right), self.O.name)
        return RetSeqModel(self.base, O, dict(self.ret), dict(self.to), self.name)


def _bimodule(base: CartesianBase, sets: dict, left: dict, name: str) -> BimoduleData:
    D = discrete(base.Y, "Y")
    right = {}
    for (g, b), labels in sets.items():
        for s in labels:
            right[(g, s, D.id(b))] = s
    return BimoduleData(base.C, D, sets, left, right, name)


def _model_from_json_tables(base, doc):
    sets = {}
    for k, v in doc["sets"].items():
        g, b = k.split("|")
        sets[(_obj(base, g), b)] = tuple(v)
    left = {}
    for k, r in doc["action"].items():
        f, b, s = k.split("|")
        left[(f, b, s)] = r
    return sets, left


def _obj(base, text):
    for x in base.C.objects:
        if str(x) == text:
            return x
    raise InterpretationGap(f"unknown base object {text!r}")


def model_from_json(doc: dict):
    base = CartesianBase.from_json(doc["base"])
    sets, left = _model_from_json_tables(base, doc)
    O = _bimodule(base, sets, left, doc.get("name", "O"))
    to = {}
    for k, r in doc["to"].items():
        g, a, b, m, n = k.split("|")
        to[(_obj(base, g), a, b, m, n)] = r
    if doc.get("form", "long") == "short":
        from .forms import ShortFormModel

        rets = {}
        for k, r in doc["rets"].items():
            g, a = k.split("|")
            rets[(_obj(base, g), a)] = r
        return ShortFormModel(base, O, rets, to, doc.get("name", "model"))
    ret = {}
    for k, r in doc["ret"].items():
        g, a, v = k.split("|")
        ret[(_obj(base, g), a, v)] = r
    return RetSeqModel(base, O, ret, to, doc.get("name", "model"))


def _free_module(base: CartesianBase, gens: dict):
    """Elements gen.h for h : Gamma -> at(gen), acted on by precomposition."""
    C = base.C
    sets, left = {}, {}
    for g in C.objects:
        for b, gl in gens.items():
            labels = []
            for gen, at in gl:
                labels.extend(f"{gen}.{h}" for h in C.hom(g, at))
            sets[(g, b)] = tuple(labels)
    for (g, b), labels in sets.items():
        for s in labels:
            gen, h = s.split(".", 1)
            for f in _into(C, g):
                left[(f, b, s)] = f"{gen}.{C.then(f, h)}"
    return sets, left


def _value_sets(base: CartesianBase):
    C = base.C
    sets, left = {}, {}
    for g in C.objects:
        for a in base.X:
            fa = base.F[a]
            sets[(g, fa)] = tuple(C.hom(g, base.j[a]))
        for a in base.X:
            fa = base.F[a]
            for h in sets[(g, fa)]:
                for f in [f for f, (_, c) in C.morphisms.items() if c == g]:
                    left[(f, fa, h)] = C.then(f, h)
    return sets, left


def _base_computation_types(base):
    return [b for b in base.Y if b not in base.F.values()]


def identity_model(base: CartesianBase, generators: dict | None = None) -> RetSeqModel:
    """O(Gamma, FA) = C(Gamma, jA); base computation types carry a free
    module (default: two generators at the terminal object)."""
    if len(set(base.F.values())) != len(base.F):
        raise ValueError("identity_model needs F injective")
    gens = generators or {b: [("k1", base.terminal), ("k2", base.terminal)] for b in _base_computation_types(base)}
    sets, left = _value_sets(base)
    s2, l2 = _free_module(base, gens)
    sets.update(s2)
    left.update(l2)
    O = _bimodule(base, sets, left, "O_id")
    C = base.C
    ret = {}
    for g in C.objects:
        for a in base.X:
            for v in C.hom(g, base.j[a]):
                ret[(g, a, v)] = v
    to = {}
    for g in C.objects:
        for a in base.X:
            ga = base.prod(g, base.j[a])
            for b in base.Y:
                for m in O.elems(g, base.F[a]):
                    for n in O.elems(ga, b):
                        to[(g, a, b, m, n)] = O.act_left(base.pair(C.id(g), m), b, n)
    return RetSeqModel(base, O, ret, to, "identity")


BOTTOM = "bot"


def exception_model(base: CartesianBase, generators: dict | None = None) -> RetSeqModel:
    """The identity model with a natural extra element ``bot`` everywhere;
    sequencing is strict in ``bot``."""
    ident = identity_model(base, generators)
    C = base.C
    sets = {k: v + (BOTTOM,) for k, v in ident.O.sets.items()}
    left = dict(ident.O.left)
    for (g, b) in sets:
        for f in [f for f, (_, c) in C.morphisms.items() if c == g]:
            left[(f, b, BOTTOM)] = BOTTOM
    O = _bimodule(base, sets, left, "O_exc")
    to = {}
    for g in C.objects:
        for a in base.X:
            ga = base.prod(g, base.j[a])
            for b in base.Y:
                for m in O.elems(g, base.F[a]):
                    for n in O.elems(ga, b):
                        if m == BOTTOM:
                            to[(g, a, b, m, n)] = BOTTOM
                        else:
                            to[(g, a, b, m, n)] = O.act_left(base.pair(C.id(g), m), b, n)
    return RetSeqModel(base, O, dict(ident.ret), to, "exception")


def builtin_models(base: CartesianBase) -> dict:
    return {"identity_model": identity_model(base), "exception_model": exception_model(base)}


def _into(C, g):
    return [f for f, (_, c) in C.morphisms.items() if c == g]


def check_retseq(model: RetSeqModel, limit: int | None = DEFAULT_GUARD) -> list:
    base, O = model.base, model.O
    C = base.C
    out = list(check_base(base)) + list(check_bimodule(O))
    if out:
        return out
    count = sum(len(O.elems(g, base.F[a])) * len(O.elems(base.prod(g, base.j[a]), b))
                for g in C.objects for a in base.X for b in base.Y)
    guard(count, limit, "sequencing instances")
    for g in C.objects:
        for a in base.X:
            fa = base.F[a]
            for v in C.hom(g, base.j[a]):
                r = model.ret.get((g, a, v))
                if r not in O.elems(g, fa):
                    out.append(Violation("ret-typed", (g, a, v), r, f"element of O({g},{fa})"))
            for b in base.Y:
                ga = base.prod(g, base.j[a])
                for m in O.elems(g, fa):
                    for n in O.elems(ga, b):
                        r = model.to.get((g, a, b, m, n))
                        if r not in O.elems(g, b):
                            out.append(Violation("to-typed", (g, a, b, m, n), r, f"element of O({g},{b})"))
    if out:
        return out
    for g in C.objects:
        for a in base.X:
            fa, ja = base.F[a], base.j[a]
            ga = base.prod(g, ja)
            for f in _into(C, g):
                g2 = C.dom(f)
                for v in C.hom(g, ja):
                    expect(out, "ret-natural", (f, a, v), O.act_left(f, fa, model.ret[(g, a, v)]), model.ret[(g2, a, C.then(f, v))])
                fx = base.times(f, ja)
                for b in base.Y:
                    for m in O.elems(g, fa):
                        for n in O.elems(ga, b):
                            lhs = O.act_left(f, b, model.to[(g, a, b, m, n)])
                            rhs = model.to[(g2, a, b, O.act_left(f, fa, m), O.act_left(fx, b, n))]
                            expect(out, "to-natural", (f, a, b, m, n), lhs, rhs)
            for v in C.hom(g, ja):
                for b in base.Y:
                    for n in O.elems(ga, b):
                        expect(out, "beta", (g, a, b, v, n), model.to[(g, a, b, model.ret[(g, a, v)], n)],
                               O.act_left(base.pair(C.id(g), v), b, n))
            back = model.ret[(ga, a, base.pi2(g, ja))]
            for m in O.elems(g, fa):
                expect(out, "eta", (g, a, m), model.to[(g, a, fa, m, back)], m)
            for a2 in base.X:
                fb, jb = base.F[a2], base.j[a2]
                gb = base.prod(g, jb)
                gab = base.prod(ga, jb)
                weaken = base.times(base.pi(g, ja), jb)
                for c in base.Y:
                    for m in O.elems(g, fa):
                        for n in O.elems(ga, fb):
                            for p in O.elems(gb, c):
                                lhs = model.to[(g, a2, c, model.to[(g, a, fb, m, n)], p)]
                                inner = model.to[(ga, a2, c, n, O.act_left(weaken, c, p))]
                                rhs = model.to[(g, a, c, m, inner)]
                                expect(out, "associativity", (g, a, a2, c, m, n, p), lhs, rhs)
    return out


def mutate_model(model: RetSeqModel, rng: random.Random, tables=("to",)):
    """Change one entry of ``to`` (or ``ret``) to another element of its
    codomain set."""
    spots = []
    O = model.O
    if "to" in tables:
        for key, r in model.to.items():
            alts = [s for s in O.elems(key[0], key[2]) if s != r]
            if alts:
                spots.append(("to", key, alts))
    if "ret" in tables:
        for key, r in model.ret.items():
            alts = [s for s in O.elems(key[0], model.base.F[key[1]]) if s != r]
            if alts:
                spots.append(("ret", key, alts))
    if not spots:
        raise ValueError("no entry has an alternative value")
    what, key, alts = spots[rng.randrange(len(spots))]
    new = model.copy()
    getattr(new, what)[key] = alts[rng.randrange(len(alts))]
    return new, f"{what}[{key}] := {getattr(new, what)[key]}"


# ---------------------------------------------------------------------------
# denotation


@dataclass
class Interpretation:
    value_types: dict  # value type name -> element of X
    computation_types: dict  # base computation type name -> element of Y
    value_constructors: dict  # name -> C-morphism
    computation_constructors: dict  # name -> O-element label

    @classmethod
    def from_json(cls, doc: dict) -> "Interpretation":
        return cls(dict(doc.get("value_types", {})), dict(doc.get("computation_types", {})),
                   dict(doc.get("value_constructors", {})), dict(doc.get("computation_constructors", {})))

    def to_json(self) -> dict:
        return {
            "value_types": self.value_types,
            "computation_types": self.computation_types,
            "value_constructors": self.value_constructors,
            "computation_constructors": self.computation_constructors,
        }


class Denotation:
    def __init__(self, model: RetSeqModel, interp: Interpretation, sig: CbpvSignature):
        self.model, self.interp, self.sig = model, interp, sig
        self.base = model.base

    def vtype(self, a: VType):
        if a.name not in self.interp.value_types:
            raise InterpretationGap(f"value type {a} is not interpreted")
        return self.interp.value_types[a.name]

    def ctype(self, b):
        if isinstance(b, FType):
            return self.base.F[self.vtype(b.arg)]
        if b.name not in self.interp.computation_types:
            raise InterpretationGap(f"computation type {b} is not interpreted")
        return self.interp.computation_types[b.name]

    def context(self, ctx):
        obj = self.base.terminal
        for _, a in ctx:
            obj = self.base.prod(obj, self.base.j[self.vtype(a)])
        return obj

    def _prefixes(self, ctx):
        objs = [self.base.terminal]
        for _, a in ctx:
            objs.append(self.base.prod(objs[-1], self.base.j[self.vtype(a)]))
        return objs

    def var(self, ctx, name):
        C, base = self.base.C, self.base
        objs = self._prefixes(ctx)
        idx = max(i for i, (x, _) in enumerate(ctx) if x == name)
        n = len(ctx)
        h = C.id(objs[n])
        for k in range(n, idx + 1, -1):
            h = C.then(h, base.pi(objs[k - 1], base.j[self.vtype(ctx[k - 1][1])]))
        return C.then(h, base.pi2(objs[idx], base.j[self.vtype(ctx[idx][1])]))

    def tuple_of(self, ctx, params, args):
        """<...<<!, V0>, V1>...> : [[ctx]] -> [[params]]."""
        base = self.base
        h = base.bang(self.context(ctx))
        for a, v in zip(params, args):
            h = base.pair(h, self.value(ctx, v))
        return h

    def value(self, ctx, v):
        if isinstance(v, Var):
            return self.var(ctx, v.name)
        if v.name not in self.interp.value_constructors:
            raise InterpretationGap(f"value constructor {v.name} is not interpreted")
        params, _ = self.sig.value_constructors[v.name]
        return self.base.C.then(self.tuple_of(ctx, params, v.args), self.interp.value_constructors[v.name])

    def computation(self, ctx, t):
        model, base = self.model, self.base
        g = self.context(ctx)
        if isinstance(t, Return):
            a = typecheck(self.sig, ctx, t.value)
            return model.ret[(g, self.vtype(a), self.value(ctx, t.value))]
        if isinstance(t, To):
            fa = typecheck(self.sig, ctx, t.first)
            inner = ctx + ((t.var, fa.arg),)
            b = typecheck(self.sig, inner, t.body)
            m = self.computation(ctx, t.first)
            n = self.computation(inner, t.body)
            return model.to[(g, self.vtype(fa.arg), self.ctype(b), m, n)]
        if t.name not in self.interp.computation_constructors:
            raise InterpretationGap(f"computation constructor {t.name} is not interpreted")
        params, res = self.sig.computation_constructors[t.name]
        return model.act(self.tuple_of(ctx, params, t.args), self.ctype(res), self.interp.computation_constructors[t.name])

    def substitution(self, gamma, delta, k):
        """[[k]] : [[delta]] -> [[gamma]]."""
        base = self.base
        h = base.bang(self.context(delta))
        for x, a in gamma:
            h = base.pair(h, self.value(delta, k[x]))
        return h


def denote(model: RetSeqModel, interp: Interpretation, sig: CbpvSignature, ctx, t):
    typecheck(sig, ctx, t)
    d = Denotation(model, interp, sig)
    if isinstance(t, (Var, VCon)):
        return d.value(tuple(ctx), t)
    return d.computation(tuple(ctx), t)


# ---------------------------------------------------------------------------
# fixture signature and laws


def fixture_signature() -> CbpvSignature:
    a, b = VType("a"), VType("b")
    return CbpvSignature(
        ("a", "b"),
        ("K",),
        {"c": ((), b), "f": ((a,), b)},
        {"g": ((a,), FType(b)), "k": ((), CBase("K")), "h": ((b,), CBase("K"))},
    )


def fixture_interpretation(model: RetSeqModel) -> Interpretation:
    base = model.base
    C = base.C
    top, p = base.terminal, base.j["a"]
    gen_k = [s for s in model.O.elems(top, "K") if s != BOTTOM][0]
    gen_g = model.O.elems(p, "Fb")[0]
    gen_h = [s for s in model.O.elems(top, "K") if s != BOTTOM][-1]
    return Interpretation(
        {"a": "a", "b": "b"},
        {"K": "K"},
        {"c": C.id(top), "f": C.hom(base.prod(top, p), top)[0]},
        {"g": gen_g, "k": gen_k, "h": gen_h},
    )


FIXTURE_CONTEXTS = ((), (("v", VType("a")),), (("v", VType("a")), ("w", VType("b"))), (("w", VType("b")),))


def law_instances(sig: CbpvSignature, size_bound: int, contexts=FIXTURE_CONTEXTS, limit: int | None = DEFAULT_GUARD):
    """(law, ctx, lhs, rhs) for every well-typed instance whose left side
    has size at most ``size_bound``."""
    en = TermEnumerator(sig)
    ctypes = sig.all_computation_types()
    count = 0
    for ctx in contexts:
        ctx = tuple(ctx)
        x = f"x{len(ctx)}"
        for a in sig.value_types:
            A = VType(a)
            inner = ctx + ((x, A),)
            # beta: lhs = (return V) to x. N
            for sv in range(1, size_bound):
                for v in en.values(ctx, A, sv):
                    for b in ctypes:
                        for sn in range(1, size_bound - sv - 1):
                            for n in en.computations(inner, b, sn):
                                count += 1
                                yield "beta", ctx, To(Return(v), x, n), substitute({x: v}, n)
            # eta: lhs = M to x. return x
            for sm in range(1, size_bound - 2):
                for m in en.computations(ctx, FType(A), sm):
                    count += 1
                    yield "eta", ctx, To(m, x, Return(Var(x))), m
            # associativity
            for a2 in sig.value_types:
                B = VType(a2)
                y = f"x{len(ctx) + 1}"
                for sm in range(1, size_bound):
                    for sn in range(1, size_bound - sm):
                        for sp in range(1, size_bound - sm - sn - 1):
                            if sm + sn + sp + 2 > size_bound:
                                continue
                            ms = en.computations(ctx, FType(A), sm)
                            ns = en.computations(inner, FType(B), sn)
                            for c in ctypes:
                                ps = en.computations(ctx + ((y, B),), c, sp)
                                for m, n, p in itertools.product(ms, ns, ps):
                                    count += 1
                                    guard(count, limit, "law instances")
                                    yield "associativity", ctx, To(To(m, x, n), y, p), To(m, x, To(n, y, p))


def check_calculus_laws(model: RetSeqModel, interp: Interpretation, sig: CbpvSignature, size_bound: int = 7,
                        contexts=FIXTURE_CONTEXTS, limit: int | None = DEFAULT_GUARD):
    """Returns (violations, number of instances checked)."""
    d = Denotation(model, interp, sig)
    out: list[Violation] = []
    n = 0
    for law, ctx, lhs, rhs in law_instances(sig, size_bound, contexts, limit):
        n += 1
        if term_size(lhs) > size_bound:
            raise AssertionError(f"instance over the size bound: {lhs}")
        l, r = d.computation(ctx, lhs), d.computation(ctx, rhs)
        expect(out, law, (",".join(f"{x}:{a}" for x, a in ctx), str(lhs), str(rhs)), l, r)
    return out, n


def substitution_lemma(model: RetSeqModel, interp: Interpretation, sig: CbpvSignature, samples: int = 100,
                       rng: random.Random | None = None, max_size: int = 6) -> list:
    """[[k* M]] = [[k]] ; [[M]] on random (k, M)."""
    rng = rng or random.Random(0)
    d = Denotation(model, interp, sig)
    en = TermEnumerator(sig)
    out: list[Violation] = []
    gammas = [c for c in FIXTURE_CONTEXTS if c]
    deltas = list(FIXTURE_CONTEXTS)
    ctypes = sig.all_computation_types()
    done = 0
    attempts = 0
    while done < samples:
        attempts += 1
        if attempts > 100 * samples:
            raise RuntimeError("could not draw enough substitution samples")
        gamma, delta = rng.choice(gammas), rng.choice(deltas)
        terms = [t for s in range(1, max_size + 1) for b in ctypes for t in en.computations(gamma, b, s)]
        if not terms:
            continue
        k = {}
        ok = True
        for x, a in gamma:
            vs = [v for s in range(1, 4) for v in en.values(delta, a, s)]
            if not vs:
                ok = False
                break
            k[x] = rng.choice(vs)
        if not ok:
            continue
        m = rng.choice(terms)
        km = substitute(k, m, frozenset(x for x, _ in delta))
        typecheck(sig, delta, km)
        b = d.ctype(typecheck(sig, gamma, m))
        lhs = d.computation(delta, km)
        rhs = model.act(d.substitution(gamma, delta, k), b, d.computation(gamma, m))
        expect(out, "substitution", (str(m), {x: str(v) for x, v in k.items()}), lhs, rhs)
        done += 1
    return out
