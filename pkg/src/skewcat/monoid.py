"""Monoids, homomorphisms and unbiased monoids in finite models."""

from __future__ import annotations

from dataclasses import dataclass, field

from .category import FiniteCategory
from .errors import ArityBoundExceeded, HomMembership
from .kernel import Cmp, Gen, Id, Kind, Loosen, Side, Term, lloL, lloR, lrlo, slot_kind
from .model import IDENTITY_KIND, FiniteModel, Mor, eval_term
from .violation import Violation, expect

M_, E_, F_, N_, U_ = Gen("m"), Gen("e"), Gen("f"), Gen("n"), Gen("u")


def _monoid_laws(flavour: str, x) -> list:
    """(name, lhs, rhs) over generators m, e."""
    one = Id(x)
    if flavour == "plain":
        return [
            ("left-unit", Cmp(M_, 0, E_), one),
            ("right-unit", Cmp(M_, 1, E_), one),
            ("associativity", Cmp(M_, 0, M_), Cmp(M_, 1, M_)),
        ]
    if flavour == "leftskew":
        return [
            ("left-unit", Cmp(lloL(M_), 0, E_), lloL(one)),
            ("right-unit", Cmp(M_, 1, E_), one),
            ("associativity", Cmp(M_, 0, M_), Cmp(M_, 1, lloL(M_))),
        ]
    return [
        ("left-unit", Cmp(lloL(M_), 0, E_), lloL(one)),
        ("right-unit", Cmp(lloR(M_), 1, E_), lloR(one)),
        ("associativity", Cmp(M_, 0, lloR(M_)), Cmp(M_, 1, lloL(M_))),
    ]


def _hom_laws(flavour: str) -> list:
    """(name, lhs, rhs) over f : M -> N with M = (m, e), N = (n, u)."""
    if flavour == "plain":
        return [
            ("unit-preserved", Cmp(F_, 0, E_), U_),
            ("mult-preserved", Cmp(F_, 0, M_), Cmp(Cmp(N_, 0, F_), 1, F_)),
        ]
    if flavour == "leftskew":
        return [
            ("unit-preserved", Cmp(lloL(F_), 0, E_), U_),
            ("mult-preserved", Cmp(F_, 0, M_), Cmp(Cmp(N_, 0, F_), 1, lloL(F_))),
        ]
    return [
        ("unit-preserved", Cmp(lrlo(F_), 0, E_), U_),
        ("mult-preserved", Cmp(F_, 0, M_), Cmp(Cmp(N_, 0, lloR(F_)), 1, lloL(F_))),
    ]


@dataclass(frozen=True)
class MonoidData:
    carrier: object
    m: Mor
    e: Mor

    def __str__(self):
        return f"({self.carrier}, m={_short(self.m)}, e={_short(self.e)})"


def _short(m: Mor):
    from .model import _show

    return _show(m.data)


@dataclass(frozen=True)
class MonoidHom:
    source: MonoidData
    target: MonoidData
    f: Mor


def _check_in(model, m: Mor, kind: Kind, domain, codomain, what):
    if m.arrow.kind is not kind or m.arrow.domain != tuple(domain) or m.arrow.codomain != codomain:
        raise HomMembership(f"{what} has arrow {m.arrow}, expected {kind.name}{list(domain)} -> {codomain}")
    if not model.in_hom(m):
        raise HomMembership(f"{what} is not an element of its hom-set")


def check_monoid(model: FiniteModel, cand: MonoidData) -> list:
    x = cand.carrier
    top = IDENTITY_KIND[model.flavour]
    _check_in(model, cand.m, top, (x, x), x, "multiplication")
    _check_in(model, cand.e, Kind.LL, (), x, "unit")
    env = {"m": cand.m, "e": cand.e}
    out: list[Violation] = []
    for name, lhs, rhs in _monoid_laws(model.flavour, x):
        expect(out, name, (cand,), eval_term(model, env, lhs), eval_term(model, env, rhs))
    return out


def check_homomorphism(model: FiniteModel, src: MonoidData, dst: MonoidData, f: Mor) -> list:
    top = IDENTITY_KIND[model.flavour]
    _check_in(model, f, top, (src.carrier,), dst.carrier, "homomorphism")
    env = {"m": src.m, "e": src.e, "n": dst.m, "u": dst.e, "f": f}
    out: list[Violation] = []
    for name, lhs, rhs in _hom_laws(model.flavour):
        expect(out, name, (src, dst, _short(f)), eval_term(model, env, lhs), eval_term(model, env, rhs))
    return out


def enumerate_monoids(model: FiniteModel) -> list:
    top = IDENTITY_KIND[model.flavour]
    out = []
    for x in model.objects():
        for m in model.hom(top, (x, x), x):
            for e in model.hom(Kind.LL, (), x):
                cand = MonoidData(x, m, e)
                if not check_monoid(model, cand):
                    out.append(cand)
    return out


@dataclass
class MonoidCategory:
    category: FiniteCategory
    monoids: dict  # object name -> MonoidData
    homs: dict  # morphism name -> MonoidHom


def monoid_category(model: FiniteModel, monoids: list | None = None) -> MonoidCategory:
    mons = enumerate_monoids(model) if monoids is None else monoids
    top = IDENTITY_KIND[model.flavour]
    names = {f"M{k}": mon for k, mon in enumerate(mons)}
    homs = {}
    by_value = {}
    for sn, src in names.items():
        for tn, dst in names.items():
            for f in model.hom(top, (src.carrier,), dst.carrier):
                if not check_homomorphism(model, src, dst, f):
                    name = f"h{len(homs)}"
                    homs[name] = MonoidHom(src, dst, f)
                    by_value[(sn, tn, f)] = name
    obj_of = {mon: n for n, mon in names.items()}
    morphisms = {h: (obj_of[v.source], obj_of[v.target]) for h, v in homs.items()}
    identities = {}
    for n, mon in names.items():
        identities[n] = by_value.get((n, n, model.identity(mon.carrier)))
    composition = {}
    for a, va in homs.items():
        for b, vb in homs.items():
            if va.target != vb.source:
                continue
            fg = model.compose(vb.f, 0, va.f)
            composition[(a, b)] = by_value.get((obj_of[va.source], obj_of[vb.target], fg))
    cat = FiniteCategory(tuple(names), morphisms, identities, composition, f"Mon({model.name})")
    return MonoidCategory(cat, names, homs)


# ---------------------------------------------------------------------------
# unbiased monoids (bi-skew flavour)


@dataclass
class UnbiasedFamily:
    carrier: object
    N: int
    ll: dict = field(default_factory=dict)  # 0..N
    tl: dict = field(default_factory=dict)  # 1..N
    lt: dict = field(default_factory=dict)
    tt: dict = field(default_factory=dict)

    def member(self, kind: Kind, n: int):
        table = {Kind.LL: self.ll, Kind.TL: self.tl, Kind.LT: self.lt, Kind.TT: self.tt}[kind]
        return table.get(n)

    def set(self, kind: Kind, n: int, value: Mor) -> None:
        {Kind.LL: self.ll, Kind.TL: self.tl, Kind.LT: self.lt, Kind.TT: self.tt}[kind][n] = value

    def copy(self) -> "UnbiasedFamily":
        return UnbiasedFamily(self.carrier, self.N, dict(self.ll), dict(self.tl), dict(self.lt), dict(self.tt))


def _need_biskew(model):
    if model.flavour != "biskew":
        raise ValueError("unbiased families are built in bi-skew models; lift the model first")


def expand_unbiased(model: FiniteModel, mon: MonoidData, N: int) -> UnbiasedFamily:
    _need_biskew(model)
    if N > model.arity_bound:
        raise ArityBoundExceeded(f"N={N} exceeds the model's arity bound {model.arity_bound}")
    x, m, e = mon.carrier, mon.m, mon.e
    L, R = Side.LEFT, Side.RIGHT
    fam = UnbiasedFamily(x, N)
    lrm = model.loosen(L, model.loosen(R, m))
    rm = model.loosen(R, m)
    lm = model.loosen(L, m)
    fam.ll[0] = e
    for n in range(N):
        fam.ll[n + 1] = model.compose(lrm, 1, fam.ll[n])
        fam.tl[n + 1] = model.compose(rm, 1, fam.ll[n])
    ident = model.identity(x)
    fam.lt[1] = model.loosen(L, ident)
    fam.tt[1] = ident
    for n in range(N - 1):
        fam.lt[n + 2] = model.compose(lm, 1, fam.lt[n + 1])
        fam.tt[n + 2] = model.compose(m, 1, fam.lt[n + 1])
    if N >= 2 and fam.tt[2] != m:
        raise AssertionError("cmp(m, 1, lloL(id)) differs from m: the right identity law fails")
    return fam


def _family_constraints(N: int, compositions: bool = True) -> list:
    """Functional constraints (output, function name, inputs) over variables
    (kind, n).  Shared by the checker and the uniqueness search."""
    cons = []
    kinds = (Kind.LL, Kind.TL, Kind.LT, Kind.TT)
    cons.append(((Kind.TT, 1), ("identity",), ()))
    for n in range(1, N + 1):
        cons.append(((Kind.LL, n), ("loosen", Side.LEFT), ((Kind.TL, n),)))
        cons.append(((Kind.LT, n), ("loosen", Side.LEFT), ((Kind.TT, n),)))
        cons.append(((Kind.LL, n), ("loosen", Side.RIGHT), ((Kind.LT, n),)))
        cons.append(((Kind.TL, n), ("loosen", Side.RIGHT), ((Kind.TT, n),)))
    if compositions:
        for k in kinds:
            for n in range(1, N + 1):
                for i in range(n):
                    sk = Kind.of(i == 0 and k.left_tight, i == n - 1 and k.right_tight)
                    for j in range(0, N - n + 2):
                        if sk.tight and j == 0:
                            continue
                        cons.append(((k, n + j - 1), ("compose", i), ((k, n), (sk, j))))
    return cons


def _apply(model, fam_x, op, args):
    if op[0] == "identity":
        return model.identity(fam_x)
    if op[0] == "loosen":
        return model.loosen(op[1], args[0])
    return model.compose(args[0], op[1], args[1])


def check_unbiased(model: FiniteModel, fam: UnbiasedFamily, N: int | None = None, compositions: bool = True) -> list:
    _need_biskew(model)
    N = fam.N if N is None else N
    if N > fam.N:
        raise ArityBoundExceeded(f"family only defined up to {fam.N}")
    out: list[Violation] = []
    for k in (Kind.LL, Kind.TL, Kind.LT, Kind.TT):
        for n in range(0 if k is Kind.LL else 1, N + 1):
            m = fam.member(k, n)
            want = model.hom(k, (fam.carrier,) * n, fam.carrier)
            if m is None or m not in want:
                out.append(Violation("member-typed", (k.name, n), m, "element of the hom-set"))
    if out:
        return out
    for target, op, inputs in _family_constraints(N, compositions):
        args = [fam.member(*v) for v in inputs]
        law = op[0] if op[0] != "compose" else f"compose/{inputs[0][0].name}{inputs[0][1]}@{op[1]}<-{inputs[1][0].name}{inputs[1][1]}"
        expect(out, law, (target[0].name, target[1]), _apply(model, fam.carrier, op, args), fam.member(*target))
    return out


def biased_counterpart(fam: UnbiasedFamily) -> MonoidData:
    return MonoidData(fam.carrier, fam.tt[2], fam.ll[0])


def count_unbiased(model: FiniteModel, mon: MonoidData, N: int, limit: int = 2, compositions: bool = True) -> int:
    """Number of families (up to ``limit``) with biased counterpart ``mon``
    satisfying the family constraints, by exhaustive backtracking.

    A constraint whose inputs are all assigned fixes its output, so the
    search only branches on variables nothing determines yet."""
    _need_biskew(model)
    if N < 2:
        raise ValueError("N must be at least 2 to contain the biased counterpart")
    x = mon.carrier
    cons = _family_constraints(N, compositions)
    variables = [(Kind.LL, n) for n in range(N + 1)] + [(k, n) for n in range(1, N + 1) for k in (Kind.TL, Kind.LT, Kind.TT)]
    variables.sort(key=lambda v: (v[1], v[0].value))
    watching = {}
    for c in cons:
        for v in c[2]:
            watching.setdefault(v, []).append(c)

    def domain(v):
        return model.hom(v[0], (x,) * v[1], x)

    found = 0

    def propagate(assign, queue):
        # returns False on contradiction
        while queue:
            v = queue.pop()
            for c in ([c for c in cons if not c[2]] if v is None else watching.get(v, [])):
                target, op, inputs = c
                if any(i not in assign for i in inputs):
                    continue
                val = _apply(model, x, op, [assign[i] for i in inputs])
                if target in assign:
                    if assign[target] != val:
                        return False
                else:
                    if not model.in_hom(val):
                        return False
                    assign[target] = val
                    queue.append(target)
        return True

    def search(assign):
        nonlocal found
        if found >= limit:
            return
        free = [v for v in variables if v not in assign]
        if not free:
            found += 1
            return
        v = free[0]
        for val in domain(v):
            trial = dict(assign)
            trial[v] = val
            if propagate(trial, [v]):
                search(trial)
                if found >= limit:
                    return

    start = {(Kind.TT, 2): mon.m, (Kind.LL, 0): mon.e}
    if propagate(start, [None, (Kind.TT, 2), (Kind.LL, 0)]):
        search(start)
    return found


def unbiased_unique(model: FiniteModel, mon: MonoidData, N: int, compositions: bool = True) -> bool:
    return count_unbiased(model, mon, N, limit=2, compositions=compositions) == 1


def hom_unbiased_ok(model: FiniteModel, src: UnbiasedFamily, dst: UnbiasedFamily, f: Mor) -> bool:
    """``f`` commutes with every family member: f after src_K,n equals
    dst_K,n with ``f`` plugged into each input."""
    N = min(src.N, dst.N)
    for k in (Kind.LL, Kind.TL, Kind.LT, Kind.TT):
        for n in range(0 if k is Kind.LL else 1, N + 1):
            lhs = model.compose(model.loosen_to(f, k), 0, src.member(k, n))
            rhs = dst.member(k, n)
            for i in reversed(range(n)):
                rhs = model.compose(rhs, i, model.loosen_to(f, slot_kind(rhs.arrow, i)))
            if lhs != rhs:
                return False
    return True
