"""Short-form RetSeq models, the long/short conversion, and the reading of a
RetSeq model as a monoid in the bi-skew multicategory of bimodules C -|-> Y.

Families of that multicategory are evaluated pointwise.  A family of arity
``a`` is indexed by a base object Gamma and boundaries R_0..R_a:

* R_0 is ``TIGHT`` when the family is tight on the left, otherwise an
  element A of X (the first input then lives over Gamma x jA);
* R_a is an element of Y when tight on the right, otherwise an element of X
  (read through F);
* inner boundaries are elements of X.

Input i lives in O(src_i, tgt_i) where src_i is Gamma for a tight left slot
and Gamma x jR_i otherwise, and tgt_i is R_a for a tight right slot and
F R_{i+1} otherwise.  The output lives in O(src_out, tgt_out), read the same
way from R_0 and R_a.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field

from ..errors import TypeMismatch
from ..kernel import Arrow, Kind, Side, compose_arrows
from ..relmonad import BimoduleData, check_bimodule
from ..violation import Violation, expect
from .semantics import CartesianBase, RetSeqModel, check_base, _into

TIGHT = "*"


class Direction(enum.Enum):
    LONG_TO_SHORT = "short"
    SHORT_TO_LONG = "long"


@dataclass
class ShortFormModel:
    base: CartesianBase
    O: BimoduleData
    rets: dict  # (Gamma, A) -> element of O(Gamma x jA, FA)
    to: dict
    name: str = "model"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "form": "short",
            "base": self.base.to_json(),
            "sets": {f"{g}|{b}": list(v) for (g, b), v in self.O.sets.items()},
            "action": {f"{f}|{b}|{s}": r for (f, b, s), r in self.O.left.items()},
            "rets": {f"{g}|{a}": r for (g, a), r in self.rets.items()},
            "to": {"|".join(map(str, k)): r for k, r in self.to.items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def convert_form(direction: Direction, model):
    base, O = model.base, model.O
    C = base.C
    if direction is Direction.LONG_TO_SHORT:
        if not isinstance(model, RetSeqModel):
            raise TypeError("expected a long-form model")
        rets = {}
        for g in C.objects:
            for a in base.X:
                ga = base.prod(g, base.j[a])
                rets[(g, a)] = model.ret[(ga, a, base.pi2(g, base.j[a]))]
        return ShortFormModel(base, O, rets, dict(model.to), model.name)
    if not isinstance(model, ShortFormModel):
        raise TypeError("expected a short-form model")
    ret = {}
    for g in C.objects:
        for a in base.X:
            for v in C.hom(g, base.j[a]):
                ret[(g, a, v)] = O.act_left(base.pair(C.id(g), v), base.F[a], model.rets[(g, a)])
    return RetSeqModel(base, O, ret, dict(model.to), model.name)


def _typecheck_short(model: ShortFormModel) -> None:
    base, O = model.base, model.O
    for g in base.C.objects:
        for a in base.X:
            ga = base.prod(g, base.j[a])
            if model.rets.get((g, a)) not in O.elems(ga, base.F[a]):
                raise TypeMismatch(f"rets at ({g}, {a}) is not in O({ga}, {base.F[a]})")
            for b in base.Y:
                for m in O.elems(g, base.F[a]):
                    for n in O.elems(ga, b):
                        if model.to.get((g, a, b, m, n)) not in O.elems(g, b):
                            raise TypeMismatch(f"to at {(g, a, b, m, n)} is not in O({g}, {b})")


def check_short(model: ShortFormModel, log: list | None = None) -> list:
    """Short-form laws.  Witnesses use the (Gamma, boundaries, arguments)
    convention of the pointwise families so the two columns line up."""
    base, O = model.base, model.O
    C = base.C
    out = list(check_base(base)) + list(check_bimodule(O))
    if out:
        return out
    _typecheck_short(model)
    log = [] if log is None else log

    def record(law, witness, lhs, rhs):
        log.append((law, witness, lhs == rhs))
        expect(out, law, witness, lhs, rhs)

    to, rets = model.to, model.rets
    for g in C.objects:
        for a in base.X:
            ja, fa = base.j[a], base.F[a]
            ga = base.prod(g, ja)
            for f in _into(C, g):
                g2 = C.dom(f)
                fx = base.times(f, ja)
                record("rets-natural", (("f", f), g, (a,), ()), O.act_left(fx, fa, rets[(g, a)]), rets[(g2, a)])
                for b in base.Y:
                    for m in O.elems(g, fa):
                        for n in O.elems(ga, b):
                            record("to-natural", (("f", f), g, (TIGHT, a, b), (m, n)),
                                   to[(g2, a, b, O.act_left(f, fa, m), O.act_left(fx, b, n))],
                                   O.act_left(f, b, to[(g, a, b, m, n)]))
            weak = base.times(base.pi(g, ja), ja)
            for b in base.Y:
                for m in O.elems(ga, b):
                    record("short-beta", (g, (a, b), (m,)), to[(ga, a, b, rets[(g, a)], O.act_left(weak, b, m))], m)
            for m in O.elems(g, fa):
                record("short-eta", (g, (TIGHT, a), (m,)), to[(g, a, fa, m, rets[(g, a)])], m)
            for a2 in base.X:
                jb, fb = base.j[a2], base.F[a2]
                gb = base.prod(g, jb)
                weaken = base.times(base.pi(g, ja), jb)
                for c in base.Y:
                    for m in O.elems(g, fa):
                        for n in O.elems(ga, fb):
                            for p in O.elems(gb, c):
                                lhs = to[(g, a2, c, to[(g, a, fb, m, n)], p)]
                                rhs = to[(g, a, c, m, to[(ga, a2, c, n, O.act_left(weaken, c, p))])]
                                record("associativity", (g, (TIGHT, a, a2, c), (m, n, p)), lhs, rhs)
    return out


# ---------------------------------------------------------------------------
# pointwise families


@dataclass(frozen=True)
class PFamily:
    kind: Kind
    arity: int
    fn: object = field(compare=False)


class BimoduleMulticategory:
    """Loosening, identities and composition of pointwise families over one
    carrier bimodule O."""

    def __init__(self, base: CartesianBase, O: BimoduleData):
        self.base, self.O = base, O

    # typing of slots ----------------------------------------------------------
    def slot_hom(self, fam: PFamily, g, R, i):
        base = self.base
        a = fam.arity
        src = g if (i == 0 and fam.kind.left_tight) else base.prod(g, base.j[R[i]])
        tgt = R[a] if (i == a - 1 and fam.kind.right_tight) else base.F[R[i + 1]]
        return src, tgt

    def out_hom(self, fam: PFamily, g, R):
        base = self.base
        src = g if fam.kind.left_tight else base.prod(g, base.j[R[0]])
        tgt = R[-1] if fam.kind.right_tight else base.F[R[-1]]
        return src, tgt

    def boundaries(self, fam: PFamily):
        base = self.base
        a = fam.arity
        choices = []
        for i in range(a + 1):
            if i == 0 and fam.kind.left_tight:
                choices.append((TIGHT,))
            elif i == a and fam.kind.right_tight:
                choices.append(tuple(base.Y))
            else:
                choices.append(tuple(base.X))
        return itertools.product(*choices)

    def instances(self, fam: PFamily):
        for g in self.base.C.objects:
            for R in self.boundaries(fam):
                sets = [self.O.elems(*self.slot_hom(fam, g, R, i)) for i in range(fam.arity)]
                for args in itertools.product(*sets):
                    yield g, R, args

    # operations ---------------------------------------------------------------
    def identity(self) -> PFamily:
        return PFamily(Kind.TT, 1, lambda g, R, args: args[0])

    def loosen_left(self, fam: PFamily) -> PFamily:
        if not fam.kind.left_tight:
            raise ValueError("already loose on the left")
        base, O = self.base, self.O

        def fn(g, R, args):
            ja = base.j[R[0]]
            g2 = base.prod(g, ja)
            shifted = (TIGHT,) + tuple(R[1:])
            moved = [args[0]]
            for i in range(1, fam.arity):
                _, tgt = self.slot_hom(fam, g2, shifted, i)
                moved.append(O.act_left(base.times(base.pi(g, ja), base.j[R[i]]), tgt, args[i]))
            return fam.fn(g2, shifted, tuple(moved))

        return PFamily(fam.kind.loosened(Side.LEFT), fam.arity, fn)

    def loosen_right(self, fam: PFamily) -> PFamily:
        if not fam.kind.right_tight:
            raise ValueError("already loose on the right")
        base = self.base

        def fn(g, R, args):
            return fam.fn(g, tuple(R[:-1]) + (base.F[R[-1]],), args)

        return PFamily(fam.kind.loosened(Side.RIGHT), fam.arity, fn)

    def compose(self, outer: PFamily, i: int, inner: PFamily) -> PFamily:
        n, m = outer.arity, inner.arity
        # the kernel's boundary rule decides legality and the result kind
        ga = Arrow(outer.kind, ("o",) * n, "o")
        fa = Arrow(inner.kind, ("o",) * m, "o")
        res = compose_arrows(ga, i, fa)

        def fn(g, R, args):
            val = inner.fn(g, tuple(R[i : i + m + 1]), tuple(args[i : i + m]))
            return outer.fn(g, tuple(R[: i + 1]) + tuple(R[i + m :]), tuple(args[:i]) + (val,) + tuple(args[i + m :]))

        return PFamily(res.kind, res.arity, fn)

    # checks -------------------------------------------------------------------
    def equal(self, law, f: PFamily, h: PFamily, out: list, log: list) -> None:
        if (f.kind, f.arity) != (h.kind, h.arity):
            raise TypeMismatch(f"{law}: sides have different shapes")
        for g, R, args in self.instances(f):
            lhs, rhs = f.fn(g, R, args), h.fn(g, R, args)
            log.append((law, (g, R, args), lhs == rhs))
            expect(out, law, (g, R, args), lhs, rhs)

    def natural(self, name, fam: PFamily, out: list, log: list) -> None:
        base, O, C = self.base, self.O, self.base.C
        for g, R, args in self.instances(fam):
            for f in _into(C, g):
                g2 = C.dom(f)
                moved = []
                for i in range(fam.arity):
                    _, tgt = self.slot_hom(fam, g, R, i)
                    lift = f if (i == 0 and fam.kind.left_tight) else base.times(f, base.j[R[i]])
                    moved.append(O.act_left(lift, tgt, args[i]))
                _, tgt = self.out_hom(fam, g, R)
                lift = f if fam.kind.left_tight else base.times(f, base.j[R[0]])
                lhs = fam.fn(g2, R, tuple(moved))
                rhs = O.act_left(lift, tgt, fam.fn(g, R, args))
                log.append((f"{name}-natural", (("f", f), g, R, args), lhs == rhs))
                expect(out, f"{name}-natural", (("f", f), g, R, args), lhs, rhs)


PAIRED_LAWS = {
    "left-unit": "short-beta",
    "right-unit": "short-eta",
    "associativity": "associativity",
    "m-natural": "to-natural",
    "e-natural": "rets-natural",
}


@dataclass
class RetSeqEquivalenceReport:
    short: list
    monoid: list
    short_ok: bool
    monoid_ok: bool
    pairing_ok: bool

    @property
    def agree(self) -> bool:
        return self.short_ok == self.monoid_ok and self.pairing_ok

    def summary(self) -> dict:
        def tally(rows):
            out = {}
            for law, _, ok in rows:
                p, f = out.get(law, (0, 0))
                out[law] = (p + ok, f + (not ok))
            return out

        return {"short": tally(self.short), "monoid": tally(self.monoid),
                "short_ok": self.short_ok, "monoid_ok": self.monoid_ok, "agree": self.agree}


def retseq_monoid_equivalence(model) -> RetSeqEquivalenceReport:
    """Short-form laws beside the bi-skew monoid equations for carrier O,
    m = ``to`` and e = short-form ret."""
    short = model if isinstance(model, ShortFormModel) else convert_form(Direction.LONG_TO_SHORT, model)
    short_log: list = []
    short_viol = check_short(short, short_log)
    base, O = short.base, short.O
    P = BimoduleMulticategory(base, O)
    m = PFamily(Kind.TT, 2, lambda g, R, args: short.to[(g, R[1], R[2], args[0], args[1])])
    e = PFamily(Kind.LL, 0, lambda g, R, args: short.rets[(g, R[0])])
    one = P.identity()
    viol: list = list(check_base(base)) + list(check_bimodule(O))
    log: list = [(v.law, v.witness, False) for v in viol]
    if not viol:
        P.equal("left-unit", P.compose(P.loosen_left(m), 0, e), P.loosen_left(one), viol, log)
        P.equal("right-unit", P.compose(P.loosen_right(m), 1, e), P.loosen_right(one), viol, log)
        P.equal("associativity", P.compose(m, 0, P.loosen_right(m)), P.compose(m, 1, P.loosen_left(m)), viol, log)
        P.natural("m", m, viol, log)
        P.natural("e", e, viol, log)

    def failing(rows):
        out = {}
        for law, w, ok in rows:
            if not ok:
                out.setdefault(law, set()).add(w)
        return out

    fm, fs = failing(log), failing(short_log)
    pairing = all(fm.get(a, set()) == fs.get(b, set()) for a, b in PAIRED_LAWS.items())
    return RetSeqEquivalenceReport(short_log, log, not short_viol, not viol, pairing)
