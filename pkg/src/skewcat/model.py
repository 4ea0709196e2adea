"""Finite (arity-truncated) multicategories in three flavours.

``plain`` models only have loose-loose morphisms, ``leftskew`` models add
tight-loose ones with left-loosening, ``biskew`` models have all four kinds.
Every flavour uses the kernel's boundary rule for composition, so one law
checker serves all three.

A morphism is a :class:`Mor`: its Arrow together with model-specific data.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable

from .category import FiniteCategory
from .errors import (
    DEFAULT_GUARD,
    ArityBoundExceeded,
    AssignmentMismatch,
    HomMembership,
    TermError,
    guard,
)
from .kernel import (
    Arrow,
    Cmp,
    Form,
    Gen,
    Id,
    Kind,
    Loosen,
    Side,
    Term,
    compose_arrows,
    form_of,
    loosen_arrow,
    slot_kind,
)
from .equality import (
    AxiomMode,
    STRICT_ASSOC,
    STRICT_INTERCHANGE,
    STRICT_LEFT_LOOSEN,
    STRICT_RIGHT_LOOSEN,
)
from .violation import Violation, expect

FLAVOUR_KINDS = {
    "plain": (Kind.LL,),
    "leftskew": (Kind.LL, Kind.TL),
    "biskew": (Kind.LL, Kind.TL, Kind.LT, Kind.TT),
}
FLAVOUR_SIDES = {"plain": (), "leftskew": (Side.LEFT,), "biskew": (Side.LEFT, Side.RIGHT)}
IDENTITY_KIND = {"plain": Kind.LL, "leftskew": Kind.TL, "biskew": Kind.TT}


@dataclass(frozen=True)
class Mor:
    arrow: Arrow
    data: object

    def __str__(self):
        return f"{_show(self.data)} : {self.arrow}"


def _show(data):
    if isinstance(data, tuple):
        return "(" + ",".join(_show(d) for d in data) + ")"
    return str(data)


class Stage(enum.Enum):
    MULT_TO_LEFTSKEW = "left"
    LEFTSKEW_TO_BISKEW = "bi"


class FiniteModel:
    """Base class.  Subclasses provide ``objects`` and the ``*_data`` hooks."""

    flavour = "biskew"
    name = "model"

    def __init__(self, arity_bound: int = 4, guard_limit: int | None = DEFAULT_GUARD):
        self.arity_bound = arity_bound
        self.guard_limit = guard_limit
        self._hom_cache = {}

    # hooks -----------------------------------------------------------------
    def objects(self) -> tuple:
        raise NotImplementedError

    def hom_data(self, kind: Kind, domain: tuple, codomain) -> Iterable:
        raise NotImplementedError

    def loosen_data(self, side: Side, m: Mor):
        raise NotImplementedError

    def identity_data(self, x):
        raise NotImplementedError

    def compose_data(self, g: Mor, i: int, f: Mor):
        raise NotImplementedError

    # generic interface -------------------------------------------------------
    @property
    def kinds(self) -> tuple:
        return FLAVOUR_KINDS[self.flavour]

    @property
    def sides(self) -> tuple:
        return FLAVOUR_SIDES[self.flavour]

    def hom(self, kind: Kind, domain, codomain) -> list:
        domain = tuple(domain)
        key = (kind, domain, codomain)
        hit = self._hom_cache.get(key)
        if hit is not None:
            return hit
        if kind not in self.kinds or (kind.tight and not domain):
            out = []
        else:
            if len(domain) > self.arity_bound:
                raise ArityBoundExceeded(f"hom of arity {len(domain)} > {self.arity_bound}")
            arrow = Arrow(kind, domain, codomain)
            out = []
            for d in self.hom_data(kind, domain, codomain):
                out.append(Mor(arrow, d))
                guard(len(out), self.guard_limit, f"hom{(kind.name, domain, codomain)}")
        self._hom_cache[key] = out
        return out

    def in_hom(self, m: Mor) -> bool:
        return m in self._hom_set(m.arrow)

    def _hom_set(self, a: Arrow):
        key = ("set", a)
        hit = self._hom_cache.get(key)
        if hit is None:
            hit = frozenset(self.hom(a.kind, a.domain, a.codomain))
            self._hom_cache[key] = hit
        return hit

    def identity(self, x) -> Mor:
        k = IDENTITY_KIND[self.flavour]
        return Mor(Arrow(k, (x,), x), self.identity_data(x))

    def loosen(self, side: Side, m: Mor) -> Mor:
        if side not in self.sides:
            raise TermError(f"{self.flavour} models have no {side.name.lower()}-loosening")
        return Mor(loosen_arrow(side, m.arrow), self.loosen_data(side, m))

    def loosen_to(self, m: Mor, want: Kind) -> Mor:
        have = m.arrow.kind
        if have.right_tight and not want.right_tight:
            m = self.loosen(Side.RIGHT, m)
        if have.left_tight and not want.left_tight:
            m = self.loosen(Side.LEFT, m)
        return m

    def compose(self, g: Mor, i: int, f: Mor) -> Mor:
        a = compose_arrows(g.arrow, i, f.arrow)
        if max(a.arity, g.arrow.arity, f.arrow.arity) > self.arity_bound:
            raise ArityBoundExceeded(f"composite of arity {a.arity} > {self.arity_bound}")
        return Mor(a, self.compose_data(g, i, f))

    def domains(self, n: int):
        return itertools.product(self.objects(), repeat=n)

    def all_morphisms(self, max_arity: int | None = None):
        top = self.arity_bound if max_arity is None else max_arity
        for n in range(top + 1):
            for dom in self.domains(n):
                for cod in self.objects():
                    for k in self.kinds:
                        yield from self.hom(k, dom, cod)


# ---------------------------------------------------------------------------
# builders


class TerminalModel(FiniteModel):
    name = "terminal"

    def objects(self):
        return ("*",)

    def hom_data(self, kind, domain, codomain):
        return [()]

    def loosen_data(self, side, m):
        return ()

    def identity_data(self, x):
        return ()

    def compose_data(self, g, i, f):
        return ()


def terminal_model(arity_bound: int = 4) -> FiniteModel:
    return TerminalModel(arity_bound)


class SeqModel(FiniteModel):
    """Plain multicategory whose morphisms a_0..a_{n-1} -> x are lists of
    C-morphisms a_i -> x."""

    flavour = "plain"

    def __init__(self, cat: FiniteCategory, arity_bound: int = 4, guard_limit=DEFAULT_GUARD):
        super().__init__(arity_bound, guard_limit)
        self.cat = cat
        self.name = f"Seq({cat.name})"

    def objects(self):
        return self.cat.objects

    def hom_data(self, kind, domain, codomain):
        choices = [self.cat.hom(a, codomain) for a in domain]
        total = 1
        for c in choices:
            total *= len(c)
        guard(total, self.guard_limit, "Seq hom")
        return list(itertools.product(*choices))

    def loosen_data(self, side, m):
        return m.data

    def identity_data(self, x):
        return (self.cat.id(x),)

    def compose_data(self, g, i, f):
        gi = g.data[i]
        return g.data[:i] + tuple(self.cat.then(fk, gi) for fk in f.data) + g.data[i + 1 :]


class LeftSkewLift(FiniteModel):
    """Tight and loose homs both copy the plain homs; loosening is identity."""

    flavour = "leftskew"

    def __init__(self, base: FiniteModel):
        if base.flavour != "plain":
            raise TermError("left-skew lift needs a plain model")
        super().__init__(base.arity_bound, base.guard_limit)
        self.base = base
        self.name = f"iotaLeft({base.name})"

    def objects(self):
        return self.base.objects()

    def _down(self, m: Mor) -> Mor:
        return Mor(Arrow(Kind.LL, m.arrow.domain, m.arrow.codomain), m.data)

    def hom_data(self, kind, domain, codomain):
        return [m.data for m in self.base.hom(Kind.LL, domain, codomain)]

    def loosen_data(self, side, m):
        return m.data

    def identity_data(self, x):
        return self.base.identity(x).data

    def compose_data(self, g, i, f):
        return self.base.compose(self._down(g), i, self._down(f)).data


class BiskewLift(FiniteModel):
    """Loose-loose and loose-tight homs copy the loose homs, tight-loose and
    tight-tight the tight ones; right-loosening is identity."""

    flavour = "biskew"

    def __init__(self, base: FiniteModel):
        if base.flavour != "leftskew":
            raise TermError("bi-skew lift needs a left-skew model")
        super().__init__(base.arity_bound, base.guard_limit)
        self.base = base
        self.name = f"iotaLtoBi({base.name})"

    def objects(self):
        return self.base.objects()

    def _down(self, m: Mor) -> Mor:
        k = Kind.TL if m.arrow.kind.left_tight else Kind.LL
        return Mor(Arrow(k, m.arrow.domain, m.arrow.codomain), m.data)

    def hom_data(self, kind, domain, codomain):
        k = Kind.TL if kind.left_tight else Kind.LL
        return [m.data for m in self.base.hom(k, domain, codomain)]

    def loosen_data(self, side, m):
        if side is Side.RIGHT:
            return m.data
        return self.base.loosen(Side.LEFT, self._down(m)).data

    def identity_data(self, x):
        return self.base.identity(x).data

    def compose_data(self, g, i, f):
        return self.base.compose(self._down(g), i, self._down(f)).data


def lift(model: FiniteModel, stage: Stage) -> FiniteModel:
    if stage is Stage.MULT_TO_LEFTSKEW:
        return LeftSkewLift(model)
    return BiskewLift(model)


def lift_to_biskew(model: FiniteModel) -> FiniteModel:
    if model.flavour == "plain":
        model = LeftSkewLift(model)
    if model.flavour == "leftskew":
        model = BiskewLift(model)
    return model


def from_category_seq(cat: FiniteCategory, arity_bound: int = 4) -> FiniteModel:
    return lift_to_biskew(SeqModel(cat, arity_bound))


# ---------------------------------------------------------------------------
# matrices: SetMat and the span multicategory


@dataclass(frozen=True)
class Matrix:
    """A set-valued matrix; ``entries`` maps (row, column) to a tuple."""

    name: str
    entries: tuple  # ((row, col), elements) pairs, sorted

    @classmethod
    def of(cls, name, table: dict) -> "Matrix":
        return cls(name, tuple(sorted((k, tuple(v)) for k, v in table.items())))

    def __call__(self, a, b) -> tuple:
        for k, v in self.entries:
            if k == (a, b):
                return v
        return ()

    def __str__(self):
        return self.name


class EndpointModel(FiniteModel):
    """Morphisms are functions indexed by boundary points.

    A morphism of arity n has boundaries R_0..R_n.  R_0 ranges over ``A``
    when the morphism is left-tight, otherwise over ``E`` (read through
    ``f``); R_n likewise over ``B`` or ``E`` (read through ``g``); inner
    boundaries range over ``E``.  Input k reads X_k(left(R_k), right(R_k+1))
    and the output lands in Y(left(R_0), right(R_n)).
    """

    def __init__(self, A, B, E, f: dict, g: dict, matrices, flavour="biskew", arity_bound=4, guard_limit=DEFAULT_GUARD,
                 name="Span"):
        super().__init__(arity_bound, guard_limit)
        self.A, self.B, self.E = tuple(A), tuple(B), tuple(E)
        self.f, self.g = dict(f), dict(g)
        self.matrices = tuple(matrices)
        self.flavour = flavour
        self.name = name
        self._keys = {}

    def objects(self):
        return self.matrices

    def boundary_sets(self, kind: Kind, n: int):
        sets = []
        for p in range(n + 1):
            if p == 0 and kind.left_tight:
                sets.append(self.A)
            elif p == n and kind.right_tight:
                sets.append(self.B)
            else:
                sets.append(self.E)
        return sets

    def _left(self, kind, p, r):
        return r if (p == 0 and kind.left_tight) else self.f[r]

    def _right(self, kind, p, n, r):
        return r if (p == n and kind.right_tight) else self.g[r]

    def keys(self, kind: Kind, domain: tuple):
        """Ordered (boundaries, inputs) keys and their positions."""
        ck = (kind, domain)
        hit = self._keys.get(ck)
        if hit is not None:
            return hit
        n = len(domain)
        keys = []
        for R in itertools.product(*self.boundary_sets(kind, n)):
            inputs = [domain[k](self._left(kind, k, R[k]), self._right(kind, k + 1, n, R[k + 1])) for k in range(n)]
            for xs in itertools.product(*inputs):
                keys.append((R, xs))
        index = {k: i for i, k in enumerate(keys)}
        self._keys[ck] = (keys, index)
        return keys, index

    def output_set(self, kind, n, R, codomain):
        return codomain(self._left(kind, 0, R[0]), self._right(kind, n, n, R[n]))

    def hom_data(self, kind, domain, codomain):
        keys, _ = self.keys(kind, domain)
        options = [self.output_set(kind, len(domain), R, codomain) for R, _ in keys]
        total = 1
        for o in options:
            total *= len(o)
            if total == 0:
                return []
        guard(total, self.guard_limit, f"{self.name} hom")
        return list(itertools.product(*options))

    def value(self, m: Mor, R, xs):
        _, index = self.keys(m.arrow.kind, m.arrow.domain)
        return m.data[index[(R, xs)]]

    def loosen_data(self, side, m):
        a = m.arrow
        new_kind = a.kind.loosened(side)
        keys, _ = self.keys(new_kind, a.domain)
        n = a.arity
        out = []
        for R, xs in keys:
            if side is Side.LEFT:
                R0 = (self.f[R[0]],) + R[1:]
            else:
                R0 = R[:-1] + (self.g[R[-1]],)
            out.append(self.value(m, R0, xs))
        return tuple(out)

    def identity_data(self, x):
        k = IDENTITY_KIND[self.flavour]
        keys, _ = self.keys(k, (x,))
        return tuple(xs[0] for _, xs in keys)

    def compose_data(self, g, i, f):
        a = compose_arrows(g.arrow, i, f.arrow)
        m = f.arrow.arity
        keys, _ = self.keys(a.kind, a.domain)
        out = []
        for R, xs in keys:
            Rf = R[i : i + m + 1]
            y = self.value(f, Rf, xs[i : i + m])
            Rg = R[: i + 1] + R[i + m :]
            out.append(self.value(g, Rg, xs[:i] + (y,) + xs[i + m :]))
        return tuple(out)


def all_matrices(rows, cols, universe, limit=DEFAULT_GUARD, prefix="X") -> list:
    """Every matrix whose entries are subsets of ``universe``."""
    cells = list(itertools.product(rows, cols))
    subsets = [tuple(c) for r in range(len(universe) + 1) for c in itertools.combinations(universe, r)]
    guard(len(subsets) ** len(cells), limit, "matrices")
    out = []
    for n, choice in enumerate(itertools.product(subsets, repeat=len(cells))):
        out.append(Matrix.of(f"{prefix}{n}", dict(zip(cells, choice))))
    return out


def from_setmat(E, value_universe, matrices=None, arity_bound=4, guard_limit=DEFAULT_GUARD) -> FiniteModel:
    """SetMat_E restricted to ``matrices`` (default: all of them), lifted
    through both stages."""
    E = tuple(E)
    if not E:
        raise ValueError("E must be nonempty")
    if matrices is None:
        matrices = all_matrices(E, E, tuple(value_universe), guard_limit)
    ident = {e: e for e in E}
    plain = EndpointModel(E, E, E, ident, ident, matrices, "plain", arity_bound, guard_limit, name="SetMat")
    return lift_to_biskew(plain)


def setmat_plain(E, matrices, arity_bound=4, guard_limit=DEFAULT_GUARD) -> EndpointModel:
    ident = {e: e for e in E}
    return EndpointModel(E, E, E, ident, ident, matrices, "plain", arity_bound, guard_limit, name="SetMat")


def from_span(A, B, E, f, g, matrices=None, value_universe=None, arity_bound=4, guard_limit=DEFAULT_GUARD):
    if matrices is None:
        matrices = all_matrices(A, B, tuple(value_universe or ()), guard_limit)
    return EndpointModel(A, B, E, f, g, matrices, "biskew", arity_bound, guard_limit)


# ---------------------------------------------------------------------------
# explicit tables and mutation


class TableModel(FiniteModel):
    def __init__(self, flavour, objects, homs, loosenings, identities, compositions, arity_bound, name="table"):
        super().__init__(arity_bound, None)
        self.flavour = flavour
        self._objects = tuple(objects)
        self.homs = homs  # (kind, domain, codomain) -> [Mor]
        self.loosenings = loosenings  # (side, Mor) -> Mor
        self.identities = identities  # object -> Mor
        self.compositions = compositions  # (g, i, f) -> Mor
        self.name = name

    def objects(self):
        return self._objects

    def hom_data(self, kind, domain, codomain):
        return [m.data for m in self.homs.get((kind, domain, codomain), [])]

    def loosen(self, side, m):
        try:
            return self.loosenings[(side, m)]
        except KeyError:
            raise ArityBoundExceeded(f"no loosening entry for {m}") from None

    def identity(self, x):
        return self.identities[x]

    def compose(self, g, i, f):
        try:
            return self.compositions[(g, i, f)]
        except KeyError:
            compose_arrows(g.arrow, i, f.arrow)
            raise ArityBoundExceeded(f"no composition entry for {g} o_{i} {f}") from None

    def copy(self) -> "TableModel":
        return TableModel(self.flavour, self._objects, self.homs, dict(self.loosenings), dict(self.identities),
                          dict(self.compositions), self.arity_bound, self.name)


def tabulate(model: FiniteModel, arity_bound: int | None = None) -> TableModel:
    bound = model.arity_bound if arity_bound is None else arity_bound
    homs = {}
    by_cod_kind = {}
    for m in model.all_morphisms(bound):
        a = m.arrow
        homs.setdefault((a.kind, a.domain, a.codomain), []).append(m)
        by_cod_kind.setdefault((a.codomain, a.kind), []).append(m)
    loosenings = {}
    compositions = {}
    for ms in homs.values():
        for m in ms:
            for side in model.sides:
                if m.arrow.kind.is_tight_on(side):
                    loosenings[(side, m)] = model.loosen(side, m)
            for i in range(m.arrow.arity):
                sk = slot_kind(m.arrow, i)
                for f in by_cod_kind.get((m.arrow.domain[i], sk), []):
                    if m.arrow.arity + f.arrow.arity - 1 <= bound:
                        compositions[(m, i, f)] = model.compose(m, i, f)
    identities = {x: model.identity(x) for x in model.objects()}
    return TableModel(model.flavour, model.objects(), homs, loosenings, identities, compositions, bound,
                      f"table({model.name})")


def mutate(table: TableModel, rng: random.Random):
    """A copy of ``table`` with one entry replaced by another element of the
    same hom-set.  Returns (model, description)."""
    candidates = []
    for key, v in table.compositions.items():
        candidates.append(("composition", key, v))
    for key, v in table.identities.items():
        candidates.append(("identity", key, v))
    for key, v in table.loosenings.items():
        candidates.append(("loosening", key, v))
    rng.shuffle(candidates)
    for where, key, v in candidates:
        a = v.arrow
        others = [m for m in table.homs.get((a.kind, a.domain, a.codomain), []) if m != v]
        if not others:
            continue
        new = rng.choice(others)
        t = table.copy()
        getattr(t, {"composition": "compositions", "identity": "identities", "loosening": "loosenings"}[where])[key] = new
        return t, f"{where} {_describe_key(key)}: {v} -> {new}"
    raise ValueError("no mutable entry: every hom-set is a singleton")


def _describe_key(key):
    if isinstance(key, tuple) and len(key) == 3:
        g, i, f = key
        return f"({g}) o_{i} ({f})"
    if isinstance(key, tuple) and len(key) == 2:
        return f"llo{key[0].value}({key[1]})"
    return str(key)


# ---------------------------------------------------------------------------
# law checking


class _Stop(Exception):
    pass


def _form(g: Mor, i, f: Mor) -> str:
    return form_of(g.arrow, i, f.arrow).value


def check_axioms(model: FiniteModel, mode: AxiomMode = AxiomMode.UNIFORM, limit: int | None = None) -> list:
    """Every law instance whose morphisms all have arity at most the model's
    bound.  ``limit`` stops after that many violations."""
    out: list[Violation] = []
    strict = mode is AxiomMode.STRICT and model.flavour == "biskew"
    bound = model.arity_bound

    def record(law, witness, lhs, rhs, raw=()):
        expect(out, law, witness, lhs, rhs, raw)
        if limit is not None and len(out) >= limit:
            raise _Stop

    morphisms = list(model.all_morphisms(bound))
    by_cod_kind = {}
    for m in morphisms:
        by_cod_kind.setdefault((m.arrow.codomain, m.arrow.kind), []).append(m)

    def member(m, law, witness):
        if not model.in_hom(m):
            record(law, witness, "outside its hom-set", m.arrow, (m,))
            return False
        return True

    try:
        # structure lands where it should
        for x in model.objects():
            idm = model.identity(x)
            member(idm, "identity-typed", (x,))
        for m in morphisms:
            for side in model.sides:
                if m.arrow.kind.is_tight_on(side):
                    member(model.loosen(side, m), f"loosen-{side.name.lower()}-typed", (m,))

        composites = {}

        def comp(g, i, f):
            key = (g, i, f)
            r = composites.get(key)
            if r is None:
                r = model.compose(g, i, f)
                composites[key] = r
            return r

        def args(g, i, room):
            sk = slot_kind(g.arrow, i)
            for f in by_cod_kind.get((g.arrow.domain[i], sk), ()):
                if f.arrow.arity <= room:
                    yield f

        for g in morphisms:
            for i in range(g.arrow.arity):
                for f in args(g, i, bound - g.arrow.arity + 1):
                    member(comp(g, i, f), "composite-typed", (g, i, f))

        # loosenings commute with each other
        if len(model.sides) == 2:
            for m in morphisms:
                if m.arrow.kind is Kind.TT:
                    lr = model.loosen(Side.LEFT, model.loosen(Side.RIGHT, m))
                    rl = model.loosen(Side.RIGHT, model.loosen(Side.LEFT, m))
                    record("loosen-swap", (m,), lr, rl, (m,))

        # loosening commutes with composition
        for side in model.sides:
            allowed = STRICT_LEFT_LOOSEN if side is Side.LEFT else STRICT_RIGHT_LOOSEN
            for g in morphisms:
                if not g.arrow.kind.is_tight_on(side):
                    continue
                n = g.arrow.arity
                boundary = 0 if side is Side.LEFT else n - 1
                lg = model.loosen(side, g)
                for i in range(n):
                    for f in args(g, i, bound - n + 1):
                        if strict and _form(g, i, f) not in allowed:
                            continue
                        lhs = model.loosen(side, comp(g, i, f))
                        f2 = model.loosen(side, f) if i == boundary else f
                        rhs = comp(lg, i, f2)
                        record(f"loosen-{side.name.lower()}-commute/{_form(g, i, f)}", (g, i, f), lhs, rhs, (g, i, f))

        # identities
        for m in morphisms:
            a = m.arrow
            ident = model.loosen_to(model.identity(a.codomain), a.kind)
            record("left-identity", (m,), comp(ident, 0, m), m, (m,))
            for i in range(a.arity):
                ident = model.loosen_to(model.identity(a.domain[i]), slot_kind(a, i))
                record("right-identity", (m, i), comp(m, i, ident), m, (m, i))

        # associativity: h o_i (g o_j f) = (h o_i g) o_{i+j} f
        for h in morphisms:
            nh = h.arrow.arity
            for i in range(nh):
                for g in args(h, i, bound - nh + 1):
                    ng = g.arrow.arity
                    hg = comp(h, i, g)
                    for j in range(ng):
                        room = min(bound - ng + 1, bound - (nh + ng - 1) + 1)
                        for f in args(g, j, room):
                            if strict and (_form(g, j, f), _form(h, i, g)) not in STRICT_ASSOC:
                                continue
                            lhs = comp(h, i, comp(g, j, f))
                            rhs = comp(hg, i + j, f)
                            record(f"assoc/{_form(g, j, f)}{_form(h, i, g)}", (h, i, g, j, f), lhs, rhs, (h, i, g, j, f))

        # interchange: (h o_j g) o_i f = (h o_i f) o_{j+|f|-1} g  for i < j
        for h in morphisms:
            nh = h.arrow.arity
            for j in range(nh):
                for g in args(h, j, bound - nh + 1):
                    hg = comp(h, j, g)
                    nhg = hg.arrow.arity
                    for i in range(j):
                        for f in args(h, i, bound - nh + 1):
                            if nhg + f.arrow.arity - 1 > bound:
                                continue
                            if strict and (_form(h, i, f), _form(h, j, g)) not in STRICT_INTERCHANGE:
                                continue
                            lhs = comp(hg, i, f)
                            rhs = comp(comp(h, i, f), j + f.arrow.arity - 1, g)
                            record(f"interchange/{_form(h, i, f)}{_form(h, j, g)}", (h, i, f, j, g), lhs, rhs,
                                   (h, i, f, j, g))
    except _Stop:
        pass
    return out


# ---------------------------------------------------------------------------
# interpreting terms


def eval_term(model: FiniteModel, assignment: dict, t: Term, sig=None) -> Mor:
    if isinstance(t, Gen):
        if t.name not in assignment:
            raise AssignmentMismatch(f"no value for generator {t.name!r}")
        m = assignment[t.name]
        if sig is not None and sig.arrow_of(t.name) != m.arrow:
            raise AssignmentMismatch(f"{t.name} is declared {sig.arrow_of(t.name)}, assigned {m.arrow}")
        return m
    if isinstance(t, Id):
        return model.identity(t.obj)
    if isinstance(t, Loosen):
        return model.loosen(t.side, eval_term(model, assignment, t.term, sig))
    if isinstance(t, Cmp):
        g = eval_term(model, assignment, t.g, sig)
        f = eval_term(model, assignment, t.f, sig)
        return model.compose(g, t.i, f)
    raise TermError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# tensors in plain models


def find_tensor(model: FiniteModel, objs) -> tuple | None:
    """First (v, p) with p : objs -> v such that precomposition with p is a
    bijection on every context that fits the arity bound."""
    objs = tuple(objs)
    bound = model.arity_bound
    room = bound - len(objs)
    if room < 0:
        raise ArityBoundExceeded("tensor needs the list itself to fit")
    contexts = []
    for n in range(room + 1):
        for k in range(n + 1):
            for left in itertools.product(model.objects(), repeat=k):
                for right in itertools.product(model.objects(), repeat=n - k):
                    contexts.append((left, right))
    for v in model.objects():
        for p in model.hom(Kind.LL, objs, v):
            if _universal(model, p, v, objs, contexts):
                return v, p
    return None


def _universal(model, p, v, objs, contexts) -> bool:
    for left, right in contexts:
        for y in model.objects():
            source = model.hom(Kind.LL, left + (v,) + right, y)
            target = model.hom(Kind.LL, left + objs + right, y)
            if len(source) != len(target):
                return False
            image = {model.compose(g, len(left), p) for g in source}
            if len(image) != len(target):
                return False
    return True


def hom_counts(model: FiniteModel, max_arity: int | None = None) -> dict:
    top = model.arity_bound if max_arity is None else max_arity
    out = {}
    for n in range(top + 1):
        for dom in model.domains(n):
            for cod in model.objects():
                for k in model.kinds:
                    out[(k.name, tuple(map(str, dom)), str(cod))] = len(model.hom(k, dom, cod))
    return out


__all__ = [
    "Mor",
    "FiniteModel",
    "Stage",
    "TerminalModel",
    "SeqModel",
    "LeftSkewLift",
    "BiskewLift",
    "EndpointModel",
    "Matrix",
    "TableModel",
    "terminal_model",
    "from_category_seq",
    "from_setmat",
    "setmat_plain",
    "from_span",
    "all_matrices",
    "lift",
    "lift_to_biskew",
    "tabulate",
    "mutate",
    "check_axioms",
    "eval_term",
    "find_tensor",
    "hom_counts",
    "HomMembership",
]
