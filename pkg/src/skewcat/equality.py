"""Equality of terms in the free bi-skew multicategory.

Two routes decide whether two terms denote the same morphism:

* ``normalize`` flattens a term to its grafting tree and kind, a canonical
  invariant of the associativity, interchange, identity and loosening laws;
* ``oracle_equal`` explores the bounded equational closure generated by the
  one-step rewrites of ``law_instances``, knowing nothing about trees.

The two are checked against each other in the acceptance suite.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import DEFAULT_GUARD, ArrowMismatch, InfeasibleNormalForm, guard
from .kernel import (
    Arrow,
    Cmp,
    Form,
    Gen,
    Id,
    Kind,
    Loosen,
    Side,
    Signature,
    Term,
    form_of,
    infer,
    loosen_to,
    size,
    slot_kind,
    well_formed,
)


class AxiomMode(enum.Enum):
    UNIFORM = "uniform"
    STRICT = "strict"


# Exactly the lists stated with the bi-skew definition.
STRICT_LEFT_LOOSEN = frozenset("BDEFI")
STRICT_RIGHT_LOOSEN = frozenset("CDFHI")
# (inner composite, outer composite) on the nested side h o_i (g o_j f).
STRICT_ASSOC = frozenset({("E", "E"), ("G", "G"), ("E", "F"), ("G", "H"), ("F", "I"), ("H", "I"), ("I", "I")})
# (form of h o_i f, form of h o_j g) for i < j.
STRICT_INTERCHANGE = frozenset(
    {("A", "A"), ("E", "B"), ("B", "B"), ("C", "G"), ("C", "C"), ("F", "H"), ("F", "D"), ("D", "H"), ("D", "D")}
)


# ---------------------------------------------------------------------------
# grafting trees


@dataclass(frozen=True)
class Slot:
    obj: object

    def __str__(self):
        return f"<{self.obj}>"


@dataclass(frozen=True)
class Node:
    name: str
    children: tuple

    def __str__(self):
        return f"{self.name}({', '.join(map(str, self.children))})"


GraftTree = "Slot | Node"


def leaves(tree) -> list:
    if isinstance(tree, Slot):
        return [tree.obj]
    out = []
    for c in tree.children:
        out.extend(leaves(c))
    return out


def node_count(tree) -> int:
    if isinstance(tree, Slot):
        return 0
    return 1 + sum(node_count(c) for c in tree.children)


def graft(tree, i: int, sub):
    """Replace the ``i``-th leaf of ``tree`` by ``sub``."""

    def go(t, k):
        # returns (new tree, leaves consumed)
        if isinstance(t, Slot):
            return (sub if k == 0 else t), 1
        out = []
        consumed = 0
        for c in t.children:
            j = k - consumed
            nc, used = go(c, j) if 0 <= j else (c, n_leaves(c))
            out.append(nc)
            consumed += used
        return Node(t.name, tuple(out)), consumed

    return go(tree, i)[0]


@lru_cache(maxsize=None)
def n_leaves(tree) -> int:
    if isinstance(tree, Slot):
        return 1
    return sum(n_leaves(c) for c in tree.children)


@dataclass(frozen=True)
class NormalForm:
    kind: Kind
    tree: object
    codomain: object

    def __str__(self):
        return f"{self.kind.name} {self.tree} -> {self.codomain}"


def _spine_ok(sig: Signature, tree, side: Side) -> bool:
    t = tree
    while isinstance(t, Node):
        a = sig.arrow_of(t.name)
        if not a.kind.is_tight_on(side) or not t.children:
            return False
        t = t.children[0] if side is Side.LEFT else t.children[-1]
    return True


def feasible(sig: Signature, nf: NormalForm) -> bool:
    if nf.kind.left_tight and not _spine_ok(sig, nf.tree, Side.LEFT):
        return False
    if nf.kind.right_tight and not _spine_ok(sig, nf.tree, Side.RIGHT):
        return False
    return True


def _tree_of(sig: Signature, t: Term):
    if isinstance(t, Gen):
        a = sig.arrow_of(t.name)
        return Node(t.name, tuple(Slot(x) for x in a.domain))
    if isinstance(t, Id):
        return Slot(t.obj)
    if isinstance(t, Loosen):
        return _tree_of(sig, t.term)
    return graft(_tree_of(sig, t.g), t.i, _tree_of(sig, t.f))


def normalize(sig: Signature, t: Term) -> NormalForm:
    a = infer(sig, t)
    nf = NormalForm(a.kind, _tree_of(sig, t), a.codomain)
    assert feasible(sig, nf), f"well-formed term {t} produced an infeasible normal form"
    return nf


def _tree_root_obj(sig, tree):
    if isinstance(tree, Slot):
        return tree.obj
    return sig.arrow_of(tree.name).codomain


def _realize(sig: Signature, tree, kind: Kind) -> Term:
    if isinstance(tree, Slot):
        return loosen_to(Id(tree.obj), Kind.TT, kind)
    declared = sig.arrow_of(tree.name)
    t = loosen_to(Gen(tree.name), declared.kind, kind)
    n = len(tree.children)
    for i in reversed(range(n)):
        child = tree.children[i]
        if isinstance(child, Slot):
            continue
        ck = Kind.of(i == 0 and kind.left_tight, i == n - 1 and kind.right_tight)
        t = Cmp(t, i, _realize(sig, child, ck))
    return t


def realize(sig: Signature, nf: NormalForm) -> Term:
    """A canonical term with normal form ``nf``."""
    if not feasible(sig, nf):
        raise InfeasibleNormalForm(str(nf))
    t = _realize(sig, nf.tree, nf.kind)
    if _tree_root_obj(sig, nf.tree) != nf.codomain:
        raise InfeasibleNormalForm(f"root of {nf.tree} does not produce {nf.codomain}")
    return t


def check_tree(sig: Signature, tree) -> None:
    """Raise ``InfeasibleNormalForm`` unless every child matches its slot."""
    if isinstance(tree, Slot):
        return
    a = sig.arrow_of(tree.name)
    if len(tree.children) != a.arity:
        raise InfeasibleNormalForm(f"{tree.name} needs {a.arity} children")
    for x, c in zip(a.domain, tree.children):
        if _tree_root_obj(sig, c) != x:
            raise InfeasibleNormalForm(f"child {c} of {tree.name} does not produce {x}")
        check_tree(sig, c)


# ---------------------------------------------------------------------------
# one-step rewrites


def _identity_like(t: Term):
    """The object of an identity wrapped in loosenings, else None."""
    while isinstance(t, Loosen):
        t = t.term
    return t.obj if isinstance(t, Id) else None


def _form(sig, g, i, f) -> str:
    return form_of(infer(sig, g), i, infer(sig, f)).value


def _root_rewrites(sig: Signature, t: Term, strict: bool, room):
    a = infer(sig, t)
    # L1: the two loosenings commute
    if isinstance(t, Loosen) and isinstance(t.term, Loosen) and t.side is not t.term.side:
        yield "loosen-swap", Loosen(t.term.side, Loosen(t.side, t.term.term))

    # L2 / L3 forward: push a loosening into a composite
    if isinstance(t, Loosen) and isinstance(t.term, Cmp):
        side = t.side
        g, i, f = t.term.g, t.term.i, t.term.f
        boundary = 0 if side is Side.LEFT else infer(sig, g).arity - 1
        grows = i == boundary
        if (room is None or room >= grows) and (
            not strict or _form(sig, g, i, f) in (STRICT_LEFT_LOOSEN if side is Side.LEFT else STRICT_RIGHT_LOOSEN)
        ):
            f2 = Loosen(side, f) if grows else f
            yield f"loosen-{side.name.lower()}-commute", Cmp(Loosen(side, g), i, f2)

    if isinstance(t, Cmp):
        g, i, f = t.g, t.i, t.f
        ga = infer(sig, g)
        # L2 / L3 reverse: pull a loosening out of a composite
        for side in (Side.LEFT, Side.RIGHT):
            if not isinstance(g, Loosen) or g.side is not side:
                continue
            inner_g = g.term
            boundary = 0 if side is Side.LEFT else ga.arity - 1
            if i == boundary:
                if not (isinstance(f, Loosen) and f.side is side):
                    continue
                inner_f = f.term
            else:
                inner_f = f
            cand = Cmp(inner_g, i, inner_f)
            if not well_formed(sig, cand):
                continue
            if strict and _form(sig, inner_g, i, inner_f) not in (
                STRICT_LEFT_LOOSEN if side is Side.LEFT else STRICT_RIGHT_LOOSEN
            ):
                continue
            yield f"loosen-{side.name.lower()}-commute-rev", Loosen(side, cand)

        # L4 absorption
        if _identity_like(f) is not None:
            yield "right-identity", g
        if _identity_like(g) is not None:
            yield "left-identity", f

        # L5 / L6
        if isinstance(f, Cmp):
            h, j, ff = g, f.i, f.f
            gg = f.g
            if not strict or (_form(sig, gg, j, ff), _form(sig, h, i, f)) in STRICT_ASSOC:
                yield "assoc", Cmp(Cmp(h, i, gg), i + j, ff)
        if isinstance(g, Cmp):
            h, p, inner = g.g, g.i, g.f
            q, b = i, f
            width = infer(sig, inner).arity
            if q < p:
                # interchange: b sits left of inner
                if not strict or (_form(sig, h, q, b), _form(sig, h, p, inner)) in STRICT_INTERCHANGE:
                    yield "interchange", Cmp(Cmp(h, q, b), p + infer(sig, b).arity - 1, inner)
            elif q < p + width:
                cand = Cmp(h, p, Cmp(inner, q - p, b))
                if not strict or (_form(sig, inner, q - p, b), _form(sig, h, p, inner)) in STRICT_ASSOC:
                    yield "assoc-rev", cand
            else:
                j = q - width + 1
                if not strict or (_form(sig, h, p, inner), _form(sig, h, j, b)) in STRICT_INTERCHANGE:
                    yield "interchange-rev", Cmp(Cmp(h, j, b), p, inner)

    # L4 insertion, always allowed; skipped when it cannot fit in ``room``
    for k in range(a.arity):
        sk = slot_kind(a, k)
        if room is None or room >= _identity_cost(sk):
            yield "right-identity-rev", Cmp(t, k, loosen_to(Id(a.domain[k]), Kind.TT, sk))
    if room is None or room >= _identity_cost(a.kind):
        yield "left-identity-rev", Cmp(loosen_to(Id(a.codomain), Kind.TT, a.kind), 0, t)


def _identity_cost(kind: Kind) -> int:
    # the Cmp, the Id and one Loosen per loose side
    return 2 + (not kind.left_tight) + (not kind.right_tight)


def _all_rewrites(sig: Signature, t: Term, strict: bool, room=None):
    yield from _root_rewrites(sig, t, strict, room)
    if isinstance(t, Loosen):
        for name, r in _all_rewrites(sig, t.term, strict, room):
            yield name, Loosen(t.side, r)
    elif isinstance(t, Cmp):
        for name, r in _all_rewrites(sig, t.g, strict, room):
            yield name, Cmp(r, t.i, t.f)
        for name, r in _all_rewrites(sig, t.f, strict, room):
            yield name, Cmp(t.g, t.i, r)


def law_instances(sig: Signature, t: Term, mode: AxiomMode = AxiomMode.UNIFORM, size_bound=None) -> list:
    """All one-step rewrites of ``t`` as ``(law name, rewritten term)``,
    optionally only those of size at most ``size_bound``."""
    infer(sig, t)
    room = None if size_bound is None else size_bound - size(t)
    return list(_all_rewrites(sig, t, mode is AxiomMode.STRICT, room))


# ---------------------------------------------------------------------------
# oracle


class Verdict(enum.Enum):
    EQUAL = "EQUAL"
    DISTINCT = "DISTINCT"
    UNKNOWN = "UNKNOWN"


DEFAULT_SLACK = 4
DEFAULT_STEPS = 64


@dataclass
class Closure:
    terms: set
    saturated: bool
    rounds: int


def closure(sig, t, mode=AxiomMode.UNIFORM, size_bound=None, step_bound=DEFAULT_STEPS, target=None) -> Closure:
    """Breadth-first closure of ``{t}`` among terms of size at most
    ``size_bound``.  Stops early when ``target`` is reached."""
    if size_bound is None:
        size_bound = size(t) + DEFAULT_SLACK
    strict = mode is AxiomMode.STRICT
    seen = {t}
    frontier = [t]
    for rnd in range(1, step_bound + 1):
        nxt = []
        for u in frontier:
            for _, r in _all_rewrites(sig, u, strict, size_bound - size(u)):
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        if target is not None and target in seen:
            return Closure(seen, False, rnd)
        if not nxt:
            return Closure(seen, True, rnd)
        frontier = nxt
    return Closure(seen, False, step_bound)


def oracle_equal(
    sig: Signature,
    t: Term,
    s: Term,
    mode: AxiomMode = AxiomMode.UNIFORM,
    step_bound: int = DEFAULT_STEPS,
    size_bound: int | None = None,
) -> Verdict:
    """Decide ``t = s`` by closure.

    The closure only admits terms of size at most ``size_bound`` (default:
    the larger input size plus 4).  EQUAL when ``s`` is reached, DISTINCT
    when the bounded closure stops growing without reaching it, UNKNOWN when
    ``step_bound`` rounds pass first.
    """
    ta, sa = infer(sig, t), infer(sig, s)
    if ta != sa:
        raise ArrowMismatch(f"{ta} vs {sa}")
    if t == s:
        return Verdict.EQUAL
    if size_bound is None:
        size_bound = max(size(t), size(s)) + DEFAULT_SLACK
    c = closure(sig, t, mode, size_bound, step_bound, target=s)
    if s in c.terms:
        return Verdict.EQUAL
    return Verdict.DISTINCT if c.saturated else Verdict.UNKNOWN


# ---------------------------------------------------------------------------
# enumeration


def _trees(sig: Signature, obj, budget: int):
    """All trees producing ``obj`` with at most ``budget`` generator nodes,
    as (tree, nodes used)."""
    out = [(Slot(obj), 0)]
    if budget <= 0:
        return out
    for g in sig.generators:
        if g.arrow.codomain != obj:
            continue
        for kids, used in _forests(sig, g.arrow.domain, budget - 1):
            out.append((Node(g.name, kids), used + 1))
    return out


def _forests(sig, objs, budget):
    if not objs:
        return [((), 0)]
    out = []
    for first, u in _trees(sig, objs[0], budget):
        for rest, v in _forests(sig, objs[1:], budget - u):
            out.append(((first,) + rest, u + v))
    return out


def enumerate_normal_forms(sig: Signature, max_nodes: int, limit: int | None = DEFAULT_GUARD) -> list:
    out = []
    for obj in sig.objects:
        for tree, _ in _trees(sig, obj, max_nodes):
            for kind in Kind:
                nf = NormalForm(kind, tree, obj)
                if feasible(sig, nf):
                    out.append(nf)
                    guard(len(out), limit, "normal forms")
    return out


class _TermEnumerator:
    def __init__(self, sig: Signature, limit):
        self.sig = sig
        self.limit = limit
        self.memo = {}
        self.total = 0

    def replace(self, tree, path, obj):
        if not path:
            return Slot(obj)
        ci, rest = path[0], path[1:]
        kids = list(tree.children)
        kids[ci] = self.replace(kids[ci], rest, obj)
        return Node(tree.name, tuple(kids))

    def decompositions(self, tree):
        """(context, slot index, subtree) for each non-root generator node."""

        def go(t, path, offset):
            pos = offset
            for ci, c in enumerate(t.children):
                if isinstance(c, Node):
                    p = path + (ci,)
                    obj = self.sig.arrow_of(c.name).codomain
                    yield self.replace(tree, p, obj), pos, c
                    yield from go(c, p, pos)
                pos += n_leaves(c)

        if isinstance(tree, Node):
            yield from go(tree, (), 0)

    def terms(self, tree, kind: Kind) -> list:
        key = (tree, kind)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = []
        if isinstance(tree, Node):
            declared = self.sig.arrow_of(tree.name).kind
            if all(isinstance(c, Slot) for c in tree.children) and declared is kind:
                out.append(Gen(tree.name))
            for ctx, i, sub in self.decompositions(tree):
                sk = Kind.of(i == 0 and kind.left_tight, i == n_leaves(ctx) - 1 and kind.right_tight)
                if not feasible(self.sig, NormalForm(sk, sub, None)):
                    continue
                for g in self.terms(ctx, kind):
                    for f in self.terms(sub, sk):
                        out.append(Cmp(g, i, f))
        for side in (Side.LEFT, Side.RIGHT):
            if kind.is_tight_on(side):
                continue
            tighter = Kind.of(kind.left_tight or side is Side.LEFT, kind.right_tight or side is Side.RIGHT)
            if feasible(self.sig, NormalForm(tighter, tree, None)):
                out.extend(Loosen(side, t) for t in self.terms(tree, tighter))
        self.total += len(out)
        guard(self.total, self.limit, "enumerated terms")
        self.memo[key] = out
        return out


def enumerate_terms(
    sig: Signature, max_generator_occurrences: int, limit: int | None = DEFAULT_GUARD, allow_empty: bool = False
) -> list:
    """One canonical term per normal form, followed by every identity-free
    bracketing and loosening variant with the same normal form."""
    if max_generator_occurrences < 1:
        if allow_empty:
            return []
        raise ValueError("bound must be at least 1")
    en = _TermEnumerator(sig, limit)
    out = []
    seen = set()
    for nf in enumerate_normal_forms(sig, max_generator_occurrences, limit):
        canon = realize(sig, nf)
        group = [canon]
        if isinstance(nf.tree, Slot):
            group.extend(_identity_variants(nf.tree.obj, nf.kind))
        else:
            group.extend(en.terms(nf.tree, nf.kind))
        for t in group:
            if t not in seen:
                seen.add(t)
                out.append(t)
                guard(len(out), limit, "enumerated terms")
    return out


def _identity_variants(obj, kind):
    base = Id(obj)
    if kind is Kind.LL:
        return [Loosen(Side.LEFT, Loosen(Side.RIGHT, base)), Loosen(Side.RIGHT, Loosen(Side.LEFT, base))]
    return [loosen_to(base, Kind.TT, kind)]


def group_by_normal_form(sig: Signature, terms) -> dict:
    groups = {}
    for t in terms:
        groups.setdefault(normalize(sig, t), []).append(t)
    return groups


def format_normal_form(nf: NormalForm) -> str:
    return str(nf)


# ---------------------------------------------------------------------------
# normalizer against oracle, over a whole corpus


@dataclass
class AgreementReport:
    terms: int = 0
    classes: int = 0
    closures: int = 0
    visited: int = 0
    disagreements: list = field(default_factory=list)
    completed: bool = False
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.completed and not self.disagreements


def agreement(
    sig: Signature,
    terms,
    mode: AxiomMode = AxiomMode.UNIFORM,
    slack: int = DEFAULT_SLACK,
    step_bound: int = DEFAULT_STEPS,
    deadline: float | None = None,
) -> AgreementReport:
    """Compare normal-form equality with ``oracle_equal`` on every pair of
    ``terms`` sharing an Arrow.

    Rewrites apply in both directions, so the oracle's closure from ``t`` at
    size bound ``b`` is the connected component of ``t`` among terms of size
    at most ``b``.  One breadth-first search per (normal form, bound)
    therefore settles every pair whose bound is ``b``: a pair is EQUAL iff
    both terms lie in one component, DISTINCT iff they do not (given
    saturation).  When the search depth ``d`` satisfies ``2d + 1 <=
    step_bound`` no start point can exceed the step bound, otherwise the
    affected pairs are decided by ``oracle_equal`` directly.
    """
    start = time.monotonic()
    rep = AgreementReport(terms=len(terms))
    by_arrow = {}
    for t in terms:
        by_arrow.setdefault(infer(sig, t), []).append(t)
    for group in by_arrow.values():
        sizes = sorted({size(t) for t in group})
        for nf, members in group_by_normal_form(sig, group).items():
            rep.classes += 1
            root = min(members, key=lambda u: (size(u), str(u)))
            lo = size(root)
            for top in sizes:
                if top < lo:
                    continue
                if deadline is not None and time.monotonic() - start > deadline:
                    rep.elapsed = time.monotonic() - start
                    return rep
                bound = top + slack
                c = closure(sig, root, mode, bound, step_bound)
                rep.closures += 1
                rep.visited += len(c.terms)
                foreign = next((u for u in c.terms if normalize(sig, u) != nf), None)
                if foreign is not None:
                    rep.disagreements.append(("oracle reached another normal form", str(root), str(foreign), bound))
                    continue
                depth = c.rounds - 1
                exact = c.saturated and 2 * depth + 1 <= step_bound
                missing = [u for u in members if size(u) <= top and u not in c.terms]
                suspects = members if not exact else missing
                for u in suspects:
                    for v in group:
                        if u == v or max(size(u), size(v)) != top:
                            continue
                        verdict = oracle_equal(sig, u, v, mode, step_bound, bound)
                        same = normalize(sig, v) == nf
                        if verdict is Verdict.UNKNOWN or (verdict is Verdict.EQUAL) != same:
                            rep.disagreements.append((f"oracle said {verdict.value}", str(u), str(v), bound))
    rep.completed = True
    rep.elapsed = time.monotonic() - start
    return rep


def mode_divergence(sig: Signature, terms, slack: int = DEFAULT_SLACK, step_bound: int = DEFAULT_STEPS,
                    deadline: float | None = None) -> dict:
    """Pairs the uniform law set identifies but the strict one does not.

    For each normal-form class the strict closure of its smallest term is
    computed at the class's own size bound; class members it misses are
    listed.
    """
    start = time.monotonic()
    out = {"classes": 0, "divergent_classes": [], "completed": False}
    for nf, members in group_by_normal_form(sig, terms).items():
        if deadline is not None and time.monotonic() - start > deadline:
            out["elapsed"] = time.monotonic() - start
            return out
        out["classes"] += 1
        root = min(members, key=lambda u: (size(u), str(u)))
        bound = max(size(u) for u in members) + slack
        c = closure(sig, root, AxiomMode.STRICT, bound, step_bound)
        missed = sorted(str(u) for u in members if u not in c.terms)
        if missed:
            out["divergent_classes"].append({"normal_form": str(nf), "root": str(root), "unreached": missed})
    out["completed"] = True
    out["elapsed"] = time.monotonic() - start
    return out
