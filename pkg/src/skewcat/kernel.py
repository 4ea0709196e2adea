"""Signatures, morphism kinds and the term language of the free bi-skew
multicategory.

A composite ``Cmp(g, i, f)`` plugs ``f`` into input slot ``i`` (0-based) of
``g``.  All nine composition shapes are handled by one boundary rule:

* the codomain of ``f`` must equal ``domain(g)[i]``;
* at slot 0, ``f`` is left-tight exactly when ``g`` is, elsewhere ``f`` is
  left-loose;
* at the last slot, ``f`` is right-tight exactly when ``g`` is, elsewhere
  ``f`` is right-loose.

The composite keeps the kind and codomain of ``g``; its domain is the domain
of ``g`` with slot ``i`` replaced by the domain of ``f``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import (
    BoundaryKindMismatch,
    IndexOutOfRange,
    LoosenOnLooseSide,
    NotAForm,
    ObjectMismatch,
    SignatureError,
    TermError,
    UnknownGenerator,
)


class Kind(enum.Enum):
    LL = (False, False)
    TL = (True, False)
    LT = (False, True)
    TT = (True, True)

    @property
    def left_tight(self) -> bool:
        return self.value[0]

    @property
    def right_tight(self) -> bool:
        return self.value[1]

    @property
    def tight(self) -> bool:
        return self.value[0] or self.value[1]

    @classmethod
    def of(cls, left_tight: bool, right_tight: bool) -> "Kind":
        return _KINDS[(bool(left_tight), bool(right_tight))]

    def loosened(self, side: "Side") -> "Kind":
        if side is Side.LEFT:
            return Kind.of(False, self.right_tight)
        return Kind.of(self.left_tight, False)

    def is_tight_on(self, side: "Side") -> bool:
        return self.left_tight if side is Side.LEFT else self.right_tight

    def __repr__(self):
        return f"Kind.{self.name}"


_KINDS = {k.value: k for k in Kind}


class Side(enum.Enum):
    LEFT = "L"
    RIGHT = "R"

    def __repr__(self):
        return f"Side.{self.name}"


class Form(enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"
    G = "G"
    H = "H"
    I = "I"  # noqa: E741

    def __repr__(self):
        return f"Form.{self.name}"


@dataclass(frozen=True)
class Arrow:
    kind: Kind
    domain: tuple
    codomain: object

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        if self.kind.tight and not self.domain:
            raise TermError(f"tight kind {self.kind.name} needs a nonempty domain")

    @property
    def arity(self) -> int:
        return len(self.domain)

    def __str__(self):
        return f"{self.kind.name}[{', '.join(map(str, self.domain))}] -> {self.codomain}"


@dataclass(frozen=True)
class GeneratorDecl:
    name: str
    arrow: Arrow


@dataclass(frozen=True, eq=False)
class Signature:
    objects: tuple
    generators: tuple  # of GeneratorDecl
    _by_name: dict = field(init=False, repr=False)
    _infer_cache: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "generators", tuple(self.generators))
        by_name = {}
        declared = set(self.objects)
        if len(declared) != len(self.objects):
            raise SignatureError("duplicate object names")
        for g in self.generators:
            if g.name in by_name:
                raise SignatureError(f"duplicate generator name {g.name!r}")
            for obj in (*g.arrow.domain, g.arrow.codomain):
                if obj not in declared:
                    raise SignatureError(f"generator {g.name!r} refers to undeclared object {obj!r}")
            by_name[g.name] = g.arrow
        object.__setattr__(self, "_by_name", by_name)
        object.__setattr__(self, "_infer_cache", {})

    @classmethod
    def build(cls, objects: Iterable, generators: dict) -> "Signature":
        """``generators`` maps name -> (kind, domain, codomain)."""
        decls = []
        for name, (kind, domain, codomain) in generators.items():
            if isinstance(kind, str):
                kind = Kind[kind]
            decls.append(GeneratorDecl(name, Arrow(kind, tuple(domain), codomain)))
        return cls(tuple(objects), tuple(decls))

    def arrow_of(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownGenerator(name) from None

    def __contains__(self, name):
        return name in self._by_name

    @property
    def names(self) -> tuple:
        return tuple(g.name for g in self.generators)

    def __eq__(self, other):
        return isinstance(other, Signature) and (self.objects, self.generators) == (
            other.objects,
            other.generators,
        )

    def __hash__(self):
        return hash((self.objects, self.generators))


# ---------------------------------------------------------------------------
# terms


class _TermBase:
    """Structural equality with a hash and size computed once."""

    __slots__ = ()

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self) or other._hash != self._hash:
            return False
        return self._key() == other._key()

    def __ne__(self, other):
        return not self.__eq__(other)

    def _seal(self, subsize):
        object.__setattr__(self, "_hash", hash((type(self).__name__,) + self._key()))
        object.__setattr__(self, "_size", 1 + subsize)


@dataclass(frozen=True, eq=False)
class Gen(_TermBase):
    name: str

    def __post_init__(self):
        self._seal(0)

    def _key(self):
        return (self.name,)

    def __str__(self):
        return self.name


@dataclass(frozen=True, eq=False)
class Id(_TermBase):
    obj: object

    def __post_init__(self):
        self._seal(0)

    def _key(self):
        return (self.obj,)

    def __str__(self):
        return f"id({self.obj})"


@dataclass(frozen=True, eq=False)
class Loosen(_TermBase):
    side: Side
    term: "Term"

    def __post_init__(self):
        self._seal(self.term._size)

    def _key(self):
        return (self.side, self.term)

    def __str__(self):
        return f"llo{self.side.value}({self.term})"


@dataclass(frozen=True, eq=False)
class Cmp(_TermBase):
    g: "Term"
    i: int
    f: "Term"

    def __post_init__(self):
        self._seal(self.g._size + self.f._size)

    def _key(self):
        return (self.g, self.i, self.f)

    def __str__(self):
        return f"cmp({self.g}, {self.i}, {self.f})"


Term = Union[Gen, Id, Loosen, Cmp]


def size(t: Term) -> int:
    """Number of constructors."""
    return t._size


def generator_occurrences(t: Term) -> int:
    if isinstance(t, Gen):
        return 1
    if isinstance(t, Loosen):
        return generator_occurrences(t.term)
    if isinstance(t, Cmp):
        return generator_occurrences(t.g) + generator_occurrences(t.f)
    return 0


# ---------------------------------------------------------------------------
# typing


def slot_kind(g: Arrow, i: int) -> Kind:
    """The kind an argument plugged into slot ``i`` of ``g`` must have."""
    n = g.arity
    if not 0 <= i < n:
        raise IndexOutOfRange(f"slot {i} of an arity-{n} morphism")
    return Kind.of(i == 0 and g.kind.left_tight, i == n - 1 and g.kind.right_tight)


def compose_arrows(g: Arrow, i: int, f: Arrow) -> Arrow:
    expected = slot_kind(g, i)
    if f.codomain != g.domain[i]:
        raise ObjectMismatch(f"slot {i} expects {g.domain[i]!r}, argument has codomain {f.codomain!r}")
    if f.kind is not expected:
        raise BoundaryKindMismatch(
            f"slot {i} of a {g.kind.name} arity-{g.arity} morphism needs a {expected.name} argument, "
            f"got {f.kind.name}"
        )
    return Arrow(g.kind, g.domain[:i] + f.domain + g.domain[i + 1 :], g.codomain)


def loosen_arrow(side: Side, a: Arrow) -> Arrow:
    if not a.kind.is_tight_on(side):
        raise LoosenOnLooseSide(f"cannot {side.name.lower()}-loosen a {a.kind.name} morphism")
    return Arrow(a.kind.loosened(side), a.domain, a.codomain)


def identity_arrow(x) -> Arrow:
    return Arrow(Kind.TT, (x,), x)


def infer(sig: Signature, t: Term) -> Arrow:
    cache = sig._infer_cache
    hit = cache.get(t)
    if hit is not None:
        return hit
    if isinstance(t, Gen):
        a = sig.arrow_of(t.name)
    elif isinstance(t, Id):
        if t.obj not in sig.objects:
            raise ObjectMismatch(f"undeclared object {t.obj!r}")
        a = identity_arrow(t.obj)
    elif isinstance(t, Loosen):
        a = loosen_arrow(t.side, infer(sig, t.term))
    elif isinstance(t, Cmp):
        a = compose_arrows(infer(sig, t.g), t.i, infer(sig, t.f))
    else:
        raise TermError(f"not a term: {t!r}")
    cache[t] = a
    return a


def well_formed(sig: Signature, t: Term) -> bool:
    try:
        infer(sig, t)
    except TermError:
        return False
    return True


def form_of(g: Arrow, i: int, f: Arrow) -> Form:
    """Label of the composition ``g`` after ``f`` at slot ``i``."""
    try:
        compose_arrows(g, i, f)
    except TermError as exc:
        raise NotAForm(str(exc)) from exc
    n = g.arity
    first, last = i == 0, i == n - 1
    k = g.kind
    if k is Kind.LL:
        return Form.A
    if k is Kind.TL:
        return Form.E if first else Form.B
    if k is Kind.LT:
        return Form.G if last else Form.C
    if n == 1:
        return Form.I
    if first:
        return Form.F
    if last:
        return Form.H
    return Form.D


# ---------------------------------------------------------------------------
# constructors


def compose(sig: Signature, g: Term, i: int, f: Term) -> Term:
    t = Cmp(g, i, f)
    infer(sig, t)
    return t


def loosen(side: Side, t: Term, sig: Signature | None = None) -> Term:
    if sig is not None:
        infer(sig, Loosen(side, t))
    return Loosen(side, t)


def identity(x) -> Term:
    return Id(x)


def lloL(t: Term) -> Term:
    return Loosen(Side.LEFT, t)


def lloR(t: Term) -> Term:
    return Loosen(Side.RIGHT, t)


def lrlo(t: Term) -> Term:
    """Both loosenings (right first, then left)."""
    return Loosen(Side.LEFT, Loosen(Side.RIGHT, t))


def loosen_to(t: Term, have: Kind, want: Kind) -> Term:
    """Wrap ``t`` in the loosenings taking kind ``have`` to ``want``."""
    if (want.left_tight and not have.left_tight) or (want.right_tight and not have.right_tight):
        raise LoosenOnLooseSide(f"cannot tighten {have.name} to {want.name}")
    if have.right_tight and not want.right_tight:
        t = Loosen(Side.RIGHT, t)
    if have.left_tight and not want.left_tight:
        t = Loosen(Side.LEFT, t)
    return t


# ---------------------------------------------------------------------------
# concrete syntax:  id(x)  lloL(t)  lloR(t)  cmp(g, i, f)  name

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<punct>[(),]))")


def parse_term(text: str) -> Term:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise TermError(f"unexpected character {text[pos]!r} at position {pos}")
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
    tokens.append(("end", None))
    idx = 0

    def peek():
        return tokens[idx]

    def take(kind=None, value=None):
        nonlocal idx
        tok = tokens[idx]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            raise TermError(f"expected {value or kind}, found {tok[1]!r}")
        idx += 1
        return tok[1]

    def term():
        name = take("name")
        if peek() != ("punct", "("):
            return Gen(name)
        take("punct", "(")
        if name == "id":
            obj = take("name")
            take("punct", ")")
            return Id(obj)
        if name in ("lloL", "lloR"):
            inner = term()
            take("punct", ")")
            return Loosen(Side.LEFT if name == "lloL" else Side.RIGHT, inner)
        if name == "cmp":
            g = term()
            take("punct", ",")
            i = int(take("num"))
            take("punct", ",")
            f = term()
            take("punct", ")")
            return Cmp(g, i, f)
        raise TermError(f"unknown term constructor {name!r}")

    t = term()
    take("end")
    return t
