"""Surface syntax of the F fragment: types, terms, parser, typechecker,
substitution and bounded term enumeration."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from ..errors import CbpvSyntaxError, CbpvTypeError, SignatureError

# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class VType:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class FType:
    arg: VType

    def __str__(self):
        return f"F {self.arg}"


@dataclass(frozen=True)
class CBase:
    name: str

    def __str__(self):
        return self.name


@dataclass
class CbpvSignature:
    value_types: tuple
    computation_types: tuple
    value_constructors: dict = field(default_factory=dict)  # name -> (args, VType)
    computation_constructors: dict = field(default_factory=dict)  # name -> (args, FType | CBase)

    def __post_init__(self):
        vt, ct = set(self.value_types), set(self.computation_types)
        if vt & ct:
            raise SignatureError(f"type names used twice: {sorted(vt & ct)}")
        for table in (self.value_constructors, self.computation_constructors):
            for name, (args, res) in table.items():
                for a in args:
                    if a.name not in vt:
                        raise SignatureError(f"{name}: undeclared value type {a}")
                self.check_type(res, name)
        clash = set(self.value_constructors) & set(self.computation_constructors)
        if clash:
            raise SignatureError(f"constructor declared twice: {sorted(clash)}")

    def check_type(self, t, where="type"):
        if isinstance(t, VType):
            ok = t.name in self.value_types
        elif isinstance(t, FType):
            ok = t.arg.name in self.value_types
        else:
            ok = t.name in self.computation_types
        if not ok:
            raise SignatureError(f"{where}: undeclared type {t}")

    def all_computation_types(self) -> list:
        return [FType(VType(a)) for a in self.value_types] + [CBase(b) for b in self.computation_types]

    def to_json(self) -> dict:
        return {
            "value_types": list(self.value_types),
            "computation_types": list(self.computation_types),
            "value_constructors": {n: [[str(a) for a in args], str(r)] for n, (args, r) in self.value_constructors.items()},
            "computation_constructors": {n: [[str(a) for a in args], str(r)] for n, (args, r) in self.computation_constructors.items()},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CbpvSignature":
        vts = tuple(doc.get("value_types", ()))
        cts = tuple(doc.get("computation_types", ()))

        def vt(s):
            return VType(s.strip())

        def ct(s):
            s = s.strip()
            if s.startswith("F "):
                return FType(VType(s[2:].strip()))
            return CBase(s)

        vc = {n: (tuple(vt(a) for a in args), vt(r)) for n, (args, r) in doc.get("value_constructors", {}).items()}
        cc = {n: (tuple(vt(a) for a in args), ct(r)) for n, (args, r) in doc.get("computation_constructors", {}).items()}
        return cls(vts, cts, vc, cc)


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class VCon:
    name: str
    args: tuple = ()

    def __str__(self):
        return f"{self.name}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Return:
    value: object

    def __str__(self):
        return f"return {self.value}"


@dataclass(frozen=True)
class To:
    first: object
    var: str
    body: object

    def __str__(self):
        left = f"({self.first})" if isinstance(self.first, To) else str(self.first)
        return f"{left} to {self.var}. {self.body}"


@dataclass(frozen=True)
class CCon:
    name: str
    args: tuple = ()

    def __str__(self):
        return f"{self.name}({', '.join(map(str, self.args))})"


def term_size(t) -> int:
    if isinstance(t, Var):
        return 1
    if isinstance(t, (VCon, CCon)):
        return 1 + sum(term_size(a) for a in t.args)
    if isinstance(t, Return):
        return 1 + term_size(t.value)
    return 1 + term_size(t.first) + term_size(t.body)


def free_vars(t) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, (VCon, CCon)):
        return frozenset().union(*(free_vars(a) for a in t.args)) if t.args else frozenset()
    if isinstance(t, Return):
        return free_vars(t.value)
    return free_vars(t.first) | (free_vars(t.body) - {t.var})


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>\|-|->|[(),.:;])|(?P<bad>\S))")
KEYWORDS = {"return", "to"}


def _tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group("bad") is not None:
            raise CbpvSyntaxError(f"unexpected character {m.group('bad')!r}", m.start("bad"))
        kind = "id" if m.group("id") is not None else "sym"
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        kind, v, pos = self.next()
        if v != value or kind == "eof":
            raise CbpvSyntaxError(f"expected {value!r}, found {v or 'end of input'!r}", pos)

    def ident(self, what="identifier"):
        kind, v, pos = self.next()
        if kind != "id" or v in KEYWORDS:
            raise CbpvSyntaxError(f"expected {what}, found {v or 'end of input'!r}", pos)
        return v

    def at_end(self):
        return self.peek()[0] == "eof"

    # computations: primary ('to' x '.' comp)?
    def comp(self):
        first = self.primary()
        if self.peek()[1] == "to" and self.peek()[0] == "id":
            self.next()
            x = self.ident("bound variable")
            self.expect(".")
            return To(first, x, self.comp())
        return first

    def primary(self):
        kind, v, pos = self.peek()
        if v == "(" and kind == "sym":
            self.next()
            inner = self.comp()
            self.expect(")")
            return inner
        if kind == "id" and v == "return":
            self.next()
            return Return(self.value())
        if kind == "id" and v not in KEYWORDS:
            self.next()
            if self.peek()[1] == "(":
                return CCon(v, self.args())
            return CCon(v, ())
        raise CbpvSyntaxError(f"expected a computation, found {v or 'end of input'!r}", pos)

    def args(self):
        self.expect("(")
        out = []
        if self.peek()[1] != ")":
            out.append(self.value())
            while self.peek()[1] == ",":
                self.next()
                out.append(self.value())
        self.expect(")")
        return tuple(out)

    def value(self):
        name = self.ident("value")
        if self.peek()[1] == "(":
            return VCon(name, self.args())
        return Var(name)

    def vtype(self):
        return VType(self.ident("value type"))

    def ctype(self):
        name = self.ident("computation type")
        if name == "F" and self.peek()[0] == "id":
            return FType(self.vtype())
        return CBase(name)

    def context(self):
        ctx = []
        if self.peek()[1] == "|-":
            return ctx
        while True:
            x = self.ident("variable")
            self.expect(":")
            ctx.append((x, self.vtype()))
            if self.peek()[1] != ",":
                return ctx
            self.next()


def parse_term(text: str):
    p = _Parser(text)
    t = p.comp()
    if not p.at_end():
        kind, v, pos = p.peek()
        raise CbpvSyntaxError(f"unexpected {v!r} after term", pos)
    return t


def parse_value(text: str):
    p = _Parser(text)
    v = p.value()
    if not p.at_end():
        raise CbpvSyntaxError(f"unexpected {p.peek()[1]!r} after value", p.peek()[2])
    return v


def parse_judgement(text: str):
    """``x:A, y:B |- M`` to (context, term)."""
    p = _Parser(text)
    ctx = p.context()
    p.expect("|-")
    t = p.comp()
    if not p.at_end():
        raise CbpvSyntaxError(f"unexpected {p.peek()[1]!r} after term", p.peek()[2])
    return tuple(ctx), t


def parse_signature(text: str) -> CbpvSignature:
    """Line format::

        value A B
        computation K
        f : A, A -> B
        g : A -> F B
        c : -> A
    """
    vts, cts, decls = [], [], []
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        words = body.split()
        if words and words[0] == "value":
            vts.extend(words[1:])
        elif words and words[0] == "computation":
            cts.extend(words[1:])
        elif words:
            decls.append((body, offset))
        offset += len(line)
    vc, cc = {}, {}
    for body, base in decls:
        p = _Parser(body)
        try:
            name = p.ident("constructor name")
            p.expect(":")
            args = []
            if p.peek()[1] != "->":
                args.append(p.vtype())
                while p.peek()[1] == ",":
                    p.next()
                    args.append(p.vtype())
            p.expect("->")
            rname = p.peek()[1]
            res = p.ctype()
        except CbpvSyntaxError as e:
            raise CbpvSyntaxError(str(e).rsplit(" at position", 1)[0], base + e.position) from None
        if not p.at_end():
            raise CbpvSyntaxError("trailing input in declaration", base + p.peek()[2])
        if isinstance(res, CBase) and res.name in vts:
            vc[name] = (tuple(args), VType(rname))
        else:
            cc[name] = (tuple(args), res)
    return CbpvSignature(tuple(vts), tuple(cts), vc, cc)


def parse(text: str):
    """A judgement if the text contains ``|-``, otherwise a signature."""
    if "|-" in text:
        return parse_judgement(text)
    return parse_signature(text)


def format_context(ctx) -> str:
    return ", ".join(f"{x}:{a}" for x, a in ctx)


# ---------------------------------------------------------------------------
# typechecker: one function per rule


def _lookup(ctx, x):
    for name, a in reversed(ctx):
        if name == x:
            return a
    return None


def type_of_value(sig: CbpvSignature, ctx, v) -> VType:
    if isinstance(v, Var):
        a = _lookup(ctx, v.name)
        if a is None:
            raise CbpvTypeError("var", f"{v.name} is not declared in the context")
        return a
    if isinstance(v, VCon):
        if v.name not in sig.value_constructors:
            raise CbpvTypeError("value-constructor", f"unknown value constructor {v.name}")
        params, res = sig.value_constructors[v.name]
        _check_args(sig, ctx, v, params, "value-constructor")
        return res
    raise CbpvTypeError("var", f"{v} is not a value")


def _check_args(sig, ctx, t, params, rule):
    if len(params) != len(t.args):
        raise CbpvTypeError(rule, f"{t.name} expects {len(params)} arguments, got {len(t.args)}")
    for k, (want, arg) in enumerate(zip(params, t.args)):
        got = type_of_value(sig, ctx, arg)
        if got != want:
            raise CbpvTypeError(rule, f"argument {k} of {t.name} has type {got}, expected {want}")


def typecheck(sig: CbpvSignature, ctx, t):
    """Type of ``t`` in ``ctx``; values get value types."""
    ctx = tuple(ctx)
    for x, a in ctx:
        if a.name not in sig.value_types:
            raise CbpvTypeError("var", f"context declares {x} with undeclared type {a}")
    if isinstance(t, (Var, VCon)):
        return type_of_value(sig, ctx, t)
    if isinstance(t, Return):
        if not isinstance(t.value, (Var, VCon)):
            raise CbpvTypeError("return", "return needs a value")
        return FType(type_of_value(sig, ctx, t.value))
    if isinstance(t, To):
        first = typecheck(sig, ctx, t.first)
        if not isinstance(first, FType):
            raise CbpvTypeError("to", f"the sequenced computation has type {first}, not an F type")
        return typecheck(sig, ctx + ((t.var, first.arg),), t.body)
    if isinstance(t, CCon):
        if t.name not in sig.computation_constructors:
            raise CbpvTypeError("computation-constructor", f"unknown computation constructor {t.name}")
        params, res = sig.computation_constructors[t.name]
        _check_args(sig, ctx, t, params, "computation-constructor")
        return res
    raise CbpvTypeError("to", f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# substitution


def _fresh(base: str, avoid) -> str:
    for k in itertools.count(1):
        cand = f"{base}{k}"
        if cand not in avoid:
            return cand


def substitute(k: dict, t, avoid=frozenset()):
    """Simultaneous capture-avoiding substitution; ``k`` maps variable names
    to values, unmapped variables are left alone."""
    if isinstance(t, Var):
        return k.get(t.name, t)
    if isinstance(t, VCon):
        return VCon(t.name, tuple(substitute(k, a, avoid) for a in t.args))
    if isinstance(t, CCon):
        return CCon(t.name, tuple(substitute(k, a, avoid) for a in t.args))
    if isinstance(t, Return):
        return Return(substitute(k, t.value, avoid))
    first = substitute(k, t.first, avoid)
    inner = {x: v for x, v in k.items() if x != t.var}
    incoming = set(avoid)
    for x, v in inner.items():
        if x in free_vars(t.body):
            incoming |= free_vars(v)
    x = t.var
    if x in incoming:
        x = _fresh(t.var, incoming | free_vars(t.body) | set(inner))
        inner[t.var] = Var(x)
    return To(first, x, substitute(inner, t.body, avoid))


# ---------------------------------------------------------------------------
# enumeration


class TermEnumerator:
    """Well-typed terms of exact size, memoized by (context, type, size).
    Binders are named ``x<depth>`` so they never clash with context names
    that do not start with ``x``."""

    def __init__(self, sig: CbpvSignature):
        self.sig = sig
        self._v = {}
        self._c = {}

    def values(self, ctx, a: VType, size: int) -> list:
        key = (ctx, a, size)
        if key in self._v:
            return self._v[key]
        out = []
        if size == 1:
            seen = set()
            for x, b in reversed(ctx):
                if x not in seen and b == a:
                    out.append(Var(x))
                seen.add(x)
        for name, (params, res) in self.sig.value_constructors.items():
            if res == a:
                for args in self._arg_tuples(ctx, params, size - 1):
                    out.append(VCon(name, args))
        self._v[key] = out
        return out

    def _arg_tuples(self, ctx, params, size):
        if not params:
            if size == 0:
                yield ()
            return
        if size < len(params):
            return
        for s in range(1, size - len(params) + 2):
            for v in self.values(ctx, params[0], s):
                for rest in self._arg_tuples(ctx, params[1:], size - s):
                    yield (v,) + rest

    def computations(self, ctx, b, size: int) -> list:
        key = (ctx, b, size)
        if key in self._c:
            return self._c[key]
        out = []
        if isinstance(b, FType) and size >= 2:
            out.extend(Return(v) for v in self.values(ctx, b.arg, size - 1))
        for name, (params, res) in self.sig.computation_constructors.items():
            if res == b:
                out.extend(CCon(name, args) for args in self._arg_tuples(ctx, params, size - 1))
        x = f"x{len(ctx)}"
        for s1 in range(1, size - 1):
            for a in self.sig.value_types:
                fa = FType(VType(a))
                firsts = self.computations(ctx, fa, s1)
                if not firsts:
                    continue
                bodies = self.computations(ctx + ((x, VType(a)),), b, size - 1 - s1)
                out.extend(To(m, x, n) for m in firsts for n in bodies)
        self._c[key] = out
        return out
