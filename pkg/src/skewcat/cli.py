"""The ``skewcat`` command.

Exit codes: 0 when everything checked holds, 1 when a law fails or two
terms are distinct (or undecided), 2 when the input cannot be read.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import io
from .cbpv import (
    Direction,
    check_calculus_laws,
    check_retseq,
    convert_form,
    fixture_interpretation,
    fixture_signature,
    parse_judgement,
    parse_term as parse_cbpv_term,
    retseq_monoid_equivalence,
    typecheck,
)
from .cbpv.forms import ShortFormModel
from .equality import AxiomMode, Verdict, normalize, oracle_equal
from .errors import DEFAULT_GUARD, CbpvTypeError, SkewcatError
from .kernel import infer, parse_term
from .model import _show, check_axioms, find_tensor, hom_counts
from .monoid import (
    biased_counterpart,
    check_unbiased,
    enumerate_monoids,
    expand_unbiased,
    monoid_category,
    unbiased_unique,
)
from .relmonad import (
    check_bimodule,
    check_relmonad,
    enumerate_relmonads,
    extend_functor,
    relmonad_candidates,
    relmonad_monoid_equivalence,
)


@dataclass
class Report:
    command: list
    status: str = "ok"  # ok | violations | error
    violations: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    result: object = None
    lines: list = field(default_factory=list)
    timing: float | None = None
    format: str = "text"

    def fail(self, violation):
        self.violations.append(violation.as_dict() if hasattr(violation, "as_dict") else violation)
        self.status = "violations"

    def as_dict(self) -> dict:
        doc = {"command": self.command, "status": self.status, "violations": self.violations,
               "counts": self.counts, "result": self.result}
        if self.timing is not None:
            doc["timing"] = self.timing
        return doc

    def render(self, fmt: str) -> str:
        if fmt == "structured":
            return json.dumps(self.as_dict(), sort_keys=True, indent=2, default=str)
        out = list(self.lines)
        for v in self.violations:
            if "lhs" in v:
                out.append(f"violation {v['law']} [{', '.join(v['witness'])}]: {v['lhs']} != {v['rhs']}")
            else:
                rest = ", ".join(f"{k}={v[k]}" for k in sorted(v) if k != "law")
                out.append(f"violation {v['law']}: {rest}")
        for k in sorted(self.counts):
            out.append(f"{k}: {self.counts[k]}")
        if self.timing is not None:
            out.append(f"elapsed: {self.timing:.3f}s")
        out.append(self.status)
        return "\n".join(out)

    @property
    def exit_code(self) -> int:
        return {"ok": 0, "violations": 1, "error": 2}[self.status]


# ---------------------------------------------------------------------------
# commands


def _mode(args) -> AxiomMode:
    return AxiomMode(args.mode)


def cmd_normalize(args, rep: Report):
    sig = io.load_signature(args.signature)
    t = parse_term(args.term)
    nf = normalize(sig, t)
    rep.result = {"normal_form": str(nf), "arrow": str(infer(sig, t))}
    rep.lines.append(str(nf))


def cmd_eq(args, rep: Report):
    sig = io.load_signature(args.signature)
    t, s = parse_term(args.left), parse_term(args.right)
    ta, sa = infer(sig, t), infer(sig, s)
    if ta != sa:
        verdict = Verdict.DISTINCT
        how = "arrows differ"
    elif args.oracle or _mode(args) is AxiomMode.STRICT:
        verdict = oracle_equal(sig, t, s, _mode(args), step_bound=args.steps)
        how = "oracle"
    else:
        verdict = Verdict.EQUAL if normalize(sig, t) == normalize(sig, s) else Verdict.DISTINCT
        how = "normal form"
    rep.result = {"verdict": verdict.value, "decided_by": how, "left": str(ta), "right": str(sa)}
    rep.lines.append(verdict.value)
    if verdict is not Verdict.EQUAL:
        rep.status = "violations"


def cmd_check_model(args, rep: Report):
    model = io.load_model(args.model, args.arity, args.guard)
    for v in check_axioms(model, _mode(args)):
        rep.fail(v)
    counts = hom_counts(model)
    rep.counts = {"morphisms": sum(counts.values()), "violations": len(rep.violations), "arity": args.arity}
    rep.lines.append(f"{model.flavour} model, arity bound {args.arity}")


def cmd_tensor(args, rep: Report):
    model = io.load_model(args.model, args.arity, args.guard)
    lookup = {str(x): x for x in model.objects()}
    objs = []
    for o in args.objects:
        if o not in lookup:
            raise io.MalformedInput(f"unknown object {o!r}")
        objs.append(lookup[o])
    found = find_tensor(model, objs)
    if found is None:
        rep.result = None
        rep.lines.append("none")
    else:
        v, p = found
        rep.result = {"object": str(v), "universal": _show(p.data)}
        rep.lines.append(f"{v} via {_show(p.data)}")


def _monoid_doc(name, mon):
    return {"id": name, "carrier": str(mon.carrier), "m": _show(mon.m.data), "e": _show(mon.e.data)}


def cmd_find_monoids(args, rep: Report):
    model = io.load_model(args.model, args.arity, args.guard)
    mc = monoid_category(model, enumerate_monoids(model))
    rep.result = [_monoid_doc(n, m) for n, m in mc.monoids.items()]
    for d in rep.result:
        rep.lines.append(f"{d['id']}: carrier {d['carrier']}, m = {d['m']}, e = {d['e']}")
    rep.counts = {"monoids": len(mc.monoids), "homomorphisms": len(mc.homs)}


def _family_doc(fam):
    return {k: {str(n): _show(m.data) for n, m in sorted(getattr(fam, k).items())} for k in ("ll", "tl", "lt", "tt")}


def cmd_expand_unbiased(args, rep: Report):
    model = io.load_model(args.model, args.arity, args.guard)
    mons = monoid_category(model).monoids
    if args.monoid not in mons:
        raise io.MalformedInput(f"no monoid {args.monoid!r}; found {sorted(mons)}")
    fam = expand_unbiased(model, mons[args.monoid], args.arity)
    for v in check_unbiased(model, fam):
        rep.fail(v)
    rep.result = _family_doc(fam)
    for k, row in rep.result.items():
        for n, m in row.items():
            rep.lines.append(f"{k}{n} = {m}")


def cmd_coherence(args, rep: Report):
    model = io.load_model(args.model, args.arity, args.guard)
    rows = []
    for name, mon in monoid_category(model).monoids.items():
        fam = expand_unbiased(model, mon, args.arity)
        bad = check_unbiased(model, fam)
        for v in bad:
            rep.fail(dict(v.as_dict(), monoid=name))
        back = biased_counterpart(fam) == mon
        unique = unbiased_unique(model, mon, args.arity)
        if not back:
            rep.fail({"law": "round-trip", "monoid": name})
        if not unique:
            rep.fail({"law": "uniqueness", "monoid": name})
        rows.append({"monoid": name, "violations": len(bad), "round_trip": back, "unique": unique})
        rep.lines.append(f"{name}: {len(bad)} violations, round trip {back}, unique {unique}")
    rep.result = rows
    rep.counts = {"monoids": len(rows), "arity": args.arity}


def _relmonad_violations(O, R):
    out = list(check_relmonad(O, R))
    _, nat = extend_functor(O, R)
    return out + list(nat)


def cmd_relmonad(args, rep: Report):
    O = io.load_bimodule(args.bimodule)
    structural = check_bimodule(O)
    if structural:
        for v in structural:
            rep.fail(v)
        return
    if args.action == "check":
        if not args.relmonad:
            raise io.MalformedInput("relmonad check needs a relative monad file")
        R = io.load_relmonad(args.relmonad, O)
        for v in _relmonad_violations(O, R):
            rep.fail(v)
    elif args.action == "enumerate":
        found = enumerate_relmonads(O, args.guard)
        rep.result = [R.to_json() for R in found]
        for R in rep.result:
            rep.lines.append(json.dumps(R, sort_keys=True))
        rep.counts = {"relative_monads": len(found)}
    else:
        if args.relmonad:
            cands = [io.load_relmonad(args.relmonad, O)]
        else:
            cands = list(relmonad_candidates(O, args.guard))
        rows = []
        passing = 0
        for R in cands:
            eq = relmonad_monoid_equivalence(O, R)
            passing += eq.relmonad_ok
            if not eq.agree:
                rep.fail({"law": "disagreement", "candidate": json.dumps(R.to_json(), sort_keys=True),
                          "relmonad_ok": eq.relmonad_ok, "monoid_ok": eq.monoid_ok})
            rows.append(eq.summary())
        if args.relmonad:
            rep.result = rows[0]
        rep.counts = {"candidates": len(cands), "relative_monads": passing, "disagreements": len(rep.violations)}


def _interpretation(args, sig, model):
    if args.interp:
        return io.load_interpretation(args.interp)
    if sig == fixture_signature():
        return fixture_interpretation(model)
    raise io.MalformedInput("no interpretation given for this signature")


def cmd_cbpv(args, rep: Report):
    if args.action == "check":
        if len(args.files) != 2:
            raise io.MalformedInput("cbpv check takes a signature and a judgement")
        sig = io.load_cbpv_signature(args.files[0])
        text = args.files[1]
        ctx, t = parse_judgement(text) if "|-" in text else ((), parse_cbpv_term(text))
        try:
            ty = typecheck(sig, ctx, t)
        except CbpvTypeError as exc:
            rep.fail({"law": "typing", "rule": exc.rule, "message": str(exc)})
            return
        rep.result = {"type": str(ty), "term": str(t)}
        rep.lines.append(str(ty))
        return
    if args.action == "laws":
        if len(args.files) != 3:
            raise io.MalformedInput("cbpv laws takes a base, a model and a signature")
        base = io.load_base(args.files[0])
        model = io.load_cbpv_model(args.files[1], base)
        if isinstance(model, ShortFormModel):
            model = convert_form(Direction.SHORT_TO_LONG, model)
        sig = io.load_cbpv_signature(args.files[2])
        for v in check_retseq(model, args.guard):
            rep.fail(v)
        if rep.violations:
            return
        viol, n = check_calculus_laws(model, _interpretation(args, sig, model), sig, args.size, limit=args.guard)
        for v in viol:
            rep.fail(v)
        rep.counts = {"instances": n, "size": args.size}
        return
    if len(args.files) != 1:
        raise io.MalformedInput(f"cbpv {args.action} takes one model file")
    model = io.load_cbpv_model(args.files[0])
    if args.action == "convert":
        if isinstance(model, ShortFormModel):
            if args.to == "short":
                out = model
            else:
                out = convert_form(Direction.SHORT_TO_LONG, model)
        else:
            out = model if args.to == "long" else convert_form(Direction.LONG_TO_SHORT, model)
        rep.result = out.to_json()
        rep.lines.append(out.dumps())
        return
    eq = retseq_monoid_equivalence(model)
    rep.result = eq.summary()
    rep.lines.append(f"short-form laws {'hold' if eq.short_ok else 'fail'}; "
                     f"monoid laws {'hold' if eq.monoid_ok else 'fail'}")
    if not eq.agree:
        rep.fail({"law": "disagreement", "short_ok": eq.short_ok, "monoid_ok": eq.monoid_ok})


# ---------------------------------------------------------------------------
# parser


def _globals(defaults: bool) -> argparse.ArgumentParser:
    """Global flags, accepted before or after the subcommand."""
    sup = {} if defaults else {"default": argparse.SUPPRESS}
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--mode", choices=("uniform", "strict"), **({"default": "uniform"} if defaults else sup))
    p.add_argument("--arity", type=int, **({"default": 4} if defaults else sup))
    p.add_argument("--guard", type=int, **({"default": DEFAULT_GUARD} if defaults else sup))
    p.add_argument("--format", choices=("text", "structured"), **({"default": "text"} if defaults else sup))
    p.add_argument("--timing", action="store_true", **({"default": False} if defaults else sup))
    return p


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="skewcat", parents=[_globals(True)],
                  description="Skew multicategories, their monoids, relative monads and CBPV models.")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)
    g = [_globals(False)]

    p = sub.add_parser("normalize", parents=g, help="normal form of a term")
    p.add_argument("signature")
    p.add_argument("term")
    p.set_defaults(run=cmd_normalize)

    p = sub.add_parser("eq", parents=g, help="decide equality of two terms")
    p.add_argument("signature")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--oracle", action="store_true", help="use the bounded rewriting closure")
    p.add_argument("--steps", type=int, default=64)
    p.set_defaults(run=cmd_eq)

    p = sub.add_parser("check-model", parents=g, help="check every axiom instance up to the arity bound")
    p.add_argument("model")
    p.set_defaults(run=cmd_check_model)

    p = sub.add_parser("tensor", parents=g, help="search for a tensor of a list of objects")
    p.add_argument("model")
    p.add_argument("objects", nargs="+")
    p.set_defaults(run=cmd_tensor)

    p = sub.add_parser("find-monoids", parents=g)
    p.add_argument("model")
    p.set_defaults(run=cmd_find_monoids)

    p = sub.add_parser("expand-unbiased", parents=g)
    p.add_argument("model")
    p.add_argument("--monoid", required=True)
    p.set_defaults(run=cmd_expand_unbiased)

    p = sub.add_parser("coherence", parents=g)
    p.add_argument("model")
    p.set_defaults(run=cmd_coherence)

    p = sub.add_parser("relmonad", parents=g)
    p.add_argument("action", choices=("check", "enumerate", "equivalence"))
    p.add_argument("bimodule")
    p.add_argument("relmonad", nargs="?")
    p.set_defaults(run=cmd_relmonad)

    p = sub.add_parser("cbpv", parents=g)
    p.add_argument("action", choices=("check", "laws", "convert", "equivalence"))
    p.add_argument("files", nargs="+")
    p.add_argument("--size", type=int, default=7)
    p.add_argument("--to", choices=("short", "long"), default="short")
    p.add_argument("--interp")
    p.set_defaults(run=cmd_cbpv)
    return top


def run(argv) -> tuple[int, Report]:
    argv = list(argv)
    rep = Report(command=argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        rep.status = "error"
        rep.result = {"error": str(exc)}
        rep.lines.append(f"usage error: {exc}")
        return 2, rep
    if getattr(args, "run", None) is None:
        rep.status = "error"
        rep.result = {"error": "no subcommand"}
        rep.lines.append(parser.format_usage().strip())
        return 2, rep
    rep.format = args.format
    start = time.monotonic()
    try:
        args.run(args, rep)
    except (SkewcatError, ValueError, KeyError, json.JSONDecodeError) as exc:
        rep.status = "error"
        rep.violations = []
        rep.result = {"error": f"{type(exc).__name__}: {exc}"}
        rep.lines = [f"error: {type(exc).__name__}: {exc}"]
    if args.timing:
        rep.timing = round(time.monotonic() - start, 3)
    return rep.exit_code, rep


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, rep = run(argv)
    print(rep.render(rep.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
