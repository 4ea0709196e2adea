"""Loading the JSON documents accepted on the command line."""

from __future__ import annotations

import json
from pathlib import Path

from . import category as cat
from .cbpv import (
    CartesianBase,
    CbpvSignature,
    Interpretation,
    boolean_lattice_base,
    builtin_models,
    parse_signature,
)
from .cbpv import model_from_json as cbpv_model
from .category import FiniteCategory
from .errors import SignatureError, SkewcatError
from .kernel import Kind, Signature
from .model import (
    LeftSkewLift,
    Matrix,
    SeqModel,
    all_matrices,
    from_span,
    lift_to_biskew,
    setmat_plain,
    terminal_model,
)
from .relmonad import BimoduleData, RelMonadData


class MalformedInput(SkewcatError):
    pass


FIXTURE_CATEGORIES = {
    "1": cat.terminal_category,
    "2": cat.arrow_category,
    "Z2": cat.z2_category,
    "Par": cat.parallel_pair,
    "3": cat.chain3,
    "diamond": cat.diamond,
}


def read_json(path) -> object:
    """Parse a file; a file holding a bare word is read as that string."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        word = text.strip()
        if word and word.isidentifier():
            return word
        raise MalformedInput(f"{path}: {exc}") from None


def _need(doc, key, where):
    if not isinstance(doc, dict) or key not in doc:
        raise MalformedInput(f"{where}: missing field {key!r}")
    return doc[key]


def signature_from_json(doc) -> Signature:
    objects = _need(doc, "objects", "signature")
    gens = _need(doc, "generators", "signature")
    if isinstance(gens, dict):
        gens = [dict(v, name=k) for k, v in gens.items()]
    table = {}
    for g in gens:
        name = _need(g, "name", "generator")
        if name in table:
            raise SignatureError(f"duplicate generator name {name!r}")
        kind = _need(g, "kind", name)
        if kind not in Kind.__members__:
            raise SignatureError(f"{name}: unknown kind {kind!r}")
        table[name] = (kind, tuple(_need(g, "domain", name)), _need(g, "codomain", name))
    return Signature.build(objects, table)


def load_signature(path) -> Signature:
    return signature_from_json(read_json(path))


def category_from_json(doc) -> FiniteCategory:
    if isinstance(doc, str):
        doc = {"fixture": doc}
    if "fixture" in doc:
        name = doc["fixture"]
        if name not in FIXTURE_CATEGORIES:
            raise MalformedInput(f"unknown fixture category {name!r}")
        return FIXTURE_CATEGORIES[name]()
    for key in ("objects", "morphisms", "identities", "composition"):
        _need(doc, key, "category")
    return FiniteCategory.from_json(doc)


def _matrix(doc, E) -> Matrix:
    entries = {}
    for key, vals in _need(doc, "entries", "matrix").items():
        parts = [p.strip() for p in key.split(",")]
        if len(parts) != 2:
            raise MalformedInput(f"matrix entry key {key!r} is not 'row,col'")
        entries[tuple(parts)] = tuple(vals)
    return Matrix.of(_need(doc, "name", "matrix"), entries)


def _stage(model, lift):
    if lift in (None, "biskew"):
        return lift_to_biskew(model)
    if lift == "none":
        return model
    if lift == "leftskew":
        if model.flavour != "plain":
            raise MalformedInput("leftskew lift needs a plain model")
        return LeftSkewLift(model)
    raise MalformedInput(f"unknown lift {lift!r}")


def model_from_json(doc, arity_bound: int = 4, guard_limit=None):
    """Build a finite model.

    Recognised shapes: the word ``terminal``; a category (or ``{"fixture":
    name}``), read as Seq; ``{"E", "universe", "matrices"?}`` for SetMat;
    ``{"A", "B", "E", "f", "g", "matrices"}`` for spans.  An optional
    ``"lift"`` of ``none``/``leftskew``/``biskew`` (default) selects the
    flavour for plain builders.
    """
    kw = {} if guard_limit is None else {"guard_limit": guard_limit}
    if doc == "terminal" or (isinstance(doc, dict) and doc.get("builder") == "terminal"):
        return terminal_model(arity_bound)
    if not isinstance(doc, dict) and not isinstance(doc, str):
        raise MalformedInput("a model document must be an object")
    lift = doc.get("lift") if isinstance(doc, dict) else None
    if isinstance(doc, str) or "fixture" in doc or "morphisms" in doc:
        c = category_from_json(doc)
        return _stage(SeqModel(c, arity_bound, **kw), lift)
    if "A" in doc:
        A, B, E = (tuple(_need(doc, k, "span")) for k in ("A", "B", "E"))
        f, g = dict(_need(doc, "f", "span")), dict(_need(doc, "g", "span"))
        if set(f) != set(E) or set(g) != set(E) or not set(f.values()) <= set(A) or not set(g.values()) <= set(B):
            raise MalformedInput("span legs must be total maps E -> A and E -> B")
        if "matrices" in doc:
            mats = [_matrix(m, E) for m in doc["matrices"]]
        else:
            mats = all_matrices(A, B, tuple(_need(doc, "universe", "span")))
        return from_span(A, B, E, f, g, mats, arity_bound=arity_bound, **kw)
    if "E" in doc:
        E = tuple(doc["E"])
        if not E:
            raise MalformedInput("E must be nonempty")
        if "matrices" in doc:
            mats = [_matrix(m, E) for m in doc["matrices"]]
        else:
            mats = all_matrices(E, E, tuple(_need(doc, "universe", "setmat")))
        return _stage(setmat_plain(E, mats, arity_bound, **kw), lift)
    raise MalformedInput("unrecognised model document")


def load_model(path, arity_bound: int = 4, guard_limit=None):
    return model_from_json(read_json(path), arity_bound, guard_limit)


def load_bimodule(path):
    doc = read_json(path)
    for side in ("C", "D"):
        ref = _need(doc, side, "bimodule")
        if isinstance(ref, str) and ref not in FIXTURE_CATEGORIES:
            ref = read_json(Path(path).parent / ref)
        doc[side] = category_from_json(ref).to_json()
    for short, full in (("left", "left_action"), ("right", "right_action")):
        if full not in doc:
            doc[full] = doc.pop(short, {})
    return BimoduleData.from_json(doc)


def load_relmonad(path, O):
    return RelMonadData.from_json(read_json(path), O)


def load_cbpv_signature(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        return parse_signature(text)
    return CbpvSignature.from_json(doc)


def load_base(path):
    doc = read_json(path)
    if doc == "boolean":
        return boolean_lattice_base()
    return CartesianBase.from_json(doc)


def load_cbpv_model(path, base=None):
    """A RetSeq model file.  ``identity`` and ``exception`` name the built-in
    models over ``base`` (default: the Boolean lattice)."""
    doc = read_json(path)
    if isinstance(doc, str):
        models = builtin_models(base or boolean_lattice_base())
        doc = doc if doc.endswith("_model") else f"{doc}_model"
        if doc not in models:
            raise MalformedInput(f"unknown built-in model {doc!r}")
        return models[doc]
    if "base" not in doc:
        if base is None:
            raise MalformedInput("model has no base; pass one")
        doc = dict(doc, base=base.to_json())
    return cbpv_model(doc)


def load_interpretation(path):
    return Interpretation.from_json(read_json(path))
