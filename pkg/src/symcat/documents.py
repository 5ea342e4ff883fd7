"""JSON documents: loading, schema checks, canonical serialization, run reports.

Every document is an object ``{"kind": ..., "version": "1", "payload": {...}}``.
Inside a payload, a nested document (for example the group of a
representation) may be given inline, as a full document, or as a path
relative to the referring file.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import fincat, sobj, symgrp, topo
from .equinet import DenseModel, Layer
from .errors import MalformedDocument, ParseError, SchemaError, SymcatError, ValidationFailure
from .optdyn import Trajectory
from .report import LawReport, plain

VERSION = "1"
KINDS = (
    "category", "functor", "nat", "cat_action", "group", "action", "representation", "enriched_object",
    "model", "tying", "complex", "filtration", "diagram", "simplicial_object", "trajectory", "report",
)

# Human output cuts long result values at this many characters.
HUMAN_WIDTH = 400

# Non-finite floats travel as these strings.
_NONFINITE = {"Infinity": math.inf, "-Infinity": -math.inf, "NaN": math.nan}


# -- canonical JSON -----------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    s = "%.17g" % x
    if s == "-0":
        s = "0"
    return s


def _encode(v, out: list) -> None:
    v = plain(v)
    if v is None:
        out.append("null")
    elif v is True:
        out.append("true")
    elif v is False:
        out.append("false")
    elif isinstance(v, int):
        out.append(str(v))
    elif isinstance(v, float):
        out.append(_fmt_float(v))
    elif isinstance(v, str):
        out.append(json.dumps(v, ensure_ascii=False))
    elif isinstance(v, dict):
        out.append("{")
        for n, k in enumerate(sorted(v, key=str)):
            if n:
                out.append(",")
            out.append(json.dumps(str(k), ensure_ascii=False))
            out.append(":")
            _encode(v[k], out)
        out.append("}")
    elif isinstance(v, (list, tuple)):
        out.append("[")
        for n, item in enumerate(v):
            if n:
                out.append(",")
            _encode(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(v).__name__}")


def canonical_json(value) -> str:
    """Sorted keys, no whitespace, floats as ``%.17g``, non-finite floats as strings."""
    out: list[str] = []
    _encode(value, out)
    return "".join(out)


def number(x) -> float:
    """Read a float that may have been written as one of the non-finite strings."""
    if isinstance(x, str):
        if x in _NONFINITE:
            return _NONFINITE[x]
        raise SchemaError(f"expected a number, got {x!r}")
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SchemaError(f"expected a number, got {x!r}")
    return float(x)


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


# -- documents ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Document:
    kind: str
    version: str
    payload: dict
    obj: Any = None  # the parsed domain object
    path: str | None = None
    sha256: str | None = None


def _need(payload: dict, key: str, kind: str):
    if not isinstance(payload, dict):
        raise SchemaError(f"{kind}: payload must be an object")
    if key not in payload:
        raise SchemaError(f"{kind}: missing field {key!r}")
    return payload[key]


def _list(v, what: str) -> list:
    if not isinstance(v, list):
        raise SchemaError(f"{what} must be a list")
    return v


def _ids(v):
    """JSON ids are strings or ints; lists become tuples so they stay hashable."""
    if isinstance(v, list):
        return tuple(_ids(x) for x in v)
    return v


def _raise_if_failed(report: LawReport, what: str) -> None:
    if not report.passed:
        raise ValidationFailure(f"{what} failed validation", report)


def _nested(value, kind: str, base: str):
    if isinstance(value, str):
        path = value if os.path.isabs(value) else os.path.join(base, value)
        doc = load_document(path)
        if doc.kind != kind:
            raise SchemaError(f"{value!r} has kind {doc.kind!r}, expected {kind!r}")
        return doc.obj
    if isinstance(value, dict) and "kind" in value:
        doc = parse_document(value, base)
        if doc.kind != kind:
            raise SchemaError(f"nested document has kind {doc.kind!r}, expected {kind!r}")
        return doc.obj
    return PARSERS[kind](value, base)


# per-kind parsers: payload -> domain object ---------------------------------------

@dataclass(frozen=True, eq=False)
class CategoryDoc:
    category: fincat.FinCategory
    groupoid: bool = False


def _category(p, base):
    objects = [_ids(o) for o in _list(_need(p, "objects", "category"), "objects")]
    morphisms = {}
    for m in _list(_need(p, "morphisms", "category"), "morphisms"):
        if isinstance(m, dict):
            m = [m.get("id"), m.get("src"), m.get("tgt")]
        if not isinstance(m, list) or len(m) != 3:
            raise SchemaError("each morphism is [id, src, tgt]")
        mid, s, t = (_ids(x) for x in m)
        if mid in morphisms:
            raise SchemaError(f"duplicate morphism id {mid!r}")
        morphisms[mid] = (s, t)
    ids = _need(p, "identities", "category")
    if not isinstance(ids, dict):
        raise SchemaError("identities must map object -> morphism id")
    identities = {o: _ids(ids[str(o)]) for o in objects if str(o) in ids}
    comp = {}
    for e in _list(_need(p, "composition", "category"), "composition"):
        if not isinstance(e, list) or len(e) != 3:
            raise SchemaError("each composition entry is [g, f, g_after_f]")
        g, f, h = (_ids(x) for x in e)
        comp[(g, f)] = h
    c = fincat.FinCategory.build(objects, morphisms, identities, comp)
    groupoid = bool(p.get("groupoid", False))
    try:
        rep = fincat.validate_category(c, groupoid=groupoid)
    except MalformedDocument as exc:
        raise SchemaError(str(exc)) from exc
    _raise_if_failed(rep, "category")
    return CategoryDoc(c, groupoid)


def _functor_data(p, what) -> fincat.FunctorData:
    om, mm = _need(p, "obj_map", what), _need(p, "mor_map", what)
    if not isinstance(om, dict) or not isinstance(mm, dict):
        raise SchemaError(f"{what}: obj_map and mor_map must be objects")
    return fincat.FunctorData({k: _ids(v) for k, v in om.items()}, {k: _ids(v) for k, v in mm.items()})


def _rekey(F: fincat.FunctorData, src: fincat.FinCategory) -> fincat.FunctorData:
    """JSON object keys are strings; map them back onto the category's ids."""
    try:
        om = {x: F.obj_map[str(x)] for x in src.objects}
        mm = {m: F.mor_map[str(m)] for m in src.morphisms}
    except KeyError as exc:
        raise SchemaError(f"functor does not map {exc.args[0]!r}") from exc
    return fincat.FunctorData(om, mm)


@dataclass(frozen=True, eq=False)
class FunctorDoc:
    functor: fincat.FunctorData
    source: fincat.FinCategory
    target: fincat.FinCategory


def _functor(p, base):
    src = _nested(_need(p, "source", "functor"), "category", base).category
    dst = _nested(p["target"], "category", base).category if "target" in p else src
    return FunctorDoc(_rekey(_functor_data(p, "functor"), src), src, dst)


@dataclass(frozen=True, eq=False)
class NatDoc:
    nat: fincat.NatTransformData
    category: fincat.FinCategory
    source: fincat.FunctorData
    target: fincat.FunctorData


def _nat(p, base):
    c = _nested(_need(p, "category", "nat"), "category", base).category
    F = _rekey(_functor_data(_need(p, "source_functor", "nat"), "nat.source_functor"), c)
    G = _rekey(_functor_data(_need(p, "target_functor", "nat"), "nat.target_functor"), c)
    comps = _need(p, "components", "nat")
    try:
        alpha = fincat.NatTransformData({x: _ids(comps[str(x)]) for x in c.objects})
    except KeyError as exc:
        raise SchemaError(f"nat: missing component at {exc.args[0]!r}") from exc
    return NatDoc(alpha, c, F, G)


@dataclass(frozen=True, eq=False)
class CatActionDoc:
    action: fincat.GroupActionOnCat
    category: fincat.FinCategory


def _cat_action(p, base):
    c = _nested(_need(p, "category", "cat_action"), "category", base).category
    G = _nested(_need(p, "group", "cat_action"), "group", base)
    fs = _need(p, "functors", "cat_action")
    try:
        functors = tuple(_rekey(_functor_data(fs[str(n)], "cat_action.functors"), c) for n in G.names)
    except KeyError as exc:
        raise SchemaError(f"cat_action: no functor for element {exc.args[0]!r}") from exc
    act = fincat.GroupActionOnCat(G, functors)
    _raise_if_failed(fincat.validate_cat_action(act, c), "cat_action")
    return CatActionDoc(act, c)


def _group(p, base):
    if isinstance(p, dict) and "builtin" in p:
        name, _, arg = str(p["builtin"]).partition(":")
        builders = {"cyclic": symgrp.cyclic, "symmetric": symgrp.symmetric}
        if name == "z2":
            return symgrp.z2()
        if name == "trivial":
            return symgrp.trivial_group()
        if name in builders and arg.isdigit():
            return builders[name](int(arg))
        raise SchemaError(f"unknown builtin group {p['builtin']!r}")
    names = [_ids(n) for n in _list(_need(p, "elements", "group"), "elements")]
    table = _list(_need(p, "table", "group"), "table")
    index = {n: k for k, n in enumerate(names)}
    def idx(x):
        return index[x] if isinstance(x, str) else int(x)

    try:
        rows = [[idx(x) for x in _list(row, "table row")] for row in table]
        ident = idx(p["identity"]) if "identity" in p else None
        inv = [idx(x) for x in _list(p["inverse"], "inverse")] if "inverse" in p else None
        G = symgrp.FinGroup.from_table(names, rows, ident, inv)
    except KeyError as exc:
        raise SchemaError(f"group table names unknown element {exc.args[0]!r}") from exc
    except MalformedDocument as exc:
        if "identity" not in str(exc) and "inverse" not in str(exc):
            raise SchemaError(str(exc)) from exc
        # Not a group; still produce a law report with witnesses.
        ident = 0
        inv = [next((h for h in range(len(rows)) if rows[g][h] == ident), 0) for g in range(len(rows))]
        G = symgrp.FinGroup.from_table(names, rows, ident, inv)
    _raise_if_failed(symgrp.validate_group(G), "group")
    return G


def _action(p, base):
    G = _nested(_need(p, "group", "action"), "group", base)
    try:
        a = symgrp.SetAction.from_table(G, _list(_need(p, "table", "action"), "table"))
    except MalformedDocument as exc:
        raise SchemaError(str(exc)) from exc
    _raise_if_failed(symgrp.validate_action(a), "action")
    return a


def _matrix(v, what):
    try:
        a = np.array([[number(x) for x in row] for row in _list(v, what)], dtype=np.float64)
    except TypeError as exc:
        raise SchemaError(f"{what} must be a list of rows") from exc
    return a


def _representation(p, base):
    G = _nested(_need(p, "group", "representation"), "group", base)
    if "permutations" in p:
        try:
            r = symgrp.permutation_representation(symgrp.SetAction.from_table(G, p["permutations"]))
        except MalformedDocument as exc:
            raise SchemaError(str(exc)) from exc
    else:
        mats = _list(_need(p, "matrices", "representation"), "matrices")
        try:
            r = symgrp.Representation(G, np.array([_matrix(m, "matrix") for m in mats]))
        except (MalformedDocument, ValueError) as exc:
            raise SchemaError(str(exc)) from exc
    _raise_if_failed(symgrp.validate_representation(r), "representation")
    return r


def _enriched_object(p, base):
    from .enriched import EnrichedObject

    r = _nested(_need(p, "representation", "enriched_object"), "representation", base)
    return EnrichedObject(int(p.get("carrier", r.dim)), r)


def _model(p, base):
    layers = []
    for L in _list(_need(p, "layers", "model"), "layers"):
        if not isinstance(L, dict):
            raise SchemaError("each layer is an object with W, b, activation")
        try:
            layers.append(Layer(_matrix(_need(L, "W", "layer"), "W"), [number(x) for x in _need(L, "b", "layer")],
                                L.get("activation", "identity")))
        except (ValueError, SymcatError) as exc:
            raise SchemaError(str(exc)) from exc
    try:
        return DenseModel(tuple(layers))
    except SymcatError as exc:
        raise SchemaError(str(exc)) from exc


def _tying(p, base):
    orbit = np.array(_need(p, "orbit", "tying"), dtype=np.int64)
    if orbit.ndim != 2:
        raise SchemaError("tying: orbit must be a matrix of indices")
    return orbit


def _complex(p, base):
    k = topo.SimplicialComplex.from_simplices(_ids(s) for s in _list(_need(p, "simplices", "complex"), "simplices"))
    try:
        rep = topo.validate_complex(k)
    except MalformedDocument as exc:
        raise SchemaError(str(exc)) from exc
    _raise_if_failed(rep, "complex")
    return k


def _filtration(p, base):
    vals = {}
    for e in _list(_need(p, "values", "filtration"), "values"):
        if not isinstance(e, list) or len(e) != 2 or not isinstance(e[0], list):
            raise SchemaError("each filtration entry is [[vertices...], value]")
        vals[tuple(sorted(_ids(e[0])))] = number(e[1])
    f = topo.Filtration.build(vals)
    try:
        rep = topo.validate_filtration(f)
    except MalformedDocument as exc:
        raise SchemaError(str(exc)) from exc
    _raise_if_failed(rep, "filtration")
    return f


def _diagram(p, base):
    bars = []
    for e in _list(_need(p, "bars", "diagram"), "bars"):
        if not isinstance(e, list) or len(e) != 3:
            raise SchemaError("each bar is [dim, birth, death]")
        d, b, x = int(e[0]), number(e[1]), number(e[2])
        if math.isnan(b) or math.isnan(x) or b > x or math.isinf(b):
            raise SchemaError(f"bar {e!r} is not a valid (birth <= death) pair")
        bars.append((d, b, x))
    return topo.PersistenceDiagram(tuple(bars))


def _simplicial_object(p, base):
    if "nerve" in p:
        spec = p["nerve"]
        c = _nested(_need(spec, "category", "nerve"), "category", base).category
        m = sobj.nerve(c, int(spec.get("n", 2)))
    else:
        sizes = tuple(int(s) for s in _list(_need(p, "sizes", "simplicial_object"), "sizes"))
        faces = {(int(k), int(i)): tuple(int(x) for x in t) for k, i, t in _need(p, "faces", "simplicial_object")}
        degs = {(int(k), int(i)): tuple(int(x) for x in t) for k, i, t in _need(p, "degeneracies", "simplicial_object")}
        m = sobj.SimplicialObjectData(sizes, faces, degs)
    try:
        rep = sobj.validate_simplicial(m)
    except MalformedDocument as exc:
        raise SchemaError(str(exc)) from exc
    _raise_if_failed(rep, "simplicial_object")
    return m


def _trajectory(p, base):
    if "values" in p:
        return Trajectory.from_values([[number(x) for x in np.atleast_1d(v).tolist()] for v in p["values"]])
    pts = []
    for e in _list(_need(p, "points", "trajectory"), "points"):
        t, v = e
        pts.append((int(t), np.array([number(x) for x in np.atleast_1d(v).tolist()], dtype=np.float64)))
    try:
        return Trajectory(tuple(pts))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def _report(p, base):
    if not isinstance(p, dict) or "status" not in p or "findings" not in p:
        raise SchemaError("report: needs status and findings")
    return p


PARSERS: dict[str, Callable] = {
    "category": _category, "functor": _functor, "nat": _nat, "cat_action": _cat_action, "group": _group,
    "action": _action, "representation": _representation, "enriched_object": _enriched_object, "model": _model,
    "tying": _tying, "complex": _complex, "filtration": _filtration, "diagram": _diagram,
    "simplicial_object": _simplicial_object, "trajectory": _trajectory, "report": _report,
}


def parse_document(data: dict, base: str = ".", path: str | None = None, sha: str | None = None) -> Document:
    if not isinstance(data, dict):
        raise SchemaError("document must be a JSON object")
    kind = data.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"field 'kind': unknown kind {kind!r}")
    version = data.get("version")
    if version != VERSION:
        raise SchemaError(f"field 'version': expected {VERSION!r}, got {version!r}")
    payload = data.get("payload")
    if not isinstance(payload, dict):
        raise SchemaError("field 'payload': must be an object")
    try:
        obj = PARSERS[kind](payload, base)
    except (ValidationFailure, SchemaError, ParseError):
        raise
    except (KeyError, TypeError, ValueError, MalformedDocument) as exc:
        raise SchemaError(f"{kind}: {exc}") from exc
    return Document(kind, version, payload, obj, path, sha)


def load_document(path: str) -> Document:
    """Read, parse, schema-check and structurally validate one document."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: not valid UTF-8 JSON ({exc})") from exc
    return parse_document(data, os.path.dirname(os.path.abspath(path)), path, digest(raw))


def make_document(kind: str, payload: dict) -> dict:
    return {"kind": kind, "version": VERSION, "payload": payload}


def write_document(path: str, kind: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(make_document(kind, payload)) + "\n")


# -- payload writers (domain object -> payload) -------------------------------------

def category_payload(c: fincat.FinCategory, groupoid: bool = False) -> dict:
    p = {
        "objects": list(c.objects),
        "morphisms": [[m, s, t] for m, (s, t) in c.morphisms.items()],
        "identities": {str(o): i for o, i in c.identities.items()},
        "composition": [[g, f, h] for (g, f), h in c.composition.items()],
    }
    if groupoid:
        p["groupoid"] = True
    return p


def functor_map_payload(F: fincat.FunctorData) -> dict:
    return {"obj_map": {str(k): v for k, v in F.obj_map.items()}, "mor_map": {str(k): v for k, v in F.mor_map.items()}}


def group_payload(G: symgrp.FinGroup) -> dict:
    return {"elements": list(G.names), "table": [list(r) for r in G.table]}


def representation_payload(r: symgrp.Representation, group=None) -> dict:
    return {"group": group if group is not None else group_payload(r.group), "matrices": r.matrices.tolist()}


def model_payload(m: DenseModel) -> dict:
    return {"layers": [{"W": L.W.tolist(), "b": L.b.tolist(), "activation": L.activation} for L in m.layers]}


def filtration_payload(f: topo.Filtration) -> dict:
    return {"values": [[list(s), f.values[s]] for s in f.order()]}


def diagram_payload(d: topo.PersistenceDiagram) -> dict:
    return {"bars": d.to_list()}


def simplicial_payload(m: sobj.SimplicialObjectData) -> dict:
    return {
        "sizes": list(m.sizes),
        "faces": [[k, i, list(t)] for (k, i), t in sorted(m.faces.items())],
        "degeneracies": [[k, i, list(t)] for (k, i), t in sorted(m.degeneracies.items())],
    }


def trajectory_payload(t: Trajectory) -> dict:
    return {"points": [[k, v.tolist()] for k, v in t.points]}


# -- run reports ----------------------------------------------------------------------

@dataclass
class RunReport:
    subcommand: str
    seed: int
    inputs: list = field(default_factory=list)  # [{"path": ..., "sha256": ...}]
    findings: list = field(default_factory=list)  # LawReports
    results: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "fail" if any(not f.passed for f in self.findings) else "pass"

    def add_input(self, doc: Document) -> None:
        if doc.path is not None:
            self.inputs.append({"path": doc.path, "sha256": doc.sha256})

    def to_dict(self) -> dict:
        findings = sorted((f.to_dict() for f in self.findings), key=lambda d: (d["check"], canonical_json(d)))
        return {
            "subcommand": self.subcommand,
            "seed": self.seed,
            "inputs": self.inputs,
            "status": self.status,
            "findings": findings,
            "results": plain(self.results),
        }


def emit_report(r: RunReport, fmt: str = "json") -> bytes:
    """Canonical bytes for ``r``; the JSON form is itself a ``report`` document."""
    d = r.to_dict()
    if fmt == "json":
        return (canonical_json(make_document("report", d)) + "\n").encode("utf-8")
    lines = [f"{d['subcommand']}: {d['status']} (seed {d['seed']})"]
    for inp in d["inputs"]:
        lines.append(f"  input {inp['path']} sha256={inp['sha256'][:16]}")
    for f in d["findings"]:
        lines.append(f"  [{f['status']}] {f['check']}: {f['cases']} cases, {f['n_violations']} violations")
        for v in f["violations"][:10]:
            lines.append(f"      {v['law']}: {canonical_json(v['witness'])}")
    for k in sorted(d["results"]):
        text = canonical_json(d["results"][k])
        if len(text) > HUMAN_WIDTH:
            text = text[:HUMAN_WIDTH] + f"... ({len(text)} chars; use --json)"
        lines.append(f"  {k} = {text}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _revive(v):
    if isinstance(v, str) and v in _NONFINITE:
        return _NONFINITE[v]
    if isinstance(v, list):
        return [_revive(x) for x in v]
    if isinstance(v, dict):
        return {k: _revive(x) for k, x in v.items()}
    return v


def parse_report(data: bytes) -> dict:
    """Inverse of :func:`emit_report` for the JSON form (returns the report dict)."""
    doc = json.loads(data.decode("utf-8"))
    if doc.get("kind") != "report":
        raise SchemaError("not a report document")
    return _revive(doc["payload"])
