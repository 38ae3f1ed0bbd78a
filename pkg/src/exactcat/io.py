"""JSON instance documents: parsing, resolution by name, and encoding.

A document looks like::

    {"schema_version": "exactcat/1",
     "backend": {"name": "vect-p1", "field": 7},
     "curve": [[[1, 0], [0, 1]]],                 # vect-nodal only, optional
     "payload": {"objects": {...}, "morphisms": {...},
                 "complexes": {...}, "chain_maps": {...}},
     "request": {"op": "check-acyclic", "args": {"complex": "T"}}}

Anywhere a payload element is expected, either its name (a string) or an
inline definition (an object) may be given.  GF(p) scalars are integers
in ``[0, p)``; rationals are ``"num/den"`` strings.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional

from .bundles import NodalBundle, NodalCurve
from .categories import DualMod, FinVect, VectNodal, VectP1
from .categories.base import Backend, Morphism, Obj
from .complexes import ChainMap, Complex
from .errors import ExactCatError
from .linalg import Field, Matrix

SCHEMA_VERSION = "exactcat/1"
BACKENDS = ("finvect", "dualmod", "vect-p1", "vect-nodal")
SECTIONS = ("objects", "morphisms", "complexes", "chain_maps")
TOP_LEVEL = ("schema_version", "backend", "curve", "payload", "request")
SCHEMA_PATH = os.path.join(os.path.dirname(__file__), "schema", "instance.schema.json")


class InstanceError(ExactCatError, ValueError):
    """Malformed input; ``element`` names the offending part of the document."""

    def __init__(self, message, element: str = ""):
        super().__init__(f"{element}: {message}" if element else message)
        self.element = element


# -- scalars and fields ------------------------------------------------------------

def parse_field(entry, where="backend.field") -> Field:
    if entry == "rational":
        return Field(0)
    if isinstance(entry, dict) and "q" in entry:
        entry = entry["q"]
    if isinstance(entry, bool) or not isinstance(entry, int):
        raise InstanceError(f"field must be a prime q or \"rational\", got {entry!r}", where)
    try:
        return Field(entry)
    except ValueError as e:
        raise InstanceError(str(e), where) from None


def field_json(F: Field):
    return F.p if F.p else "rational"


def parse_scalar(F: Field, v, where):
    if isinstance(v, bool):
        raise InstanceError(f"bad scalar {v!r}", where)
    if isinstance(v, int):
        if F.p and not 0 <= v < F.p:
            raise InstanceError(f"scalar {v} outside [0, {F.p})", where)
        return F(v)
    if isinstance(v, str) and not F.p:
        try:
            return F(Fraction(v))
        except (ValueError, ZeroDivisionError):
            pass
    raise InstanceError(f"bad scalar {v!r} for {F!r}", where)


def scalar_json(F: Field, v):
    return F.to_json(v)


def _matrix(F, rows, where, shape=None) -> Matrix:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise InstanceError("matrix must be a list of rows", where)
    n = len(rows)
    m = len(rows[0]) if rows else (shape[1] if shape else 0)
    if any(len(r) != m for r in rows):
        raise InstanceError("ragged matrix", where)
    if shape is not None and (n, m) != tuple(shape) and not (n == 0 and shape[0] == 0):
        raise InstanceError(f"expected shape {tuple(shape)}, got {(n, m)}", where)
    data = [[parse_scalar(F, v, f"{where}[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(rows)]
    return Matrix.raw(F, data, n, m if n else (shape[1] if shape else 0))


def matrix_json(F, m: Matrix):
    return [[F.to_json(v) for v in row] for row in m.tolist()]


# -- documents ---------------------------------------------------------------------

def _require(doc, key, kind, where):
    if key not in doc:
        raise InstanceError(f"missing {key!r}", where)
    if not isinstance(doc[key], kind):
        raise InstanceError(f"{key!r} has the wrong type", where)
    return doc[key]


@dataclass
class InstanceDocument:
    backend: Backend
    payload: Dict[str, Dict[str, Any]]
    request: Dict[str, Any]
    raw: Dict[str, Any] = field(default_factory=dict)
    _cache: Dict[tuple, Any] = field(default_factory=dict, repr=False)

    @property
    def field(self) -> Field:
        return self.backend.field

    @property
    def op(self) -> Optional[str]:
        return self.request.get("op")

    @property
    def args(self) -> Dict[str, Any]:
        return self.request.get("args", {})

    # -- resolution --------------------------------------------------------------
    def _lookup(self, section, ref, where):
        if isinstance(ref, str):
            table = self.payload.get(section, {})
            if ref not in table:
                raise InstanceError(f"unknown {section[:-1].replace('_', ' ')} {ref!r}", where)
            return f"{section}.{ref}", table[ref]
        if isinstance(ref, dict):
            return where, ref
        raise InstanceError("expected a name or an inline definition", where)

    def _memo(self, section, ref, where, build):
        key = (section, ref) if isinstance(ref, str) else None
        if key and key in self._cache:
            return self._cache[key]
        loc, entry = self._lookup(section, ref, where)
        out = build(entry, loc)
        if key:
            self._cache[key] = out
        return out

    def object(self, ref, where="object") -> Obj:
        return self._memo("objects", ref, where, self._build_object)

    def morphism(self, ref, where="morphism") -> Morphism:
        return self._memo("morphisms", ref, where, self._build_morphism)

    def complex(self, ref, where="complex") -> Complex:
        return self._memo("complexes", ref, where, self._build_complex)

    def chain_map(self, ref, where="chain map") -> ChainMap:
        return self._memo("chain_maps", ref, where, self._build_chain_map)

    def _build_object(self, entry, where) -> Obj:
        B = self.backend
        if not isinstance(entry, dict):
            raise InstanceError("object definition must be an object", where)
        try:
            if isinstance(B, FinVect):
                return B.space(_require(entry, "dim", int, where))
            if isinstance(B, DualMod):
                return B.module(entry.get("free", 0), entry.get("socle", 0))
            tw = _require(entry, "twists", list, where)
            if any(isinstance(a, bool) or not isinstance(a, int) for a in tw):
                raise InstanceError("twists must be integers", where)
            if tw != sorted(tw, reverse=True):
                raise InstanceError("splitting type must be sorted descending", where)
            if isinstance(B, VectP1):
                return B.bundle(tw)
            r = len(tw)
            gl = entry.get("gluings")
            if gl is None:
                mats = tuple(Matrix.identity(B.field, r) for _ in B.curve.nodes)
            else:
                if not isinstance(gl, list) or len(gl) != B.curve.n_nodes:
                    raise InstanceError(f"need {B.curve.n_nodes} gluing matrices", where)
                mats = tuple(_matrix(B.field, g, f"{where}.gluings[{i}]", (r, r)) for i, g in enumerate(gl))
            return B.bundle(NodalBundle(B.curve, tuple(tw), mats))
        except InstanceError:
            raise
        except (ValueError, TypeError) as e:
            raise InstanceError(str(e), where) from None

    def _build_morphism(self, entry, where) -> Morphism:
        B = self.backend
        if not isinstance(entry, dict):
            raise InstanceError("morphism definition must be an object", where)
        x = self.object(_require(entry, "source", (str, dict), where), f"{where}.source")
        y = self.object(_require(entry, "target", (str, dict), where), f"{where}.target")
        rows = entry.get("matrix")
        F = B.field
        try:
            if rows is None or (entry.get("zero") is True):
                return B.zero(x, y)
            if isinstance(B, (FinVect, DualMod)):
                return B.matrix(x, y, _matrix(F, rows, f"{where}.matrix", (x.size, y.size)[::-1]))
            if not isinstance(rows, list) or len(rows) != y.size:
                raise InstanceError(f"need {y.size} rows of forms", f"{where}.matrix")
            entries = []
            for i, row in enumerate(rows):
                if not isinstance(row, list) or len(row) != x.size:
                    raise InstanceError(f"row {i} needs {x.size} forms", f"{where}.matrix")
                entries.append([[parse_scalar(F, c, f"{where}.matrix[{i}][{j}]") for c in e]
                                for j, e in enumerate(row)])
            return B.matrix(x, y, entries)
        except InstanceError:
            raise
        except (ValueError, TypeError) as e:
            raise InstanceError(str(e), where) from None

    def _build_complex(self, entry, where) -> Complex:
        if not isinstance(entry, dict):
            raise InstanceError("complex definition must be an object", where)
        lo = _require(entry, "lo", int, where)
        objs = [self.object(r, f"{where}.objects[{i}]")
                for i, r in enumerate(_require(entry, "objects", list, where))]
        diff_entries = entry.get("differentials", [None] * max(0, len(objs) - 1))
        if not isinstance(diff_entries, list) or len(diff_entries) != max(0, len(objs) - 1):
            raise InstanceError("need one differential between consecutive objects", where)
        diffs = []
        for i, r in enumerate(diff_entries):
            if r is None:
                diffs.append(self.backend.zero(objs[i], objs[i + 1]))
                continue
            d = self.morphism(r, f"{where}.differentials[{i}]")
            if d.source != objs[i] or d.target != objs[i + 1]:
                raise InstanceError("differential does not match its neighbours", f"{where}.differentials[{i}]")
            diffs.append(d)
        try:
            return Complex(self.backend, lo, objs, diffs)
        except ValueError as e:
            raise InstanceError(str(e), where) from None

    def _build_chain_map(self, entry, where) -> ChainMap:
        if not isinstance(entry, dict):
            raise InstanceError("chain map definition must be an object", where)
        X = self.complex(_require(entry, "source", (str, dict), where), f"{where}.source")
        Y = self.complex(_require(entry, "target", (str, dict), where), f"{where}.target")
        comps = {}
        for k, r in _require(entry, "components", dict, where).items():
            try:
                i = int(k)
            except ValueError:
                raise InstanceError(f"component key {k!r} is not a degree", where) from None
            m = self.morphism(r, f"{where}.components[{k}]")
            if m.source != X[i] or m.target != Y[i]:
                raise InstanceError(f"component {i} has the wrong source or target", f"{where}.components[{k}]")
            comps[i] = m
        try:
            return ChainMap(X, Y, comps)
        except ValueError as e:
            raise InstanceError(str(e), where) from None


def parse_document(doc) -> InstanceDocument:
    if not isinstance(doc, dict):
        raise InstanceError("document must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise InstanceError(f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION!r}",
                            "schema_version")
    extra = sorted(set(doc) - set(TOP_LEVEL))
    if extra:
        raise InstanceError(f"unknown top-level keys {extra}", "document")
    b = _require(doc, "backend", dict, "document")
    name = b.get("name")
    if name not in BACKENDS:
        raise InstanceError(f"backend must be one of {', '.join(BACKENDS)}", "backend.name")
    F = parse_field(b.get("field"))
    backend = _make_backend(name, F, doc.get("curve"))
    payload = doc.get("payload", {})
    if not isinstance(payload, dict):
        raise InstanceError("payload must be an object", "payload")
    for k, v in payload.items():
        if k not in SECTIONS:
            raise InstanceError(f"unknown payload section {k!r}", "payload")
        if not isinstance(v, dict):
            raise InstanceError("payload section must map names to definitions", f"payload.{k}")
    request = doc.get("request", {})
    if not isinstance(request, dict):
        raise InstanceError("request must be an object", "request")
    if "args" in request and not isinstance(request["args"], dict):
        raise InstanceError("request.args must be an object", "request.args")
    return InstanceDocument(backend, payload, request, doc)


def _make_backend(name, F, curve):
    if name == "finvect":
        return FinVect(F)
    if name == "dualmod":
        return DualMod(F)
    if name == "vect-p1":
        return VectP1(F)
    return VectNodal(F, parse_curve(F, curve) if curve is not None else None)


def parse_curve(F: Field, entry, where="curve") -> NodalCurve:
    if not isinstance(entry, list):
        raise InstanceError("curve must be a list of node pairs", where)
    nodes = []
    for i, pair in enumerate(entry):
        try:
            (a, b) = pair
            nodes.append((tuple(parse_scalar(F, c, f"{where}[{i}]") for c in a),
                          tuple(parse_scalar(F, c, f"{where}[{i}]") for c in b)))
        except (TypeError, ValueError) as e:
            if isinstance(e, InstanceError):
                raise
            raise InstanceError("node must be a pair of points [s, t]", f"{where}[{i}]") from None
    try:
        return NodalCurve(F, tuple(nodes))
    except ValueError as e:
        raise InstanceError(str(e), where) from None


def load_document(path) -> InstanceDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise InstanceError(f"cannot read {path}: {e.strerror}", str(path)) from None
    except json.JSONDecodeError as e:
        raise InstanceError(f"invalid JSON: {e}", str(path)) from None
    return parse_document(doc)


# -- encoding ----------------------------------------------------------------------

def encode_object(x: Obj) -> dict:
    B = x.backend
    if isinstance(B, FinVect):
        return {"dim": x.key}
    if isinstance(B, DualMod):
        return {"free": x.key[0], "socle": x.key[1]}
    if isinstance(B, VectP1):
        return {"twists": list(x.key)}
    if isinstance(B, VectNodal):
        return {"twists": list(x.key.upstairs),
                "gluings": [matrix_json(B.field, g) for g in x.key.gluings]}
    raise TypeError(f"cannot encode objects of {B.name}")


def encode_morphism(f: Morphism) -> dict:
    B = f.backend
    F = B.field
    out = {"source": encode_object(f.source), "target": encode_object(f.target)}
    if isinstance(B, (FinVect, DualMod)):
        out["matrix"] = matrix_json(F, f.data)
    else:
        out["matrix"] = [[[F.to_json(c) for c in e] for e in row] for row in f.data]
    return out


def encode_complex(c: Complex) -> dict:
    return {"lo": c.lo, "objects": [encode_object(x) for x in c.objs],
            "differentials": [encode_morphism(d) for d in c.diffs]}


def encode_chain_map(m: ChainMap) -> dict:
    return {"source": encode_complex(m.source), "target": encode_complex(m.target),
            "components": {str(i): encode_morphism(m[i]) for i in m.degrees if not m[i].is_zero()}}


def backend_header(B: Backend) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "backend": {"name": B.name, "field": field_json(B.field)}}
    if isinstance(B, VectNodal):
        doc["curve"] = B.curve.to_json()
    return doc


def make_document(B: Backend, op: str, args: Optional[dict] = None, **payload) -> dict:
    """Assemble a document; ``payload`` maps section names to ``{name: value}``
    where values are library objects encoded on the fly."""
    encoders = {"objects": encode_object, "morphisms": encode_morphism,
                "complexes": encode_complex, "chain_maps": encode_chain_map}
    doc = backend_header(B)
    doc["payload"] = {sec: {k: encoders[sec](v) for k, v in items.items()} for sec, items in payload.items()}
    doc["request"] = {"op": op, "args": dict(args or {})}
    return doc


def dumps(doc) -> str:
    """Canonical serialization: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
