"""Command-line front end.

Exit codes: 0 success, 1 malformed input, 2 domain error (the report then
carries the serialized obstruction).  Reports are canonical JSON, so a
fixed instance and seed always give byte-identical output.
"""

from __future__ import annotations

import argparse
import copy
import json
import sys
from typing import Optional

from . import io
from .categories import VectNodal, VectP1
from .complexes import NotAcyclic, is_acyclic
from .curves import global_sections, pic_classes
from .errors import ExactCatError
from .fitting import fitting_decompose, fitting_decompose_complex, split_homotopy_idempotent
from .io import InstanceError, encode_chain_map, encode_complex, encode_morphism, encode_object
from .oracles import SUITES, run_suite
from .tstructure import construct_heart_cover, ext_dim, truncate

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN = 0, 1, 2


class DomainFailure(Exception):
    """A well-formed instance whose answer is a serialized obstruction."""

    def __init__(self, message, payload):
        super().__init__(message)
        self.payload = payload


def _pick(doc, section, arg):
    """The payload element named by ``request.args[arg]``, or the only one present."""
    ref = doc.args.get(arg)
    if ref is not None:
        return ref
    names = list(doc.payload.get(section, {}))
    if len(names) == 1:
        return names[0]
    raise InstanceError(f"name the {section[:-1]} with request.args.{arg}", "request.args")


def _int_arg(doc, name, default=None):
    v = doc.args.get(name, default)
    if v is None:
        raise InstanceError(f"missing integer argument {name!r}", "request.args")
    if isinstance(v, bool) or not isinstance(v, int):
        raise InstanceError(f"argument {name!r} must be an integer", f"request.args.{name}")
    return v


def _homotopy(h):
    return {str(i): encode_morphism(m) for i, m in sorted(h.maps.items())}


def _witness_json(w):
    return {"K": {str(i): encode_object(x) for i, x in sorted(w.K.items())},
            "alpha": {str(i): encode_morphism(m) for i, m in sorted(w.alpha.items()) if not w.K[i].is_zero},
            "beta": {str(i): encode_morphism(m) for i, m in sorted(w.beta.items()) if not w.K[i + 1].is_zero}}


def _obstruction_json(o):
    return {"degree": o.degree, "reason": o.reason, "kind": o.kind}


# -- commands ----------------------------------------------------------------------------

def cmd_check_acyclic(doc):
    c = doc.complex(_pick(doc, "complexes", "complex"), "request.args.complex")
    w = is_acyclic(c)
    if not w:
        raise DomainFailure(f"not acyclic: {w.reason}", {"acyclic": False, "obstruction": _obstruction_json(w)})
    return {"acyclic": True, "witness": _witness_json(w), "verified": w.verify()}


def _require_acyclic(c):
    w = is_acyclic(c)
    if not w:
        raise DomainFailure(f"NotAcyclic: {w.reason}", {"error": "NotAcyclic", "obstruction": _obstruction_json(w)})


def cmd_truncate(doc):
    c = doc.complex(_pick(doc, "complexes", "complex"), "request.args.complex")
    n = _int_arg(doc, "n")
    _require_acyclic(c)
    t = truncate(c, n)
    return {"n": n, "A": encode_complex(t.A), "B": encode_complex(t.B),
            "u": encode_chain_map(t.u), "v": encode_chain_map(t.v), "w": encode_chain_map(t.w),
            "homotopy": _homotopy(t.homotopy), "certified": t.certified()}


def cmd_heart_cover(doc):
    c = doc.complex(_pick(doc, "complexes", "complex"), "request.args.complex")
    _require_acyclic(c)
    cov = construct_heart_cover(c)
    if not cov:
        raise DomainFailure(f"NoCover: {cov.reason}", {
            "error": "NoCover", "reason": cov.reason, "cover": encode_morphism(cov.cover),
            "unknown_dims": cov.unknown_dims, "equation_dims": cov.equation_dims,
            "rank": cov.rank, "augmented_rank": cov.augmented_rank, "lift_exists": cov.lift_exists})
    return {"a": encode_complex(cov.a.complex), "phi": encode_chain_map(cov.phi),
            "b": encode_complex(cov.b), "contraction": _homotopy(cov.contraction)}


def cmd_fitting(doc):
    ref = doc.args.get("map")
    if ref is None:
        ref = _pick(doc, "chain_maps" if doc.payload.get("chain_maps") else "morphisms", "map")
    if isinstance(ref, str) and ref in doc.payload.get("chain_maps", {}):
        f = doc.chain_map(ref, "request.args.map")
        fit = fitting_decompose_complex(f)
        return {"kind": "complex", "X1": encode_complex(fit.X1), "X2": encode_complex(fit.X2),
                "i1": encode_chain_map(fit.i1), "i2": encode_chain_map(fit.i2),
                "f1": encode_chain_map(fit.f1), "f2": encode_chain_map(fit.f2),
                "indices": {str(i): n for i, n in sorted(fit.indices.items())}}
    f = doc.morphism(ref, "request.args.map")
    d = fitting_decompose(f)
    return {"kind": "morphism", "n": d.n, "V_invertible": encode_object(d.Vp), "V_nilpotent": encode_object(d.Vpp),
            "i_invertible": encode_morphism(d.ip), "i_nilpotent": encode_morphism(d.ipp),
            "p_invertible": encode_morphism(d.pp), "p_nilpotent": encode_morphism(d.ppp),
            "f_invertible": encode_morphism(d.fp), "f_nilpotent": encode_morphism(d.fpp), "checked": d.check()}


def cmd_split_idempotent(doc):
    e = doc.chain_map(_pick(doc, "chain_maps", "map"), "request.args.map")
    sp = split_homotopy_idempotent(e)
    return {"object": encode_complex(sp.object), "i": encode_chain_map(sp.i), "p": encode_chain_map(sp.p),
            "idempotency": _homotopy(sp.idempotency), "pi_homotopy": _homotopy(sp.pi_homotopy),
            "ip_homotopy": _homotopy(sp.ip_homotopy),
            "series_lengths": {str(i): n for i, n in sorted(sp.series_lengths.items())},
            "validated": sp.validate()}


def cmd_ext(doc):
    x = doc.object(doc.args.get("x", "x"), "request.args.x")
    y = doc.object(doc.args.get("y", "y"), "request.args.y")
    n = _int_arg(doc, "n", 1)
    return {"n": n, "dim": ext_dim(x, y, n)}


def _curve(doc):
    B = doc.backend
    if not isinstance(B, VectNodal):
        raise InstanceError("this command needs the vect-nodal backend", "backend.name")
    return B.curve


def cmd_pic(doc):
    curve = _curve(doc)
    d = _int_arg(doc, "degree", 0)
    if not curve.field.is_finite:
        raise InstanceError("pic needs a finite field", "backend.field")
    classes = pic_classes(curve, d)
    F = curve.field
    return {"degree": d, "count": len(classes),
            "classes": [{"degree": c.degree, "scalars": [F.to_json(s) for s in c.scalars]} for c in classes]}


def cmd_sections(doc):
    B = doc.backend
    x = doc.object(_pick(doc, "objects", "bundle"), "request.args.bundle")
    F = B.field
    if isinstance(B, VectP1):
        return {"dim": B.sections_dim(x.key)}
    _curve(doc)
    s = global_sections(x.key)
    return {"dim": s.dim, "basis": [[[F.to_json(c) for c in form] for form in sec] for sec in s.basis]}


COMMANDS = {
    "check-acyclic": cmd_check_acyclic,
    "truncate": cmd_truncate,
    "heart-cover": cmd_heart_cover,
    "fitting": cmd_fitting,
    "split-idempotent": cmd_split_idempotent,
    "ext": cmd_ext,
    "pic": cmd_pic,
    "sections": cmd_sections,
}


# -- text rendering ----------------------------------------------------------------------

def _text(report) -> str:
    cmd, status = report["command"], report["status"]
    lines = [f"{cmd}: {status}"]
    if status == "input-error":
        lines.append(f"  {report['error']}")
        return "\n".join(lines) + "\n"
    body = report.get("result") or report.get("obstruction") or {}
    if cmd == "oracle":
        lines.append(f"  suite {body['suite']} seed {body['seed']}: {body['status']} "
                     f"({body['cases']} cases, {body['failures']} failures)")
        if "counterexample" in body:
            lines.append(f"  counterexample {body['counterexample']['case']}: {body['counterexample']['reason']}")
        return "\n".join(lines) + "\n"
    if status == "domain-error":
        lines.append(f"  {report['error']}")
    for k, v in body.items():
        if isinstance(v, (int, str, bool)) or v is None:
            lines.append(f"  {k}: {v}")
        elif isinstance(v, dict) and k == "witness":
            lines.append("  K: " + ", ".join(f"K^{i}={_obj_text(o)}" for i, o in v["K"].items()))
        elif k in ("A", "B", "a", "b", "object", "X1", "X2"):
            lines.append(f"  {k}: " + " -> ".join(_obj_text(o) for o in v["objects"]) + f"  (from degree {v['lo']})")
        elif k == "classes":
            lines.append("  classes: " + ", ".join(str(c["scalars"]) for c in v))
    return "\n".join(lines) + "\n"


def _obj_text(o):
    if "dim" in o:
        return f"k^{o['dim']}"
    if "free" in o:
        return f"k[e]^{o['free']}+k^{o['socle']}"
    tw = o.get("twists", [])
    return "+".join(f"O({a})" for a in tw) or "0"


# -- driver ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="override the field: a prime q or 'rational'")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized commands")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    p = argparse.ArgumentParser(prog="exactcat", description="Exact categories, acyclic complexes and bundles "
                                                             "on nodal curves.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name, parents=[common])
        s.add_argument("instance", help="path to an InstanceDocument (JSON)")
        if name == "truncate":
            s.add_argument("--n", type=int)
        if name == "ext":
            s.add_argument("--n", type=int)
        if name == "pic":
            s.add_argument("--degree", type=int)
    o = sub.add_parser("oracle", parents=[common], help="run a registered property suite")
    o.add_argument("suite", help="one of: " + ", ".join(sorted(SUITES)))
    o.add_argument("seed_pos", nargs="?", type=int, metavar="seed")
    o.add_argument("--cases", type=int, default=None)
    return p


def _effective(doc_raw, args):
    """Fold command-line overrides into the document so the report replays."""
    doc = copy.deepcopy(doc_raw)
    if not isinstance(doc, dict):
        return doc
    if args.field is not None:
        f = args.field
        doc.setdefault("backend", {})
        if isinstance(doc["backend"], dict):
            doc["backend"]["field"] = f if f == "rational" else _as_int(f)
    req = doc.setdefault("request", {})
    if isinstance(req, dict):
        req["op"] = args.command
        a = req.setdefault("args", {})
        if isinstance(a, dict):
            for k in ("n", "degree"):
                v = getattr(args, k, None)
                if v is not None:
                    a[k] = v
    return doc


def _as_int(s):
    try:
        return int(s)
    except ValueError:
        return s


def run(argv=None) -> tuple:
    """Return ``(exit_code, report_dict, args)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "oracle":
        seed = args.seed if args.seed is not None else (args.seed_pos if args.seed_pos is not None else 0)
        if args.suite not in SUITES:
            return EXIT_INPUT, {"command": "oracle", "status": "input-error",
                                "error": f"unknown suite {args.suite!r}; known: {', '.join(sorted(SUITES))}"}, args
        if not 0 <= seed < 2 ** 64:
            return EXIT_INPUT, {"command": "oracle", "status": "input-error",
                                "error": "seed must be a 64-bit unsigned integer"}, args
        rep = run_suite(args.suite, seed, args.cases).to_json()
        status = "ok" if rep["status"] == "pass" else "domain-error"
        out = {"schema_version": io.SCHEMA_VERSION, "command": "oracle", "status": status, "result": rep}
        if status != "ok":
            out["error"] = "oracle suite failed"
        return (EXIT_OK if status == "ok" else EXIT_DOMAIN), out, args
    report = {"schema_version": io.SCHEMA_VERSION, "command": args.command}
    try:
        raw = _load_raw(args.instance)
        raw = _effective(raw, args)
        report["instance"] = raw
        doc = io.parse_document(raw)
        report["result"] = COMMANDS[args.command](doc)
        report["status"] = "ok"
        return EXIT_OK, report, args
    except InstanceError as e:
        report.update(status="input-error", error=str(e), element=e.element)
        return EXIT_INPUT, report, args
    except DomainFailure as e:
        report.update(status="domain-error", error=str(e), obstruction=e.payload)
        return EXIT_DOMAIN, report, args
    except (NotAcyclic, ExactCatError) as e:
        report.update(status="domain-error", error=f"{type(e).__name__}: {e}")
        return EXIT_DOMAIN, report, args


def _load_raw(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InstanceError(f"cannot read instance: {e.strerror}", str(path)) from None
    except json.JSONDecodeError as e:
        raise InstanceError(f"invalid JSON: {e}", str(path)) from None


def main(argv: Optional[list] = None) -> int:
    code, report, args = run(argv)
    text = io.dumps(report) if args.format == "json" else _text(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
