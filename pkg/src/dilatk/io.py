"""JSON codecs for every object the command line reads or writes.

Each type has an ``encode_*`` returning plain JSON data and a ``decode_*``
that validates and rebuilds the object.  :func:`encode` and :func:`decode`
dispatch on the object type or on a ``"type"`` tag.
"""

from __future__ import annotations

import json
from typing import Any

from .bcl import BclData
from .dilation1 import DilationQuadruple
from .endo import FinFunc
from .errors import DilatkError, InvalidInput
from .ext import LinMap, MonoidAction, PresentedMonoid
from .lifting import Intertwiner
from .multivar import FuncFamily
from .periodic import EPSet
from .report import Check, VerificationReport
from .symset import Component, Elem, Periodic, Subset, SymSet, TailAffineMap, Translate


def _need(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise InvalidInput(f"{where}: missing field {key!r}")
    return obj[key]


def parse_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInput(f"malformed JSON: {e.msg} at line {e.lineno} column {e.colno}") from None


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False)


# -- functions ----------------------------------------------------------------


def encode_finfunc(h: FinFunc) -> dict:
    return {"n": h.n, "table": list(h.table)}


def decode_finfunc(obj) -> FinFunc:
    """Accepts ``{"n": 3, "table": [...]}`` or a bare table."""
    if isinstance(obj, list):
        return FinFunc(obj)
    table = _need(obj, "table", "function")
    if not isinstance(table, list):
        raise InvalidInput("function: table must be a list")
    h = FinFunc(table)
    if "n" in obj and obj["n"] != h.n:
        raise InvalidInput(f"function: n = {obj['n']} but the table has {h.n} entries")
    return h


def parse_inline_table(text: str) -> FinFunc:
    """``"1,1,2"`` or ``"[1,1,2]"`` as a function table."""
    body = text.strip().strip("[]")
    try:
        return FinFunc(int(x) for x in body.split(",") if x.strip())
    except ValueError:
        raise InvalidInput(f"cannot read {text!r} as a table") from None


def encode_family(f: FuncFamily) -> dict:
    return f.to_json()


def decode_family(obj) -> FuncFamily:
    maps = _need(obj, "maps", "family")
    if not isinstance(maps, list) or not all(isinstance(m, list) for m in maps):
        raise InvalidInput("family: maps must be a list of tables")
    f = FuncFamily(maps)
    if "n" in obj and obj["n"] != f.n:
        raise InvalidInput(f"family: n = {obj['n']} but tables have length {f.n}")
    return f


def encode_intertwiner(s: Intertwiner) -> dict:
    return s.to_json()


def decode_intertwiner(obj, target: int | None = None) -> Intertwiner:
    if isinstance(obj, list):
        table = obj
    else:
        table = _need(obj, "table", "intertwiner")
        target = obj.get("target", target)
    if target is None:
        raise InvalidInput("intertwiner: target size unknown")
    return Intertwiner(table, target)


# -- presented sets and maps --------------------------------------------------


def encode_elem(x: Elem) -> list:
    return [x.comp, x.index]


def decode_elem(obj) -> Elem:
    if (not isinstance(obj, (list, tuple)) or len(obj) != 2 or not isinstance(obj[0], str)
            or not isinstance(obj[1], int) or isinstance(obj[1], bool)):
        raise InvalidInput(f"bad element {obj!r}; expected [component, index]")
    return Elem(obj[0], obj[1])


def encode_symset(S: SymSet) -> dict:
    comps = []
    for c in S:
        d = {"id": c.id, "kind": c.kind}
        if c.size is not None:
            d["size"] = c.size
        if c.label is not None:
            d["label"] = c.label
        comps.append(d)
    return {"components": comps}


def decode_symset(obj) -> SymSet:
    comps = _need(obj, "components", "set")
    if not isinstance(comps, list):
        raise InvalidInput("set: components must be a list")
    out = []
    for k, c in enumerate(comps):
        if not isinstance(c, dict):
            raise InvalidInput(f"set: component {k} is not an object")
        out.append(Component(c.get("id", c.get("label", f"c{k}")), _need(c, "kind", "component"),
                             c.get("size"), c.get("label")))
    return SymSet(out)


def encode_subset(S: Subset) -> dict:
    return S.to_json()


def decode_subset(obj, space: SymSet) -> Subset:
    """A subset as ``{comp: EPSet json}`` or a list of elements."""
    if isinstance(obj, list):
        return space.subset(decode_elem(x) for x in obj)
    if not isinstance(obj, dict):
        raise InvalidInput("subset: expected an object or a list of elements")
    parts = {}
    for cid, part in obj.items():
        space[cid]
        try:
            parts[cid] = EPSet.from_json(part)
        except (KeyError, TypeError) as e:
            raise InvalidInput(f"subset: bad part for {cid}: {e}") from None
    return Subset(space, parts)


def encode_map(m: TailAffineMap) -> dict:
    tails = []
    for (cid, d), rule in m.tails.items():
        entry = {"comp": cid, "dir": d}
        if isinstance(rule, Translate):
            entry["translate"] = [rule.target, rule.offset]
        else:
            entry["periodic"] = [encode_elem(y) for y in rule.values]
        tails.append(entry)
    out = {"domain": encode_symset(m.domain)}
    if m.codomain != m.domain:
        out["codomain"] = encode_symset(m.codomain)
    out["window"] = [[encode_elem(x), encode_elem(m.window[x])]
                     for x in sorted(m.window, key=m.domain.element_key)]
    out["thresholds"] = dict(m.thresholds)
    out["tails"] = tails
    return out


def decode_map(obj) -> TailAffineMap:
    dom = decode_symset(_need(obj, "domain", "map"))
    cod = decode_symset(obj["codomain"]) if "codomain" in obj else dom
    window = {}
    for pair in obj.get("window", []):
        if not isinstance(pair, list) or len(pair) != 2:
            raise InvalidInput(f"map: bad window entry {pair!r}")
        window[decode_elem(pair[0])] = decode_elem(pair[1])
    tails = {}
    for t in obj.get("tails", []):
        key = (_need(t, "comp", "tail"), _need(t, "dir", "tail"))
        if "translate" in t:
            target, offset = t["translate"]
            tails[key] = Translate(target, int(offset))
        elif "periodic" in t:
            tails[key] = Periodic(tuple(decode_elem(y) for y in t["periodic"]))
        else:
            raise InvalidInput(f"tail for {key} needs 'translate' or 'periodic'")
    thresholds = obj.get("thresholds", {})
    if not isinstance(thresholds, dict):
        raise InvalidInput("map: thresholds must be an object")
    return TailAffineMap(dom, cod, window, thresholds, tails)


def encode_quadruple(q: DilationQuadruple) -> dict:
    return {"type": "quadruple", "kind": q.kind, "bilateral": q.bilateral,
            "A": encode_symset(q.A), "B": encode_symset(q.B),
            "i": encode_map(q.i), "v": encode_map(q.v), "p": encode_map(q.p)}


def decode_quadruple(obj) -> DilationQuadruple:
    return DilationQuadruple(obj.get("kind", "custom"), decode_symset(_need(obj, "A", "quadruple")),
                             decode_symset(_need(obj, "B", "quadruple")),
                             decode_map(_need(obj, "i", "quadruple")), decode_map(_need(obj, "v", "quadruple")),
                             decode_map(_need(obj, "p", "quadruple")), bool(obj.get("bilateral", False)))


# -- other data ---------------------------------------------------------------


def encode_bcl(d: BclData) -> dict:
    return d.to_json()


def decode_bcl(obj) -> BclData:
    return BclData(_need(obj, "w", "BCL data"), _need(obj, "u", "BCL data"), obj.get("w2", []))


def encode_linmap(h: LinMap) -> dict:
    return h.to_json()


def decode_linmap(obj, field: str | None = None) -> LinMap:
    entries = _need(obj, "entries", "matrix")
    if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
        raise InvalidInput("matrix: entries must be a list of rows")
    h = LinMap.from_entries(entries, field or obj.get("field", "q"))
    if "dim" in obj and obj["dim"] != h.dim:
        raise InvalidInput(f"matrix: dim = {obj['dim']} but entries are {h.dim}x{h.dim}")
    return h


def encode_action(act: MonoidAction) -> dict:
    return act.to_json()


def decode_action(obj, monoid: PresentedMonoid | str | None = None) -> MonoidAction:
    if monoid is None:
        monoid = _need(obj, "monoid", "action")
    if isinstance(monoid, str):
        monoid = PresentedMonoid.preset(monoid)
    maps = _need(obj, "maps", "action")
    if not isinstance(maps, list):
        raise InvalidInput("action: maps must be a list of tables")
    return MonoidAction(monoid, maps)


def encode_report(r: VerificationReport) -> dict:
    return {"type": "report", **r.to_json()}


def decode_report(obj) -> VerificationReport:
    rep = VerificationReport(obj.get("subject", ""))
    for c in _need(obj, "checks", "report"):
        rep.checks.append(Check(c["name"], c["status"], c.get("witness"), c.get("detail", ""),
                                c.get("failures", 0)))
    rep.examined.update(obj.get("examined", {}))
    return rep


_ENCODERS = [
    (FinFunc, encode_finfunc), (FuncFamily, encode_family), (Intertwiner, encode_intertwiner),
    (SymSet, encode_symset), (Subset, encode_subset), (TailAffineMap, encode_map),
    (DilationQuadruple, encode_quadruple), (BclData, encode_bcl), (LinMap, encode_linmap),
    (MonoidAction, encode_action), (VerificationReport, encode_report),
]


def encode(x) -> Any:
    for cls, enc in _ENCODERS:
        if isinstance(x, cls):
            return enc(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    raise InvalidInput(f"no JSON encoding for {type(x).__name__}")


def decode(obj, kind: str | None = None):
    """Rebuild an object; ``kind`` overrides the ``type`` tag or the shape-based guess."""
    if kind is None and isinstance(obj, dict):
        kind = obj.get("type")
    if kind is None:
        kind = _guess(obj)
    decoders = {"function": decode_finfunc, "family": decode_family, "set": decode_symset,
                "map": decode_map, "quadruple": decode_quadruple, "bcl": decode_bcl,
                "matrix": decode_linmap, "report": decode_report, "action": decode_action,
                "intertwiner": decode_intertwiner}
    if kind not in decoders:
        raise InvalidInput(f"unknown object type {kind!r}")
    try:
        return decoders[kind](obj)
    except DilatkError:
        raise
    except (TypeError, ValueError, KeyError, AttributeError) as e:
        raise InvalidInput(f"bad {kind} document: {e}") from None


def _guess(obj) -> str:
    if isinstance(obj, list):
        return "function"
    if not isinstance(obj, dict):
        raise InvalidInput("expected a JSON object or list")
    if "table" in obj:
        return "intertwiner" if "target" in obj else "function"
    if "entries" in obj:
        return "matrix"
    if "maps" in obj:
        return "action" if "monoid" in obj else "family"
    if "w" in obj and "u" in obj:
        return "bcl"
    if "domain" in obj:
        return "map"
    if "components" in obj:
        return "set"
    if "checks" in obj:
        return "report"
    if {"A", "B", "i", "v", "p"} <= set(obj):
        return "quadruple"
    raise InvalidInput("cannot tell what kind of object this document describes")


def loads(text: str, kind: str | None = None):
    return decode(parse_json(text), kind)
