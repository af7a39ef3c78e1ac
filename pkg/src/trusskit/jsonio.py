"""JSON interchange for every structure kind.

Tables are row-major nested lists; carriers are index sets 0..n-1 with an
optional parallel list of labels.  The kinds:

    {"kind": "abgroup", "order": n, "add": [[...]], "zero": z, "labels": [...]}
    {"kind": "heap", "order": n, "add": [[...]], "zero": z, "labels": [...]}
    {"kind": "truss", "order": n, "heap": {...}, "mul": [[...]],
     "sided": "two-sided"|"left", "identity": i|null, "absorber": a|null}
    {"kind": "tmodule", "truss": {...}, "heap": {...}, "action": [[...]]}
    {"kind": "brace", "order": n, "add": [[...]], "mul": [[...]], "sided": ...}
    {"kind": "group", "order": n, "mul": [[...]]}

An extension truss serialises as its truss plus an "extension" block naming
the base, module, anchor and pairing convention.
"""

from __future__ import annotations

import json

from .braces import Brace
from .extensions import ExtTruss, extend
from .groups import FiniteGroup
from .heaps import AbGroup, Heap, heap_from_group
from .modules import TModule
from .trusses import Truss


def _table(arr):
    return [[int(v) for v in row] for row in arr]


def _labels(obj):
    return None if obj.labels is None else list(obj.labels)


def to_jsonable(obj):
    if isinstance(obj, AbGroup):
        return {
            "kind": "abgroup",
            "order": obj.order,
            "add": _table(obj.add),
            "zero": obj.zero,
            "labels": _labels(obj),
        }
    if isinstance(obj, Heap):
        if obj.order == 0:
            return {"kind": "heap", "order": 0, "add": [], "zero": None, "labels": None}
        return {
            "kind": "heap",
            "order": obj.order,
            "add": _table(obj.retract.add),
            "zero": obj.basepoint,
            "labels": _labels(obj),
        }
    if isinstance(obj, Truss):
        return {
            "kind": "truss",
            "order": obj.order,
            "heap": to_jsonable(obj.heap),
            "mul": _table(obj.mul),
            "sided": obj.sided,
            "identity": obj.identity,
            "absorber": obj.absorber,
            "labels": _labels(obj),
        }
    if isinstance(obj, TModule):
        return {
            "kind": "tmodule",
            "truss": to_jsonable(obj.truss),
            "heap": to_jsonable(obj.heap),
            "action": _table(obj.action),
            "labels": _labels(obj),
        }
    if isinstance(obj, Brace):
        return {
            "kind": "brace",
            "order": obj.order,
            "add": _table(obj.add.add),
            "mul": _table(obj.mul.mul),
            "sided": obj.sided,
            "labels": _labels(obj),
        }
    if isinstance(obj, FiniteGroup):
        return {
            "kind": "group",
            "order": obj.order,
            "mul": _table(obj.mul),
            "labels": _labels(obj),
        }
    if isinstance(obj, ExtTruss):
        doc = to_jsonable(obj.truss)
        doc["extension"] = {
            "base": to_jsonable(obj.base),
            "module": to_jsonable(obj.module),
            "anchor": obj.anchor,
            "pairing": "row-major",
        }
        return doc
    raise TypeError("cannot serialise %r" % type(obj).__name__)


def from_jsonable(doc):
    kind = doc.get("kind")
    labels = doc.get("labels")
    if kind == "abgroup":
        g = AbGroup(doc["add"], labels=labels)
        if doc.get("zero") is not None and g.zero != doc["zero"]:
            raise ValueError("declared zero disagrees with the table")
        return g
    if kind == "heap":
        if doc.get("order", 0) == 0:
            return Heap.empty()
        g = AbGroup(doc["add"], labels=labels)
        if doc.get("zero") is not None and g.zero != doc["zero"]:
            raise ValueError("declared basepoint disagrees with the table")
        return heap_from_group(g)
    if kind == "truss":
        heap = from_jsonable(doc["heap"])
        t = Truss(
            heap,
            doc["mul"],
            sided=doc.get("sided", "two-sided"),
            identity=doc.get("identity"),
            absorber=doc.get("absorber"),
            labels=tuple(labels) if labels else None,
        )
        if "extension" in doc:
            ext = doc["extension"]
            base = from_jsonable(ext["base"])
            module = from_jsonable(ext["module"])
            rebuilt = extend(base, module, ext["anchor"])
            if rebuilt.truss != t:
                raise ValueError("extension block does not rebuild the stored truss")
            return rebuilt
        return t
    if kind == "tmodule":
        truss = from_jsonable(doc["truss"])
        heap = from_jsonable(doc["heap"])
        return TModule(truss, heap, doc["action"],
                       labels=tuple(labels) if labels else None)
    if kind == "brace":
        add = AbGroup(doc["add"], labels=labels)
        mul = FiniteGroup(doc["mul"], labels=labels)
        return Brace(add, mul, sided=doc.get("sided", "two-sided"),
                     labels=tuple(labels) if labels else None)
    if kind == "group":
        return FiniteGroup(doc["mul"], labels=labels)
    raise ValueError("unknown structure kind %r" % kind)


def dumps(obj):
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def loads(text):
    return from_jsonable(json.loads(text))


def write_file(path, obj):
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def read_file(path):
    with open(path) as fh:
        return loads(fh.read())
