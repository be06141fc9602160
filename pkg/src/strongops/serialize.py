"""JSON form of an instance.

Amplitudes are written as root-of-unity exponents {exp_num, exp_den} meaning
w_den ** exp_num, never as floats. Parties are 1-based in the document.
"""
from __future__ import annotations

import json

from .certificates import atomic_write_json
from .states import Block, Dims, OPSInstance, Slot

SCHEMA_VERSION = 1


def _factor_doc(f) -> dict:
    return {
        "kind": f.kind,
        "params": list(f.params),
        "support": list(f.support),
        "amps": [{"exp_num": num, "exp_den": den} for num, den in f.amplitudes],
    }


def serialize_ops(ops: OPSInstance, with_states: bool = True) -> dict:
    blocks = []
    for b in ops.blocks:
        entry = {
            "id": b.id,
            "pattern": [
                {"party": k + 1, "kind": s.kind, "param": list(s.fixed), "range": s.var}
                for k, s in enumerate(b.pattern)
            ],
        }
        if with_states:
            entry["states"] = [
                {"indices": dict(st.indices), "factors": [_factor_doc(f) for f in st.factors]} for st in b.states
            ]
        blocks.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "family": ops.family,
        "dims": list(ops.dims),
        "order_L": ops.dims.global_order,
        "count": ops.count(),
        "blocks": blocks,
    }


def load_ops(doc: dict) -> OPSInstance:
    """Rebuild an instance; listed states must match the pattern exactly."""
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported OPS schema_version {doc.get('schema_version')!r}")
    dims = Dims(tuple(doc["dims"]))
    blocks = []
    for entry in doc["blocks"]:
        pattern = [None] * dims.n
        for slot in entry["pattern"]:
            k = int(slot["party"]) - 1
            if not 0 <= k < dims.n or pattern[k] is not None:
                raise ValueError(f"block {entry['id']}: bad party {slot['party']}")
            pattern[k] = Slot(slot["kind"], tuple(slot.get("param", ())), slot.get("range"))
        if any(p is None for p in pattern):
            raise ValueError(f"block {entry['id']}: pattern does not cover every party")
        block = Block(entry["id"], dims, tuple(pattern))
        if "states" in entry:
            listed = [[(tuple(f["support"]), tuple((a["exp_num"], a["exp_den"]) for a in f["amps"]))
                       for f in st["factors"]] for st in entry["states"]]
            built = [[(f.support, f.amplitudes) for f in st.factors] for st in block.states]
            if listed != built:
                raise ValueError(f"block {entry['id']}: listed states disagree with the pattern")
        blocks.append(block)
    ops = OPSInstance(dims, tuple(blocks), doc.get("family", "custom"))
    if "count" in doc and doc["count"] != ops.count():
        raise ValueError(f"count {doc['count']} disagrees with {ops.count()} enumerated states")
    return ops


def write_ops(ops: OPSInstance, path) -> None:
    atomic_write_json(path, serialize_ops(ops))


def read_ops(path) -> OPSInstance:
    with open(path) as fh:
        return load_ops(json.load(fh))
