import copy
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strongops.constructions import build
from strongops.serialize import SCHEMA_VERSION, _factor_doc, load_ops, read_ops, serialize_ops, write_ops
from strongops.states import Factor


def _amps(f):
    doc = _factor_doc(f)
    return doc["support"], [(a["exp_num"], a["exp_den"]) for a in doc["amps"]]


def test_factor_amplitudes():
    assert _amps(Factor.alpha(1, 3)) == ([0, 1, 2], [(0, 3), (1, 3), (2, 3)])
    assert _amps(Factor.plus_minus(0, 2, "-", 3)) == ([0, 2], [(0, 1), (1, 2)])
    assert _amps(Factor.basis(2, 4)) == ([2], [(0, 1)])


def _state_set(ops):
    return {(s.block_id, s.factors) for s in ops.states}


def test_round_trip_file(tmp_path, sym3):
    path = tmp_path / "sym.json"
    write_ops(sym3, path)
    again = read_ops(path)
    assert again.count() == 50
    assert _state_set(again) == _state_set(sym3)
    doc = json.loads(path.read_text())
    assert doc["schema_version"] == SCHEMA_VERSION and doc["count"] == 50
    assert doc["blocks"][0]["pattern"][0]["party"] == 1


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["FourAsym", "FourSym"]), st.lists(st.integers(3, 5), min_size=4, max_size=4))
def test_round_trip_property(family, dims):
    ops = build(family, dims)
    doc = json.loads(json.dumps(serialize_ops(ops)))
    again = load_ops(doc)
    assert again.dims == ops.dims and again.block_ids == ops.block_ids
    assert _state_set(again) == _state_set(ops)


def test_round_trip_n_party():
    for family, dims in (("OddN", (3,) * 5), ("EvenN", (3,) * 6)):
        ops = build(family, dims)
        assert _state_set(load_ops(serialize_ops(ops))) == _state_set(ops)


def test_without_states(asym3):
    doc = serialize_ops(asym3, with_states=False)
    assert "states" not in doc["blocks"][0]
    assert load_ops(doc).count() == 52


@pytest.mark.parametrize("edit", [
    lambda d: d.update(schema_version=2),
    lambda d: d.update(count=51),
    lambda d: d["blocks"][0]["states"][0]["factors"][3]["amps"][1].update(exp_num=2),
    lambda d: d["blocks"][0]["pattern"].pop(),
    lambda d: d["blocks"][0]["pattern"][1].update(party=1),
    lambda d: d["blocks"][1].update(id=d["blocks"][0]["id"]),
])
def test_rejects_tampering(asym3, edit):
    doc = copy.deepcopy(serialize_ops(asym3))
    edit(doc)
    with pytest.raises(ValueError):
        load_ops(doc)
