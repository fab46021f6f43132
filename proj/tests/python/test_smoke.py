import json

import pytest

import oddpack

I3 = json.dumps(
    {
        "vertices": ["s", "t", "u"],
        "terminals": ["s", "t"],
        "edges": [
            {"id": "e1", "u": "s", "v": "t", "cap": 2},
            {"id": "e2", "u": "s", "v": "u", "cap": 2},
            {"id": "e3", "u": "u", "v": "t", "cap": 2},
        ],
    }
)


def test_pack_walks_round_trip():
    res = oddpack.pack_walks_d(I3)
    assert res["value"] == "2"
    packing = json.dumps(res["packing"])
    barrier = json.dumps(res["barrier"])
    assert oddpack.verify_d(I3, packing, barrier) == {"ok": True, "failures": []}
    assert oddpack.certify_d(I3, packing, barrier)["pass"] is True


def test_pack_trails_matches_walk_value():
    res = oddpack.pack_trails_d(I3, trace=True)
    assert res["value"] == "2"
    assert res["trace"]["p"] == 2
    assert sum(int(item["weight"]) for item in res["packing"]["items"]) == 2


def test_min_barrier_capacity():
    assert oddpack.min_barrier_d(I3)["capacity"] == "2"


def test_multiflow_value_matches_partition():
    res = oddpack.multiflow_d(I3)
    assert res["value"] == res["partition"]["capacity"]


def test_generate_is_deterministic():
    a = oddpack.generate(seed=7, max_vertices=6, max_edges=9, even_caps=True)
    b = oddpack.generate(seed=7, max_vertices=6, max_edges=9, even_caps=True)
    assert a == b
    inst = json.loads(a)
    assert 2 <= len(inst["vertices"]) <= 6
    assert len(inst["terminals"]) >= 2


def test_generated_instance_solves():
    inst = oddpack.generate(seed=11, max_vertices=5, max_edges=8, eulerian=True, cap2=True)
    trails = oddpack.pack_trails_d(inst)
    walks = oddpack.pack_walks_d(inst)
    assert trails["value"] == walks["value"]


def test_export_dot_marks_terminals():
    dot = oddpack.export_dot(I3)
    assert dot.startswith("graph oddpack {")
    assert dot.count("shape=box") == 2


def test_bad_input_raises_value_error():
    with pytest.raises(ValueError, match="missing field"):
        oddpack.pack_walks("{}")
    with pytest.raises(ValueError, match="parity"):
        oddpack.oracle_pack_trails(I3, parity="weird")
    assert issubclass(oddpack.InputError, ValueError)
    assert issubclass(oddpack.InvariantError, RuntimeError)
