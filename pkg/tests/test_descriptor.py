import json
from dataclasses import replace

import pytest

from mbkit.catalog import CIRCLE, CIRCLE_TWIST, DISK, ENTRIES, POINT
from mbkit.descriptor import (CriticalSubmanifold as Sub, MorseBottDescriptor, canonical_json,
                              load_descriptor, negate, require_valid, validate)
from mbkit.errors import InputError
from mbkit.homology import CellModel
from mbkit.intpoly import IntPolynomial as P

ORIENTED = [e.descriptor for e in ENTRIES.values() if e.descriptor.is_fully_oriented()]


def test_catalog_entries_validate():
    for entry in ENTRIES.values():
        assert validate(entry.descriptor) == [], entry.name


def test_interior_index_bound():
    d = MorseBottDescriptor("bad", 2, DISK, interior=(Sub("c", 1, 2, CIRCLE),))
    problems = validate(d)
    assert any("index exceeds m − dim (2 > 1)" in p for p in problems)
    assert any(p.startswith("interior[0] (c).index") for p in problems)
    with pytest.raises(InputError):
        require_valid(d)


def test_boundary_index_bound():
    d = MorseBottDescriptor("bad", 2, DISK, boundary_N=(Sub("rim", 1, 1, CIRCLE),))
    assert any("index exceeds (m − 1) − dim (1 > 0)" in p for p in validate(d))


def test_name_collision():
    d = MorseBottDescriptor("dup", 2, DISK, interior=(Sub("x", 0, 2, POINT),),
                            boundary_N=(Sub("x", 1, 0, CIRCLE),))
    assert any("name collision" in p for p in validate(d))


def test_empty_critical_data():
    d = MorseBottDescriptor("empty", 2, DISK)
    assert any("no critical submanifolds" in p for p in validate(d))


def test_topology_dimension_mismatch():
    d = MorseBottDescriptor("mismatch", 2, DISK, interior=(Sub("max", 0, 2, CIRCLE),))
    assert any("cell model has dimension 1, expected 0" in p for p in validate(d))


def test_oriented_bundle_with_nontrivial_signs():
    d = MorseBottDescriptor("twist", 2, DISK, interior=(Sub("c", 1, 1, CIRCLE, CIRCLE_TWIST, True),))
    assert any("nontrivial signs" in p for p in validate(d))


def test_connectedness_checked_only_for_cell_models():
    two_circles = CellModel(range(6), [[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5]])
    d = MorseBottDescriptor("apart", 1, two_circles, interior=(Sub("p", 0, 0, POINT),))
    assert any("not connected" in p for p in validate(d))
    # a bare polynomial is taken at its word
    assert validate(replace(d, manifold_homology=P([2, 2]))) == []


def test_negate_interior_index():
    d = MorseBottDescriptor("m3", 3, P([1]), manifold_oriented=True,
                            interior=(Sub("c", 1, 1, CIRCLE),))
    assert negate(d).interior[0].index == 1


def test_negate_swaps_boundary_types():
    d = MorseBottDescriptor("cyl", 2, P([1, 1]), manifold_oriented=True,
                            boundary_D=(Sub("top", 1, 0, CIRCLE),))
    n = negate(d)
    assert n.boundary_D == ()
    assert n.boundary_N == (Sub("top", 1, 0, CIRCLE),)


@pytest.mark.parametrize("d", ORIENTED, ids=lambda d: d.name)
def test_negate_is_involution(d):
    assert negate(negate(d)) == d
    assert validate(negate(d)) == []


def test_negate_rejects_unoriented():
    with pytest.raises(InputError):
        negate(ENTRIES["mobius_core"].descriptor)
    with pytest.raises(InputError):
        negate(replace(ENTRIES["disk_max"].descriptor, manifold_oriented=False))


@pytest.mark.parametrize("name", list(ENTRIES))
def test_json_roundtrip(name):
    d = ENTRIES[name].descriptor
    text = canonical_json(d.to_json())
    back = MorseBottDescriptor.from_json(json.loads(text))
    assert back == d
    assert canonical_json(back.to_json()) == text


def test_polynomial_topology_roundtrip():
    d = MorseBottDescriptor("poly", 2, P([1]), manifold_oriented=True,
                            interior=(Sub("max", 0, 2, P([1])),),
                            boundary_N=(Sub("rim", 1, 0, P([1, 1])),))
    assert MorseBottDescriptor.from_json(json.loads(canonical_json(d.to_json()))) == d


def test_load_reports_json_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"name": "x",\n  "ambient_dim": }')
    with pytest.raises(InputError, match="line 2"):
        load_descriptor(path)


def test_missing_and_mistyped_fields():
    base = ENTRIES["disk_max"].descriptor.to_json()
    for key in ("name", "ambient_dim", "manifold_homology"):
        broken = {k: v for k, v in base.items() if k != key}
        with pytest.raises(InputError):
            MorseBottDescriptor.from_json(broken)
    with pytest.raises(InputError):
        MorseBottDescriptor.from_json({**base, "ambient_dim": "2"})
    with pytest.raises(InputError):
        MorseBottDescriptor.from_json({**base, "interior": [{"name": "x", "dim": 0}]})
