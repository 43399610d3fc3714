import json

import pytest

from mbkit.catalog import FLOW_FIXTURES
from mbkit.errors import FlowDataError
from mbkit.flow import (CriticalPoint as Pt, FlowDataset, FlowLine as Ln, audit_d_squared,
                        audit_sign_transport, block_complexes, build_complex,
                        counting_reconstruction, d_squared_violations, homology_polynomial,
                        homology_vs_reference, kernel_rank_inequality, load_flow, top_chain)
from mbkit.intpoly import IntPolynomial as P

from oracles import gcd_of_minors

FX = FLOW_FIXTURES
CHECKED = ["sphere", "twisted_circle", "flat_torus", "sphere_split", "mobius_core"]


def test_sphere_boundaries():
    cc = build_complex(FX["sphere"].dataset)
    assert cc.generators == {0: ["a", "b"], 1: ["s"], 2: ["x"]}
    assert cc.boundaries[2].to_list() == [[0]]
    assert cc.boundaries[1].to_list() == [[1], [-1]]
    assert homology_polynomial(cc) == P([1, 0, 1])


def test_twisted_circle_boundary_is_two():
    cc = build_complex(FX["twisted_circle"].dataset)
    assert cc.boundaries[1].to_list() == [[2]]
    assert gcd_of_minors([[2]], 1) == (1, [2])
    assert homology_polynomial(cc) == P()


@pytest.mark.parametrize("name", CHECKED)
def test_fixture_checks(name):
    fx = FX[name]
    cc = build_complex(fx.dataset)
    assert audit_d_squared(cc)
    assert homology_vs_reference(cc, fx.expected_homology)
    assert audit_sign_transport(fx.dataset, fx.restricted)
    assert kernel_rank_inequality(fx.dataset, fx.restricted).holds
    assert counting_reconstruction(cc).holds


def test_corrupted_sign_located():
    cc = build_complex(FX["sphere_corrupted"].dataset)
    assert not audit_d_squared(cc)
    assert d_squared_violations(cc) == [(2, "x", "a", 2), (2, "x", "b", -2)]
    with pytest.raises(FlowDataError, match=r"∂²≠0 at \(x,a\)"):
        kernel_rank_inequality(FX["sphere_corrupted"].dataset)


def test_sign_transport_single_line():
    pts = (Pt("a", 0, "interior", "c"), Pt("b", 1, "interior", "c"))
    fd = FlowDataset(pts, (Ln("b", "a", -1),), ("c",))
    assert audit_sign_transport(fd, FlowDataset(pts, (Ln("b", "a", 1, -1),), ("c",)))
    assert not audit_sign_transport(fd, FlowDataset(pts, (Ln("b", "a", 1, 1),), ("c",)))


def test_sign_transport_needs_matching_lines():
    fx = FX["sphere"]
    short = FlowDataset(fx.dataset.critical_points, fx.dataset.flow_lines[:1], ("S2",))
    with pytest.raises(FlowDataError, match="restricted data lacks"):
        audit_sign_transport(fx.dataset, short)


def test_kernel_rank_values():
    r = kernel_rank_inequality(FX["sphere_split"].dataset, FX["sphere_split"].restricted)
    assert (r.lhs, r.rhs) == ([2, 1, 1], [2, 0, 1])
    r = kernel_rank_inequality(FX["flat_torus"].dataset, FX["flat_torus"].restricted)
    assert (r.lhs, r.rhs) == ([1, 2, 1], [1, 2, 1])


def test_block_complexes_twisted_local_system():
    fx = FX["twisted_circle"]
    blocks = block_complexes(fx.dataset, fx.restricted)
    assert blocks["core"].boundaries[1].to_list() == [[2]]
    # without restricted data the lifted signs are used
    assert block_complexes(fx.dataset)["core"].boundaries[1].to_list() == [[2]]


def test_top_chain():
    fd = FX["flat_torus"].dataset
    assert top_chain({"p1": 1, "q1": 0}, fd, 1) == "low"
    assert top_chain({"p1": 1, "q1": -3}, fd, 1) == "high"
    assert top_chain([0, 1], fd, 1) == "high"
    with pytest.raises(FlowDataError):
        top_chain([0, 0], fd, 1)
    with pytest.raises(FlowDataError):
        top_chain({"q2": 1}, fd, 1)


def test_type_D_points_excluded():
    pts = FX["sphere"].dataset.critical_points + (Pt("d", 1, "boundary_D", "rimD"),)
    fd = FlowDataset(pts, FX["sphere"].dataset.flow_lines, ("S2",))
    cc = build_complex(fd)
    assert "d" not in cc.generators[1]
    assert homology_polynomial(cc) == P([1, 0, 1])
    bad = FlowDataset(pts, FX["sphere"].dataset.flow_lines + (Ln("d", "a", 1),), ("S2",))
    with pytest.raises(FlowDataError, match="type D"):
        build_complex(bad)


@pytest.mark.parametrize("lines,order,message", [
    ((Ln("x", "a", 1),), ("S2",), "relative index"),
    ((Ln("s", "zz", 1),), ("S2",), "dangling"),
    ((Ln("s", "a", 2),), ("S2",), "sign must be"),
    ((), ("S2", "S2"), "appears twice"),
    ((), (), "not ranked"),
])
def test_validation_errors(lines, order, message):
    fd = FlowDataset(FX["sphere"].dataset.critical_points, lines, order)
    with pytest.raises(FlowDataError, match=message):
        build_complex(fd)


def test_lines_may_not_climb():
    fd = FX["flat_torus"].dataset
    climbing = FlowDataset(fd.critical_points, (Ln("p1", "p0", 1), Ln("q1", "p0", 1)),
                           ("high", "low"))
    with pytest.raises(FlowDataError, match="climbs"):
        build_complex(climbing)


def test_json_roundtrip_and_load(tmp_path):
    fd = FX["mobius_core"].dataset
    assert FlowDataset.from_json(json.loads(json.dumps(fd.to_json()))) == fd
    data = fd.to_json()
    del data["height_order"]
    path = tmp_path / "flow.json"
    path.write_text(json.dumps(data))
    with pytest.raises(FlowDataError, match="height_order"):
        load_flow(path)
