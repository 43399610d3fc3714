"""Known-good descriptors and flow datasets.

Every expected quotient was worked out by hand from the listed
triangulations (homology by Smith normal form, then division by 1 + t)
before the verification code existed; the provenance strings say how.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .counting import (VerificationReport, cross_check_negation, lefschetz_relative,
                       relative_poincare, verify_corollary, verify_main)
from .descriptor import CriticalSubmanifold as Sub
from .descriptor import MorseBottDescriptor
from .errors import InputError
from .flow import CriticalPoint, FlowDataset, FlowLine
from .homology import CellModel, SignCocycle
from .intpoly import IntPolynomial

POINT = CellModel([0])
CIRCLE = CellModel([0, 1, 2], [[0, 1], [1, 2], [0, 2]])
# one edge reversed: monodromy -1 around the circle
CIRCLE_TWIST = SignCocycle({(0, 1): -1})
# cone on the triangle 0-1-2 with apex 3
DISK = CellModel([0, 1, 2, 3], [[0, 1, 3], [0, 2, 3], [1, 2, 3]])
SPHERE = CellModel([0, 1, 2, 3], [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
# bottom circle 0-1-2, top circle 3-4-5
CYLINDER = CellModel(range(6), [[0, 1, 3], [1, 3, 4], [1, 2, 4], [2, 4, 5], [0, 2, 5], [0, 3, 5]])
# triangles {i, i+1, i+2} mod 5
MOBIUS = CellModel(range(5), [[i % 5, (i + 1) % 5, (i + 2) % 5] for i in range(5)])
# 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7
TORUS = CellModel(range(7), [[i % 7, (i + 1) % 7, (i + 3) % 7] for i in range(7)]
                  + [[i % 7, (i + 2) % 7, (i + 3) % 7] for i in range(7)])


def _klein_triangles():
    # 3x3 grid on Z/3 x Z/3; crossing the top edge flips the first coordinate
    def vertex(i, j):
        if j == 3:
            i, j = -i, 0
        return 3 * (i % 3) + j

    tris = []
    for i in range(3):
        for j in range(3):
            a, b = vertex(i, j), vertex(i + 1, j)
            c, d = vertex(i + 1, j + 1), vertex(i, j + 1)
            tris += [[a, b, c], [a, d, c]]
    return tris


KLEIN = CellModel(range(9), _klein_triangles())


def _solid_torus_tetrahedra():
    # three triangular prisms glued in a cycle; each prism cut into 3 tetrahedra
    tets = []
    for layer in range(3):
        a = [3 * layer + i for i in range(3)]
        b = [3 * ((layer + 1) % 3) + i for i in range(3)]
        tets += [[a[0], a[1], a[2], b[2]], [a[0], a[1], b[1], b[2]], [a[0], b[0], b[1], b[2]]]
    return tets


SOLID_TORUS = CellModel(range(9), _solid_torus_tetrahedra())

TRIANGULATIONS = {
    "point": POINT,
    "circle": CIRCLE,
    "disk": DISK,
    "sphere": SPHERE,
    "cylinder": CYLINDER,
    "mobius": MOBIUS,
    "torus": TORUS,
    "klein": KLEIN,
    "solid_torus": SOLID_TORUS,
}


@dataclass(frozen=True)
class FlowFixture:
    dataset: FlowDataset
    expected_homology: IntPolynomial
    restricted: Optional[FlowDataset] = None
    note: str = ""


@dataclass(frozen=True)
class CatalogEntry:
    descriptor: MorseBottDescriptor
    expected_R_main: IntPolynomial
    expected_R_corollary: Optional[IntPolynomial] = None
    provenance: Dict[str, str] = field(default_factory=dict)
    flow_datasets: Dict[str, FlowFixture] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.descriptor.name


def _points(*rows):
    return tuple(CriticalPoint(*r) for r in rows)


def _lines(*rows):
    return tuple(FlowLine(*r) for r in rows)


def _sphere_points():
    return _points(("a", 0, "interior", "S2"), ("b", 0, "interior", "S2"),
                   ("s", 1, "interior", "S2"), ("x", 2, "interior", "S2"))


SPHERE_LINES = _lines(("s", "a", 1), ("s", "b", -1), ("x", "s", 1), ("x", "s", -1))


def _flow_fixtures() -> Dict[str, FlowFixture]:
    sphere = FlowDataset(_sphere_points(), SPHERE_LINES, ("S2",))
    corrupted = FlowDataset(
        _sphere_points(),
        _lines(("s", "a", 1), ("s", "b", -1), ("x", "s", 1), ("x", "s", 1)),
        ("S2",))
    split_points = _points(("a", 0, "interior", "low"), ("b", 0, "interior", "low"),
                           ("s", 1, "interior", "high"), ("x", 2, "interior", "high"))
    sphere_split = FlowDataset(split_points, SPHERE_LINES, ("low", "high"))
    sphere_split_restricted = FlowDataset(
        split_points, _lines(("x", "s", 1), ("x", "s", -1)), ("low", "high"))

    circle_pts = _points(("a", 0, "interior", "core"), ("b", 1, "interior", "core"))
    twisted_local = FlowDataset(circle_pts, _lines(("b", "a", 1, 1), ("b", "a", -1, -1)), ("core",))
    twisted_lift = FlowDataset(circle_pts, _lines(("b", "a", 1), ("b", "a", 1)), ("core",))

    torus_pts = _points(("p0", 0, "interior", "low"), ("p1", 1, "interior", "low"),
                        ("q1", 1, "interior", "high"), ("q2", 2, "interior", "high"))
    torus_within = _lines(("p1", "p0", 1), ("p1", "p0", -1), ("q2", "q1", 1), ("q2", "q1", -1))
    torus_cross = _lines(("q1", "p0", 1), ("q1", "p0", -1), ("q2", "p1", 1), ("q2", "p1", -1))
    torus = FlowDataset(torus_pts, torus_within + torus_cross, ("low", "high"))
    torus_restricted = FlowDataset(torus_pts, torus_within, ("low", "high"))

    mob_pts = _points(("r0", 0, "boundary_N", "rim"), ("r1", 1, "boundary_N", "rim"),
                      ("c1", 1, "interior", "core"), ("c2", 2, "interior", "core"))
    mob = FlowDataset(
        mob_pts,
        _lines(("r1", "r0", 1), ("r1", "r0", -1), ("c2", "c1", 1), ("c2", "c1", 1),
               ("c1", "r0", 1), ("c1", "r0", -1), ("c2", "r1", 1)),
        ("rim", "core"))
    mob_restricted = FlowDataset(
        mob_pts,
        _lines(("r1", "r0", 1), ("r1", "r0", -1), ("c2", "c1", 1, 1), ("c2", "c1", -1, -1)),
        ("rim", "core"))

    return {
        "sphere": FlowFixture(sphere, IntPolynomial([1, 0, 1]), sphere,
                              "min a, min b, saddle s, max x; d2 = 0, d1 = [1, -1]"),
        "sphere_corrupted": FlowFixture(corrupted, IntPolynomial([1, 0, 1]), None,
                                        "second x -> s line flipped; d1 d2 = [2, -2]"),
        "sphere_split": FlowFixture(sphere_split, IntPolynomial([1, 0, 1]),
                                    sphere_split_restricted, "minima below, saddle and max above"),
        "twisted_circle": FlowFixture(twisted_lift, IntPolynomial(), twisted_local,
                                      "monodromy -1; twisted d1 = [2]"),
        "flat_torus": FlowFixture(torus, IntPolynomial([1, 2, 1]), torus_restricted,
                                  "two critical circles perturbed to 4 points; all d = 0"),
        "mobius_core": FlowFixture(mob, IntPolynomial([1, 1]), mob_restricted,
                                   "core circle with twisted negative bundle over a type N rim"),
    }


FLOW_FIXTURES = _flow_fixtures()


def _entries() -> List[CatalogEntry]:
    P = IntPolynomial
    rim = Sub("rim", 1, 0, CIRCLE)
    return [
        CatalogEntry(
            MorseBottDescriptor(
                "disk_max", 2, DISK, manifold_oriented=True, relative_homology=DISK,
                interior=(Sub("max", 0, 2, POINT),), boundary_N=(rim,)),
            P([0, 1]), P([]),
            {"R_main": "P(point)=1, P(S1)=1+t by SNF; (t^2+1+t-1)/(1+t) = t",
             "R_corollary": "MB^D = t^2, P(D2,dD2) = t^2 by SNF on the pair; lhs 0"}),
        CatalogEntry(
            MorseBottDescriptor(
                "disk_min", 2, DISK, manifold_oriented=True, relative_homology=DISK,
                interior=(Sub("min", 0, 0, POINT),), boundary_D=(rim,)),
            P([]), P([1]),
            {"R_main": "MB^N = 1 (type D excluded), P(D2) = 1; lhs 0",
             "R_corollary": "MB^D = 1 + (1+t)t, P(D2,dD2) = t^2; (1+t)/(1+t) = 1"}),
        CatalogEntry(
            MorseBottDescriptor(
                "cylinder_height", 2, CYLINDER, manifold_oriented=True,
                relative_homology=CYLINDER,
                boundary_N=(Sub("bottom", 1, 0, CIRCLE),),
                boundary_D=(Sub("top", 1, 0, CIRCLE),)),
            P([]), P([]),
            {"R_main": "MB^N = 1+t, P(cylinder) = 1+t by SNF; lhs 0",
             "R_corollary": "MB^D = (1+t)t, P(cyl, boundary) = t+t^2 by SNF on the pair"}),
        CatalogEntry(
            MorseBottDescriptor(
                "mobius_core", 2, MOBIUS, manifold_oriented=False, relative_homology=MOBIUS,
                interior=(Sub("core", 1, 1, CIRCLE, CIRCLE_TWIST, False),),
                boundary_N=(rim,)),
            P([]), None,
            {"R_main": "twisted P(S1; -1) = 0 by SNF (divisors 1, 2); (1+t) - (1+t) = 0"},
            {"mobius_core": FLOW_FIXTURES["mobius_core"]}),
        CatalogEntry(
            MorseBottDescriptor(
                "solid_torus_core_max", 3, SOLID_TORUS, manifold_oriented=True,
                relative_homology=SOLID_TORUS,
                interior=(Sub("core", 1, 2, CIRCLE),),
                boundary_N=(Sub("shell", 2, 0, TORUS),)),
            P([0, 1, 1]), P([]),
            {"R_main": "MB^N = (1+t)t^2 + 1+2t+t^2, P = 1+t; t^3+2t^2+t = (1+t)(t+t^2)",
             "R_corollary": "MB^D = t^2+t^3, P(M,dM) = t^2+t^3 by SNF on the pair"}),
        CatalogEntry(
            MorseBottDescriptor(
                "flat_torus", 2, TORUS, manifold_oriented=True, relative_homology=TORUS,
                interior=(Sub("low", 1, 0, CIRCLE), Sub("high", 1, 1, CIRCLE))),
            P([]), P([]),
            {"R_main": "(1+t) + (1+t)t - (1+2t+t^2) = 0, P(T2) by SNF on 7 vertices",
             "R_corollary": "closed: P(M,dM) = P(M); same computation"},
            {"flat_torus": FLOW_FIXTURES["flat_torus"]}),
        CatalogEntry(
            MorseBottDescriptor(
                "klein_flat", 2, KLEIN, manifold_oriented=False, relative_homology=KLEIN,
                interior=(Sub("low", 1, 0, CIRCLE),
                          Sub("high", 1, 1, CIRCLE, CIRCLE_TWIST, False))),
            P([]), None,
            {"R_main": "P(K) = 1+t (H1 = Z + Z/2) by SNF on 9 vertices; (1+t) + 0 - (1+t) = 0"}),
    ]


ENTRIES: Dict[str, CatalogEntry] = {e.name: e for e in _entries()}

# interior index-1 point on a disk with nothing on the boundary: t - 1 is not
# divisible by 1 + t, so no Morse-Bott function has this critical data
ADVERSARIAL = MorseBottDescriptor(
    "adversarial", 2, IntPolynomial([1]), manifold_oriented=True,
    interior=(Sub("saddle", 0, 1, POINT),))


def list_entries() -> List[str]:
    return list(ENTRIES)


def get_entry(name: str) -> CatalogEntry:
    try:
        return ENTRIES[name]
    except KeyError:
        raise InputError(f"no catalog entry named {name!r}; known: {list_entries()}") from None


@dataclass(frozen=True)
class CatalogCheck:
    entry: str
    report: VerificationReport
    expected: IntPolynomial
    extra_failures: tuple = ()

    @property
    def passed(self) -> bool:
        return self.report.passed and self.report.quotient == self.expected and not self.extra_failures

    def diagnostics(self) -> str:
        out = list(self.extra_failures)
        if self.report.quotient != self.expected:
            diff = self.report.quotient - self.expected
            out.append(f"expected R = {self.expected}, got {self.report.quotient} (diff {diff})")
        if not self.report.passed:
            out.append(self.report.failure_detail)
        return "; ".join(out)


def check_entry(entry: CatalogEntry) -> List[CatalogCheck]:
    d = entry.descriptor
    checks = [CatalogCheck(entry.name, verify_main(d), entry.expected_R_main)]
    if entry.expected_R_corollary is not None:
        extra = []
        if not cross_check_negation(d):
            extra.append("negation cross-check failed")
        if d.relative_homology is not None and relative_poincare(d) != lefschetz_relative(d):
            extra.append(f"duality gives {lefschetz_relative(d)}, pair homology gives "
                         f"{relative_poincare(d)}")
        checks.append(CatalogCheck(entry.name, verify_corollary(d),
                                   entry.expected_R_corollary, tuple(extra)))
    return checks


def run_all() -> List[CatalogCheck]:
    return [c for entry in ENTRIES.values() for c in check_entry(entry)]
