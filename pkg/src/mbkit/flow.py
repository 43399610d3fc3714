"""Morse complexes assembled from supplied flow data, and their audits.

Gradient flow lines are not computed here.  A dataset lists critical
points (with index, kind and the critical block they come from) and flow
lines between points of adjacent index, each carrying the orientation sign
of the line and the +-1 transport of the local system along it.  The
boundary entry for a pair of points is the sum of sign * transport over the
lines joining them.  Type D points are never generators.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .descriptor import BOUNDARY_D, KINDS
from .errors import FlowDataError
from .homology import IntegerMatrix, profile_from_boundaries, smith_normal_form
from .intpoly import ONE_PLUS_T, IntPolynomial


@dataclass(frozen=True)
class CriticalPoint:
    name: str
    index: int
    kind: str
    block: str


@dataclass(frozen=True)
class FlowLine:
    source: str
    target: str
    sign: int
    transport: int = 1

    @property
    def weight(self) -> int:
        return self.sign * self.transport


@dataclass(frozen=True)
class FlowDataset:
    critical_points: Tuple[CriticalPoint, ...]
    flow_lines: Tuple[FlowLine, ...]
    height_order: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "critical_points", tuple(self.critical_points))
        object.__setattr__(self, "flow_lines", tuple(self.flow_lines))
        object.__setattr__(self, "height_order", tuple(self.height_order))

    def point(self, name: str) -> CriticalPoint:
        for p in self.critical_points:
            if p.name == name:
                return p
        raise KeyError(name)

    def block_of(self) -> Dict[str, str]:
        return {p.name: p.block for p in self.critical_points}

    def within_block_lines(self) -> List[FlowLine]:
        blocks = self.block_of()
        return [ln for ln in self.flow_lines if blocks[ln.source] == blocks[ln.target]]

    def to_json(self) -> dict:
        return {
            "critical_points": [
                {"name": p.name, "index": p.index, "kind": p.kind, "block": p.block}
                for p in self.critical_points],
            "flow_lines": [
                {"from": ln.source, "to": ln.target, "sign": ln.sign, "transport": ln.transport}
                for ln in self.flow_lines],
            "height_order": list(self.height_order),
        }

    @classmethod
    def from_json(cls, data) -> "FlowDataset":
        if not isinstance(data, dict):
            raise FlowDataError("flow dataset must be a JSON object")
        for key in ("critical_points", "flow_lines", "height_order"):
            if key not in data:
                raise FlowDataError("missing field", key)
            if not isinstance(data[key], list):
                raise FlowDataError("must be an array", key)
        points = []
        for i, raw in enumerate(data["critical_points"]):
            where = f"critical_points[{i}]"
            if not isinstance(raw, dict):
                raise FlowDataError("must be an object", where)
            for key in ("name", "index", "kind", "block"):
                if key not in raw:
                    raise FlowDataError("missing field", f"{where}.{key}")
            if raw.get("fiber_sign_base", 1) != 1:
                raise FlowDataError("fiber bases are normalized to +1", f"{where}.fiber_sign_base")
            points.append(CriticalPoint(raw["name"], raw["index"], raw["kind"], raw["block"]))
        lines = []
        for i, raw in enumerate(data["flow_lines"]):
            where = f"flow_lines[{i}]"
            if not isinstance(raw, dict):
                raise FlowDataError("must be an object", where)
            for key in ("from", "to", "sign"):
                if key not in raw:
                    raise FlowDataError("missing field", f"{where}.{key}")
            lines.append(FlowLine(raw["from"], raw["to"], raw["sign"], raw.get("transport", 1)))
        return cls(tuple(points), tuple(lines), tuple(data["height_order"]))


def load_flow(path) -> FlowDataset:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FlowDataError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                            str(path)) from None
    return FlowDataset.from_json(data)


def validate_flow(fd: FlowDataset) -> None:
    """Raise FlowDataError on the first broken dataset invariant."""
    names = {}
    block_kind = {}
    for i, p in enumerate(fd.critical_points):
        where = f"critical_points[{i}]"
        if not isinstance(p.name, str) or not p.name:
            raise FlowDataError("name must be a nonempty string", where)
        if p.name in names:
            raise FlowDataError(f"duplicate point name {p.name!r}", where)
        names[p.name] = p
        if isinstance(p.index, bool) or not isinstance(p.index, int) or p.index < 0:
            raise FlowDataError(f"index must be a nonnegative integer, got {p.index!r}", where)
        if p.kind not in KINDS:
            raise FlowDataError(f"kind must be one of {list(KINDS)}, got {p.kind!r}", where)
        if not isinstance(p.block, str):
            raise FlowDataError("block must be a string", where)
        if block_kind.setdefault(p.block, p.kind) != p.kind:
            raise FlowDataError(f"block {p.block!r} mixes kinds", where)

    order = list(fd.height_order)
    if len(set(order)) != len(order):
        raise FlowDataError("a block appears twice", "height_order")
    stray = [b for b in order if b not in block_kind]
    if stray:
        raise FlowDataError(f"unknown blocks {stray}", "height_order")
    missing = sorted(b for b, k in block_kind.items() if k != BOUNDARY_D and b not in order)
    if missing:
        raise FlowDataError(f"blocks {missing} are not ranked", "height_order")
    rank = {b: i for i, b in enumerate(order)}

    for i, ln in enumerate(fd.flow_lines):
        where = f"flow_lines[{i}]"
        for end in (ln.source, ln.target):
            if end not in names:
                raise FlowDataError(f"dangling reference to point {end!r}", where)
        for label, value in (("sign", ln.sign), ("transport", ln.transport)):
            if value not in (1, -1) or isinstance(value, bool):
                raise FlowDataError(f"{label} must be +1 or -1, got {value!r}", where)
        p, q = names[ln.source], names[ln.target]
        if p.index != q.index + 1:
            raise FlowDataError(
                f"relative index violation: {p.name} (index {p.index}) -> "
                f"{q.name} (index {q.index})", where)
        if BOUNDARY_D in (p.kind, q.kind):
            raise FlowDataError(f"type D points take no flow lines ({p.name} -> {q.name})", where)
        if rank[p.block] < rank[q.block]:
            raise FlowDataError(
                f"flow line climbs from block {p.block!r} to higher block {q.block!r}", where)


@dataclass(frozen=True)
class ChainComplexBundle:
    generators: Dict[int, List[str]]
    kinds: Dict[str, str]
    boundaries: Dict[int, IntegerMatrix]
    top: int

    def sizes(self) -> List[int]:
        return [len(self.generators.get(n, [])) for n in range(self.top + 1)]

    def boundary_list(self) -> List[IntegerMatrix]:
        return [self.boundaries[n] for n in range(self.top + 1)]


def _assemble(points: Sequence[CriticalPoint], lines: Sequence[FlowLine], weight=None) -> ChainComplexBundle:
    gens: Dict[int, List[str]] = defaultdict(list)
    kinds = {}
    for p in points:
        if p.kind == BOUNDARY_D:
            continue
        gens[p.index].append(p.name)
        kinds[p.name] = p.kind
    top = max(gens) if gens else -1
    pos = {n: {name: i for i, name in enumerate(gens[n])} for n in range(top + 1)}
    cells = {n: [[0] * len(gens[n]) for _ in range(len(gens[n - 1]) if n else 0)]
             for n in range(top + 1)}
    for ln in lines:
        n = next((k for k in range(1, top + 1) if ln.source in pos[k]), None)
        if n is None or ln.target not in pos[n - 1]:
            continue
        w = ln.weight if weight is None else weight(ln)
        cells[n][pos[n - 1][ln.target]][pos[n][ln.source]] += w
    mats = {n: IntegerMatrix.from_rows(cells[n], len(gens[n])) for n in range(top + 1)}
    return ChainComplexBundle({n: list(gens[n]) for n in range(top + 1)}, kinds, mats, top)


def build_complex(fd: FlowDataset) -> ChainComplexBundle:
    validate_flow(fd)
    return _assemble(fd.critical_points, fd.flow_lines)


def block_complexes(fd: FlowDataset, restricted: Optional[FlowDataset] = None) -> Dict[str, ChainComplexBundle]:
    """The complex of each block on its own, from the within-block lines.

    With ``restricted`` the entries come from that dataset's lines (the
    twisted complex of the Morse function on the block); otherwise from
    ``fd``'s own within-block lines.
    """
    validate_flow(fd)
    source = fd
    if restricted is not None:
        validate_flow(restricted)
        _pair_lines(fd, restricted)
        source = restricted
    blocks = fd.block_of()
    out = {}
    for b in fd.height_order:
        pts = [p for p in fd.critical_points if p.block == b]
        lines = [ln for ln in source.flow_lines
                 if blocks.get(ln.source) == b and blocks.get(ln.target) == b]
        out[b] = _assemble(pts, lines)
    return out


def d_squared_violations(cc: ChainComplexBundle) -> List[Tuple[int, str, str, int]]:
    """Nonzero entries of d_{n-1} d_n as ``(n, from_generator, to_generator, value)``."""
    out = []
    for n in range(2, cc.top + 1):
        prod = cc.boundaries[n - 1] @ cc.boundaries[n]
        for i, j, v in prod.nonzero():
            out.append((n, cc.generators[n][j], cc.generators[n - 2][i], v))
    return out


def audit_d_squared(cc: ChainComplexBundle) -> bool:
    return not d_squared_violations(cc)


def homology_polynomial(cc: ChainComplexBundle) -> IntPolynomial:
    return profile_from_boundaries(cc.sizes(), cc.boundary_list()).poincare_polynomial()


def homology_vs_reference(cc: ChainComplexBundle, expected: IntPolynomial) -> bool:
    return homology_polynomial(cc) == expected


def _pair_lines(fd: FlowDataset, restricted: FlowDataset) -> List[Tuple[FlowLine, FlowLine]]:
    groups: Dict[Tuple[str, str], List[FlowLine]] = defaultdict(list)
    for ln in restricted.flow_lines:
        groups[(ln.source, ln.target)].append(ln)
    pairs = []
    for ln in fd.within_block_lines():
        bucket = groups.get((ln.source, ln.target))
        if not bucket:
            raise FlowDataError(
                f"restricted data lacks a line {ln.source} -> {ln.target}", "restricted")
        pairs.append((ln, bucket.pop(0)))
    leftover = [(k, len(v)) for k, v in groups.items() if v]
    if leftover:
        (src, dst), _ = leftover[0]
        raise FlowDataError(
            f"restricted data has a line {src} -> {dst} with no within-block match", "restricted")
    return pairs


def audit_sign_transport(fd: FlowDataset, restricted: FlowDataset) -> bool:
    """Within every block, the sign of a line for h must equal the sign for
    the block's Morse function times the transport along it."""
    validate_flow(fd)
    validate_flow(restricted)
    return all(full.sign == part.sign * part.transport
               for full, part in _pair_lines(fd, restricted))


def top_chain(coeffs: Union[Sequence[int], Mapping[str, int]], fd: FlowDataset, degree: int) -> str:
    """Highest block (in height order) carrying a nonzero coefficient.

    ``coeffs`` is either aligned with the degree-``degree`` generators of
    ``build_complex(fd)`` or a mapping from point names to coefficients.
    """
    cc = build_complex(fd)
    gens = cc.generators.get(degree, [])
    if isinstance(coeffs, Mapping):
        unknown = [k for k in coeffs if k not in gens]
        if unknown:
            raise FlowDataError(f"{unknown} are not generators of degree {degree}", "coeffs")
        support = [k for k, v in coeffs.items() if v]
    else:
        if len(coeffs) != len(gens):
            raise FlowDataError(
                f"expected {len(gens)} coefficients for degree {degree}, got {len(coeffs)}", "coeffs")
        support = [g for g, v in zip(gens, coeffs) if v]
    if not support:
        raise FlowDataError("the zero chain has no top chain", "coeffs")
    blocks = fd.block_of()
    rank = {b: i for i, b in enumerate(fd.height_order)}
    return max((blocks[g] for g in support), key=rank.__getitem__)


def kernel_ranks_of(cc: ChainComplexBundle) -> List[int]:
    out = []
    for n in range(cc.top + 1):
        b = cc.boundaries[n]
        rank = smith_normal_form(b)[0] if b.rows and b.cols else 0
        out.append(len(cc.generators[n]) - rank)
    return out


@dataclass(frozen=True)
class KernelRankResult:
    lhs: List[int]
    rhs: List[int]

    @property
    def holds(self) -> bool:
        return all(a >= b for a, b in zip(self.lhs, self.rhs))

    def to_json(self) -> dict:
        return {"lhs": list(self.lhs), "rhs": list(self.rhs), "holds": self.holds}


def kernel_rank_inequality(fd: FlowDataset, restricted: Optional[FlowDataset] = None) -> KernelRankResult:
    """Per degree, total kernel rank over the blocks against the kernel rank of the full complex."""
    full = build_complex(fd)
    bad = d_squared_violations(full)
    if bad:
        n, p, q, v = bad[0]
        raise FlowDataError(f"∂²≠0 at ({p},{q}) in degree {n}")
    parts = block_complexes(fd, restricted)
    top = full.top
    lhs = [0] * (top + 1)
    for name, cc in parts.items():
        bad = d_squared_violations(cc)
        if bad:
            n, p, q, v = bad[0]
            raise FlowDataError(f"∂²≠0 at ({p},{q}) within block {name}")
        for n, z in enumerate(kernel_ranks_of(cc)):
            lhs[n] += z
    return KernelRankResult(lhs, kernel_ranks_of(full))


@dataclass(frozen=True)
class CountingReconstruction:
    counting: IntPolynomial
    homology: IntPolynomial
    quotient: IntPolynomial

    @property
    def holds(self) -> bool:
        return ONE_PLUS_T * self.quotient + self.homology == self.counting


def counting_reconstruction(cc: ChainComplexBundle) -> CountingReconstruction:
    """Build R_h = sum_{n>=1} (nu_n + nu_n^N - z_n) t^(n-1) from the complex.

    ``holds`` compares (1+t) R_h + P_t against the counting polynomial.
    """
    sizes = cc.sizes()
    z = kernel_ranks_of(cc)
    quotient = IntPolynomial(sizes[n] - z[n] for n in range(1, cc.top + 1))
    return CountingReconstruction(IntPolynomial(sizes), homology_polynomial(cc), quotient)
