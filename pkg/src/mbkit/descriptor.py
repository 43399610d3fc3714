"""Critical data of a Morse-Bott function on a compact manifold with boundary.

A descriptor does not know the function itself.  It records, for every
connected critical submanifold, its dimension, its Morse-Bott index, its
topology (a triangulation or a bare twisted Poincare polynomial) and the
orientation system of its negative normal bundle, split into interior
critical sets and boundary critical sets of type N and type D.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple, Union

from .errors import InputError
from .homology import CellModel, SignCocycle, homology_profile, poincare_polynomial
from .intpoly import IntPolynomial, is_nonnegative

Topology = Union[CellModel, IntPolynomial]

INTERIOR = "interior"
BOUNDARY_N = "boundary_N"
BOUNDARY_D = "boundary_D"
KINDS = (INTERIOR, BOUNDARY_N, BOUNDARY_D)


@dataclass(frozen=True)
class CriticalSubmanifold:
    name: str
    dim: int
    index: int
    topology: Topology
    # None means the trivial ("oriented") system
    orientation_system: Optional[SignCocycle] = None
    oriented_bundle: bool = True

    def twisted_poincare(self) -> IntPolynomial:
        """P_t(C; o(nu^- C)), from the triangulation or as supplied."""
        if isinstance(self.topology, CellModel):
            return poincare_polynomial(self.topology, self.orientation_system)
        if self.orientation_system is not None:
            raise InputError("a sign cocycle needs a cell model topology", self.name)
        return self.topology

    def untwisted(self) -> "CriticalSubmanifold":
        """The same submanifold with its topology collapsed to a polynomial."""
        return replace(self, topology=self.twisted_poincare(), orientation_system=None)

    def to_json(self) -> dict:
        if isinstance(self.topology, CellModel):
            topology = {"cell_model": self.topology.to_json()}
            model = self.topology
        else:
            topology = {"polynomial": self.topology.to_list()}
            model = None
        if self.orientation_system is None:
            orientation = "oriented"
        else:
            orientation = self.orientation_system.to_json(model)
        return {
            "name": self.name,
            "dim": self.dim,
            "index": self.index,
            "topology": topology,
            "orientation_system": orientation,
            "oriented_bundle": self.oriented_bundle,
        }

    @classmethod
    def from_json(cls, data, where: str) -> "CriticalSubmanifold":
        if not isinstance(data, dict):
            raise InputError("must be an object", where)
        for key in ("name", "dim", "index", "topology"):
            if key not in data:
                raise InputError("missing field", f"{where}.{key}")
        name = data["name"]
        if not isinstance(name, str) or not name:
            raise InputError("must be a nonempty string", f"{where}.name")
        dim = _int_field(data, "dim", where)
        index = _int_field(data, "index", where)
        topology = _load_topology(data["topology"], f"{where}.topology")
        raw = data.get("orientation_system", "oriented")
        if raw == "oriented":
            orientation = None
        elif isinstance(raw, dict):
            try:
                orientation = SignCocycle.from_json(raw)
            except InputError as exc:
                raise InputError(str(exc), f"{where}.orientation_system") from None
        else:
            raise InputError('must be "oriented" or {"edge_signs": [...]}',
                             f"{where}.orientation_system")
        bundle = data.get("oriented_bundle", orientation is None)
        if not isinstance(bundle, bool):
            raise InputError("must be a boolean", f"{where}.oriented_bundle")
        return cls(name, dim, index, topology, orientation, bundle)


@dataclass(frozen=True)
class MorseBottDescriptor:
    name: str
    ambient_dim: int
    manifold_homology: Topology
    manifold_oriented: bool = False
    relative_homology: Optional[Topology] = None
    interior: Tuple[CriticalSubmanifold, ...] = field(default=())
    boundary_N: Tuple[CriticalSubmanifold, ...] = field(default=())
    boundary_D: Tuple[CriticalSubmanifold, ...] = field(default=())

    def __post_init__(self):
        for kind in KINDS:
            object.__setattr__(self, kind, tuple(getattr(self, kind)))

    def submanifolds(self):
        """Yield ``(kind, position, submanifold)`` over all three lists."""
        for kind in KINDS:
            for i, sub in enumerate(getattr(self, kind)):
                yield kind, i, sub

    def by_name(self, name: str) -> Tuple[str, CriticalSubmanifold]:
        for kind, _, sub in self.submanifolds():
            if sub.name == name:
                return kind, sub
        raise KeyError(name)

    def is_fully_oriented(self) -> bool:
        return self.manifold_oriented and all(
            sub.oriented_bundle for _, _, sub in self.submanifolds())

    def manifold_poincare(self) -> IntPolynomial:
        if isinstance(self.manifold_homology, CellModel):
            return poincare_polynomial(self.manifold_homology)
        return self.manifold_homology

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "ambient_dim": self.ambient_dim,
            "manifold_oriented": self.manifold_oriented,
            "manifold_homology": _dump_topology(self.manifold_homology),
        }
        if self.relative_homology is not None:
            out["relative_homology"] = _dump_topology(self.relative_homology)
        for kind in KINDS:
            out[kind] = [sub.to_json() for sub in getattr(self, kind)]
        return out

    @classmethod
    def from_json(cls, data) -> "MorseBottDescriptor":
        if not isinstance(data, dict):
            raise InputError("descriptor must be a JSON object")
        for key in ("name", "ambient_dim", "manifold_homology"):
            if key not in data:
                raise InputError("missing field", key)
        if not isinstance(data["name"], str):
            raise InputError("must be a string", "name")
        m = _int_field(data, "ambient_dim", "")
        oriented = data.get("manifold_oriented", False)
        if not isinstance(oriented, bool):
            raise InputError("must be a boolean", "manifold_oriented")
        lists = {}
        for kind in KINDS:
            raw = data.get(kind, [])
            if not isinstance(raw, list):
                raise InputError("must be an array", kind)
            lists[kind] = tuple(
                CriticalSubmanifold.from_json(item, f"{kind}[{i}]") for i, item in enumerate(raw))
        relative = data.get("relative_homology")
        return cls(
            name=data["name"],
            ambient_dim=m,
            manifold_homology=_load_topology(data["manifold_homology"], "manifold_homology"),
            manifold_oriented=oriented,
            relative_homology=None if relative is None
            else _load_topology(relative, "relative_homology"),
            **lists,
        )


def _int_field(data: dict, key: str, where: str) -> int:
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError("must be an integer", f"{where}.{key}" if where else key)
    return value


def _load_topology(data, where: str) -> Topology:
    if not isinstance(data, dict) or len(data) != 1:
        raise InputError('expected {"polynomial": [...]} or {"cell_model": {...}}', where)
    if "polynomial" in data:
        coeffs = data["polynomial"]
        if not isinstance(coeffs, list) or any(
                isinstance(c, bool) or not isinstance(c, int) for c in coeffs):
            raise InputError("must be an array of integers", f"{where}.polynomial")
        return IntPolynomial(coeffs)
    if "cell_model" in data:
        try:
            return CellModel.from_json(data["cell_model"])
        except InputError as exc:
            raise InputError(str(exc), where) from None
    raise InputError('expected {"polynomial": [...]} or {"cell_model": {...}}', where)


def _dump_topology(t: Topology) -> dict:
    if isinstance(t, CellModel):
        return {"cell_model": t.to_json()}
    return {"polynomial": t.to_list()}


def load_descriptor(path) -> MorseBottDescriptor:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                         str(path)) from None
    return MorseBottDescriptor.from_json(data)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _check_topology(t: Topology, dim: int, where: str) -> List[str]:
    out = []
    if isinstance(t, CellModel):
        if not t.vertices:
            out.append(f"{where}: empty cell model")
        elif t.dim != dim:
            out.append(f"{where}: cell model has dimension {t.dim}, expected {dim}")
    else:
        if not is_nonnegative(t):
            out.append(f"{where}: Poincare polynomial has a negative coefficient")
        if t.degree > dim:
            out.append(f"{where}: Poincare polynomial degree {t.degree} exceeds dimension {dim}")
    return out


def validate(d: MorseBottDescriptor) -> List[str]:
    """Every structural violation of ``d``; an empty list means valid."""
    out: List[str] = []
    m = d.ambient_dim
    if m < 0:
        return [f"ambient_dim: must be nonnegative, got {m}"]

    out += _check_topology(d.manifold_homology, m, "manifold_homology")
    if isinstance(d.manifold_homology, CellModel) and d.manifold_homology.vertices:
        h0 = homology_profile(d.manifold_homology).free_ranks[0]
        if h0 != 1:
            out.append(f"manifold_homology: cell model is not connected (H0 rank {h0})")
    if d.relative_homology is not None:
        out += _check_topology(d.relative_homology, m, "relative_homology")

    if not (d.interior or d.boundary_N or d.boundary_D):
        out.append("critical data: no critical submanifolds at all")

    seen = {}
    for kind, i, sub in d.submanifolds():
        where = f"{kind}[{i}] ({sub.name})"
        if sub.name in seen:
            out.append(f"{where}.name: name collision with {seen[sub.name]}")
        else:
            seen[sub.name] = f"{kind}[{i}]"

        # interior sets sit in Int M, boundary sets in the (m-1)-manifold dM
        if kind == INTERIOR:
            index_cap, index_text = m - sub.dim, "m − dim"
        else:
            index_cap, index_text = (m - 1) - sub.dim, "(m − 1) − dim"
        if sub.dim < 0:
            out.append(f"{where}.dim: must be nonnegative, got {sub.dim}")
        elif sub.dim > m - 1:
            out.append(f"{where}.dim: dim exceeds m − 1 ({sub.dim} > {m - 1})")
        if sub.index < 0:
            out.append(f"{where}.index: must be nonnegative, got {sub.index}")
        elif sub.index > index_cap:
            out.append(f"{where}.index: index exceeds {index_text} ({sub.index} > {index_cap})")

        out += _check_topology(sub.topology, sub.dim, f"{where}.topology")
        if sub.orientation_system is not None:
            if not isinstance(sub.topology, CellModel):
                out.append(f"{where}.orientation_system: a sign cocycle needs a cell model topology")
            else:
                out += [f"{where}.orientation_system: {v}"
                        for v in sub.orientation_system.violations(sub.topology)]
            if sub.oriented_bundle and not sub.orientation_system.is_trivial():
                out.append(f"{where}.oriented_bundle: declared oriented but the "
                           "orientation system has nontrivial signs")
    return out


def require_valid(d: MorseBottDescriptor) -> None:
    problems = validate(d)
    if problems:
        raise InputError("; ".join(problems), d.name)


def negate(d: MorseBottDescriptor) -> MorseBottDescriptor:
    """Critical data of ``-f``.

    Interior indices become ``m - dim - index``; type N and type D trade
    places and boundary indices become ``(m - 1) - dim - index``.  Only the
    fully oriented case is supported: otherwise the orientation system of
    the flipped negative bundle is not determined by the data.
    """
    if not d.manifold_oriented:
        raise InputError("negation needs an oriented manifold", "manifold_oriented")
    unoriented = [sub.name for _, _, sub in d.submanifolds() if not sub.oriented_bundle]
    if unoriented:
        raise InputError(f"negation needs oriented negative bundles; not oriented: {unoriented}",
                         "oriented_bundle")
    m = d.ambient_dim

    def flip(sub: CriticalSubmanifold, ambient: int) -> CriticalSubmanifold:
        return replace(sub, index=ambient - sub.dim - sub.index)

    return replace(
        d,
        interior=tuple(flip(s, m) for s in d.interior),
        boundary_N=tuple(flip(s, m - 1) for s in d.boundary_D),
        boundary_D=tuple(flip(s, m - 1) for s in d.boundary_N),
    )
