"""Integral homology of finite simplicial complexes, optionally twisted by a
rank-one local system with monodromy in {+1, -1}.

The twist is a sign on every edge.  The fiber of a simplex lives at its
minimal vertex, so the only face whose fiber moves is face 0 (obtained by
dropping the minimal vertex); its incidence picks up the sign of the edge
from the old minimal vertex to the new one.  With that convention the
cocycle condition on triangles is exactly what makes the boundary square
to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from .errors import CocycleError, InputError
from .intpoly import IntPolynomial, reverse

Vertex = Hashable
Simplex = Tuple[Vertex, ...]


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        if not self.entries:
            object.__setattr__(
                self, "entries", tuple((0,) * self.cols for _ in range(self.rows)))
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("matrix entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None):
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for r in self.entries:
            out.append(tuple(
                sum(r[k] * other.entries[k][j] for k in range(self.cols) if r[k])
                for j in range(other.cols)))
        return IntegerMatrix(self.rows, other.cols, tuple(out))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def nonzero(self):
        for i, r in enumerate(self.entries):
            for j, x in enumerate(r):
                if x:
                    yield i, j, x

    def to_list(self) -> List[List[int]]:
        return [list(r) for r in self.entries]


def smith_normal_form(m: IntegerMatrix) -> Tuple[int, List[int]]:
    """Rank and elementary divisors ``d1 | d2 | ... | d_rank`` of ``m``.

    Elimination pivots on the entry of smallest absolute value in the
    remaining block; a pivot that fails to divide the rest of the block is
    fixed by folding the offending row into the pivot row.
    """
    a = [list(r) for r in m.entries]
    nrows, ncols = m.rows, m.cols
    divisors: List[int] = []
    t = 0
    while t < min(nrows, ncols):
        pivot = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[t], a[pi] = a[pi], a[t]
        for r in a:
            r[t], r[pj] = r[pj], r[t]

        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, ncols):
                            ri[j] -= q * rt[j]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for i in range(t, nrows):
                            a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        dirty = True
            if dirty:
                # a remainder smaller than the pivot survived; re-pivot on it
                best = (t, t)
                for i in range(t, nrows):
                    if a[i][t] and abs(a[i][t]) < abs(a[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t, ncols):
                    if a[t][j] and abs(a[t][j]) < abs(a[best[0]][best[1]]):
                        best = (t, j)
                bi, bj = best
                a[t], a[bi] = a[bi], a[t]
                for r in a:
                    r[t], r[bj] = r[bj], r[t]
                continue
            bad = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            for j in range(t, ncols):
                a[t][j] += a[bad][j]
        divisors.append(abs(a[t][t]))
        t += 1
    return len(divisors), divisors


class CellModel:
    """Finite simplicial complex with a total order on its vertices.

    Simplices are stored with vertices in ascending order, which fixes
    their orientation.  The constructor closes the input under faces.
    """

    __slots__ = ("vertices", "simplices", "_rank", "_index")

    def __init__(self, vertices: Iterable[Vertex], simplices: Iterable[Iterable[Vertex]] = ()):
        verts = tuple(vertices)
        for v in verts:
            if isinstance(v, bool) or not isinstance(v, (int, str)):
                raise InputError(f"vertex ids must be integers or strings, got {v!r}", "vertices")
        if len(set(verts)) != len(verts):
            raise InputError("duplicate vertex id", "vertices")
        rank = {v: i for i, v in enumerate(verts)}
        closed = {(v,) for v in verts}
        for s in simplices:
            s = list(s)
            if not s:
                raise InputError("empty simplex", "simplices")
            missing = [v for v in s if v not in rank]
            if missing:
                raise InputError(f"simplex {s} uses undeclared vertex {missing[0]!r}", "simplices")
            if len(set(s)) != len(s):
                raise InputError(f"simplex {s} repeats a vertex", "simplices")
            s = tuple(sorted(s, key=rank.__getitem__))
            for k in range(1, len(s) + 1):
                closed.update(combinations(s, k))
        by_dim: Dict[int, List[Simplex]] = {}
        for s in closed:
            by_dim.setdefault(len(s) - 1, []).append(s)
        top = max(by_dim) if by_dim else -1
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "_rank", rank)
        object.__setattr__(self, "simplices", tuple(
            tuple(sorted(by_dim.get(k, ()), key=lambda s: tuple(rank[v] for v in s)))
            for k in range(top + 1)))
        object.__setattr__(self, "_index", tuple(
            {s: i for i, s in enumerate(level)} for level in self.simplices))

    def __setattr__(self, name, value):
        raise AttributeError("CellModel is immutable")

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def count(self, k: int) -> int:
        return len(self.simplices[k]) if 0 <= k < len(self.simplices) else 0

    def cell_counts(self) -> List[int]:
        return [len(level) for level in self.simplices]

    def index_of(self, simplex: Simplex) -> int:
        return self._index[len(simplex) - 1][simplex]

    def sort_simplex(self, simplex: Iterable[Vertex]) -> Simplex:
        return tuple(sorted(simplex, key=self._rank.__getitem__))

    def contains(self, simplex: Iterable[Vertex]) -> bool:
        try:
            s = self.sort_simplex(simplex)
        except KeyError:
            return False
        return 0 < len(s) <= len(self.simplices) and s in self._index[len(s) - 1]

    def facets(self) -> List[Simplex]:
        """Maximal simplices, in dimension then vertex order."""
        covered = set()
        for level in self.simplices[1:]:
            for s in level:
                covered.update(combinations(s, len(s) - 1))
        return [s for level in self.simplices for s in level if s not in covered]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CellModel):
            return NotImplemented
        return self.vertices == other.vertices and self.simplices == other.simplices

    def __hash__(self) -> int:
        return hash((self.vertices, self.simplices))

    def __repr__(self) -> str:
        return f"CellModel(vertices={len(self.vertices)}, counts={self.cell_counts()})"

    @classmethod
    def from_json(cls, data) -> "CellModel":
        if not isinstance(data, dict):
            raise InputError("cell model must be an object", "cell_model")
        if "simplices" not in data:
            raise InputError("missing field", "cell_model.simplices")
        simplices = data["simplices"]
        if not isinstance(simplices, list) or not all(isinstance(s, list) for s in simplices):
            raise InputError("must be an array of vertex arrays", "cell_model.simplices")
        vertices = data.get("vertices")
        if vertices is None:
            try:
                vertices = sorted({v for s in simplices for v in s})
            except TypeError:
                raise InputError("mixed vertex id types need an explicit vertex list",
                                 "cell_model.vertices") from None
        if not isinstance(vertices, list):
            raise InputError("must be an array", "cell_model.vertices")
        return cls(vertices, simplices)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "simplices": [list(s) for s in self.facets()]}


class SignCocycle:
    """Edge signs of a rank-one local system; unlisted edges carry +1."""

    __slots__ = ("_signs",)

    def __init__(self, edge_signs=None):
        if isinstance(edge_signs, dict):
            edge_signs = [(u, v, s) for (u, v), s in edge_signs.items()]
        signs: Dict[FrozenSet, int] = {}
        for u, v, s in edge_signs or ():
            if s not in (1, -1) or isinstance(s, bool):
                raise InputError(f"edge sign for ({u!r}, {v!r}) must be +1 or -1, got {s!r}",
                                 "edge_signs")
            if u == v:
                raise InputError(f"edge ({u!r}, {v!r}) is a loop", "edge_signs")
            key = frozenset((u, v))
            if key in signs and signs[key] != s:
                raise InputError(f"conflicting signs for edge ({u!r}, {v!r})", "edge_signs")
            signs[key] = s
        object.__setattr__(self, "_signs", signs)

    def __setattr__(self, name, value):
        raise AttributeError("SignCocycle is immutable")

    def sign(self, u: Vertex, v: Vertex) -> int:
        return self._signs.get(frozenset((u, v)), 1)

    def items(self):
        return self._signs.items()

    def is_trivial(self) -> bool:
        return all(s == 1 for s in self._signs.values())

    def flip_vertex(self, model: CellModel, v: Vertex) -> "SignCocycle":
        """Gauge transformation at ``v``: negate every edge sign touching it."""
        signs = {}
        for a, b in model.simplices[1] if model.dim >= 1 else ():
            s = self.sign(a, b)
            signs[(a, b)] = -s if v in (a, b) else s
        return SignCocycle(signs)

    def violations(self, model: CellModel) -> List[str]:
        out = []
        for key in self._signs:
            if not model.contains(tuple(key)):
                out.append(f"edge {sorted(key, key=repr)} is not an edge of the model")
        if model.dim >= 2:
            for a, b, c in model.simplices[2]:
                prod = self.sign(a, b) * self.sign(b, c) * self.sign(a, c)
                if prod != 1:
                    out.append(f"cocycle violated on 2-simplex {[a, b, c]}")
        return out

    def check(self, model: CellModel) -> None:
        for key in self._signs:
            if not model.contains(tuple(key)):
                raise InputError(f"edge {sorted(key, key=repr)} is not an edge of the model",
                                 "edge_signs")
        if model.dim >= 2:
            for a, b, c in model.simplices[2]:
                prod = self.sign(a, b) * self.sign(b, c) * self.sign(a, c)
                if prod != 1:
                    raise CocycleError((a, b, c), prod)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignCocycle):
            return NotImplemented
        mine = {k: s for k, s in self._signs.items() if s == -1}
        theirs = {k: s for k, s in other._signs.items() if s == -1}
        return mine == theirs

    def __hash__(self) -> int:
        return hash(frozenset(k for k, s in self._signs.items() if s == -1))

    def __repr__(self) -> str:
        neg = sorted((sorted(k, key=repr) for k, s in self._signs.items() if s == -1), key=repr)
        return f"SignCocycle(negative_edges={neg})"

    @classmethod
    def from_json(cls, data) -> "SignCocycle":
        if not isinstance(data, dict) or "edge_signs" not in data:
            raise InputError("expected an object with an edge_signs array", "orientation_system")
        rows = data["edge_signs"]
        if not isinstance(rows, list):
            raise InputError("must be an array", "edge_signs")
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != 3:
                raise InputError(f"entry {i} must be [u, v, sign]", "edge_signs")
        return cls([tuple(row) for row in rows])

    def to_json(self, model: Optional[CellModel] = None) -> dict:
        rows = []
        for key, s in self._signs.items():
            if s == -1:
                pair = model.sort_simplex(key) if model is not None else sorted(key, key=repr)
                rows.append([pair[0], pair[1], -1])
        if model is not None:
            rows.sort(key=lambda r: model.index_of(model.sort_simplex(r[:2])))
        else:
            rows.sort(key=repr)
        return {"edge_signs": rows}


@dataclass(frozen=True)
class HomologyProfile:
    free_ranks: Tuple[int, ...]
    torsion: Tuple[Tuple[int, ...], ...]

    def poincare_polynomial(self) -> IntPolynomial:
        return IntPolynomial(self.free_ranks)

    def torsion_text(self) -> str:
        parts = [f"{list(t)} in degree {k}" for k, t in enumerate(self.torsion) if t]
        return "none" if not parts else "; ".join(parts)

    def to_json(self) -> dict:
        return {"free_ranks": list(self.free_ranks),
                "torsion": [list(t) for t in self.torsion]}


def boundary_matrices(model: CellModel, twist: Optional[SignCocycle] = None) -> List[IntegerMatrix]:
    """Boundary operators ``d_k: C_k -> C_{k-1}`` for ``k = 0..dim``.

    Rows index (k-1)-simplices and columns index k-simplices, both in the
    model's storage order.  ``d_0`` is the empty ``0 x #vertices`` matrix.
    """
    if twist is not None:
        twist.check(model)
    mats = [IntegerMatrix(0, model.count(0))]
    for k in range(1, model.dim + 1):
        rows = [[0] * model.count(k) for _ in range(model.count(k - 1))]
        for col, s in enumerate(model.simplices[k]):
            for i in range(k + 1):
                face = s[:i] + s[i + 1:]
                sign = -1 if i % 2 else 1
                if i == 0 and twist is not None:
                    sign *= twist.sign(s[0], s[1])
                rows[model.index_of(face)][col] += sign
        mats.append(IntegerMatrix.from_rows(rows, model.count(k)))
    return mats


def profile_from_boundaries(sizes: Sequence[int], boundaries: Sequence[IntegerMatrix]) -> HomologyProfile:
    """Homology of a chain complex given as ``boundaries[k]: C_k -> C_{k-1}``."""
    top = len(sizes)
    snf = [smith_normal_form(b) if b.rows and b.cols else (0, []) for b in boundaries]
    snf += [(0, [])] * (top + 1 - len(snf))
    free, torsion = [], []
    for k in range(top):
        free.append(sizes[k] - snf[k][0] - snf[k + 1][0])
        torsion.append(tuple(d for d in snf[k + 1][1] if d > 1))
    return HomologyProfile(tuple(free), tuple(torsion))


@lru_cache(maxsize=512)
def homology_profile(model: CellModel, twist: Optional[SignCocycle] = None) -> HomologyProfile:
    return profile_from_boundaries(model.cell_counts(), boundary_matrices(model, twist))


def poincare_polynomial(model: CellModel, twist: Optional[SignCocycle] = None) -> IntPolynomial:
    if not model.vertices:
        raise InputError("empty cell model", "cell_model")
    return homology_profile(model, twist).poincare_polynomial()


def kernel_ranks(model: CellModel, twist: Optional[SignCocycle] = None) -> List[int]:
    """Free rank of ``ker d_k`` for each k, computed from the SNF rank."""
    out = []
    for k, b in enumerate(boundary_matrices(model, twist)):
        rank = smith_normal_form(b)[0] if b.rows and b.cols else 0
        out.append(model.count(k) - rank)
    return out


def boundary_subcomplex(model: CellModel) -> FrozenSet[Simplex]:
    """Simplices of the boundary of a pure triangulated manifold: every
    codimension-one face lying in exactly one top simplex, with its faces."""
    top = model.dim
    if top < 1:
        return frozenset()
    incidence: Dict[Simplex, int] = {}
    for s in model.simplices[top]:
        for face in combinations(s, top):
            incidence[face] = incidence.get(face, 0) + 1
    out = set()
    for face, n in incidence.items():
        if n == 1:
            for k in range(1, len(face) + 1):
                out.update(combinations(face, k))
    return frozenset(out)


def relative_profile(model: CellModel, subcomplex: Iterable[Simplex]) -> HomologyProfile:
    """Homology of the pair (model, subcomplex) from the quotient complex."""
    sub = set(subcomplex)
    keep = [[s for s in level if s not in sub] for level in model.simplices]
    pos = [{s: i for i, s in enumerate(level)} for level in keep]
    mats = [IntegerMatrix(0, len(keep[0]) if keep else 0)]
    for k in range(1, len(keep)):
        rows = [[0] * len(keep[k]) for _ in range(len(keep[k - 1]))]
        for col, s in enumerate(keep[k]):
            for i in range(k + 1):
                face = s[:i] + s[i + 1:]
                if face in pos[k - 1]:
                    rows[pos[k - 1][face]][col] += -1 if i % 2 else 1
        mats.append(IntegerMatrix.from_rows(rows, len(keep[k])))
    return profile_from_boundaries([len(level) for level in keep], mats)


def relative_poincare_polynomial(model: CellModel) -> IntPolynomial:
    """P_t(M, dM) for a triangulated manifold M with its detected boundary."""
    return relative_profile(model, boundary_subcomplex(model)).poincare_polynomial()


def poincare_duality_check(model: CellModel, dim: int) -> bool:
    p = poincare_polynomial(model)
    if p.degree > dim:
        return False
    return reverse(p, dim) == p
