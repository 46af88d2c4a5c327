"""Exact facets and face lattices of polyhedral cones spanned by rank-one points.

Points live in the 8-dimensional coordinate space of Hermitian forms and
functionals are forms too, acting through the scalar product <f, x>.  A facet
carries its inner normal: <f, x> = 0 on the facet and > 0 on every other point.

Two independent facet algorithms are provided: double description
(``facets``) and a gift-wrapping adjacency walk (``facets_by_walk``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from cyclovoronoi import linalg
from cyclovoronoi.hermitian import HermForm, dual_coords

DIM = 8


class RankDeficient(ValueError):
    """The points do not span the ambient space."""

    def __init__(self, rank: int, dim: int):
        super().__init__(f"points span a subspace of rank {rank} < {dim}")
        self.rank = rank
        self.dim = dim


@dataclass(frozen=True)
class PointConfig:
    points: tuple[tuple, ...]
    labels: tuple = ()

    @classmethod
    def build(cls, points: Iterable[Sequence], labels: Iterable = ()) -> "PointConfig":
        pts = [tuple(p) for p in points]
        labels = tuple(labels)
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate points in configuration")
        return cls(tuple(pts), labels)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class Facet:
    vertices: frozenset
    functional: tuple
    dim: int = DIM - 1

    @property
    def form(self) -> HermForm:
        return HermForm.from_coords(self.functional)

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.vertices)

    def to_json(self) -> dict:
        return {"vertices": sorted(self.vertices), "functional": self.form.to_json()}


def _dot(f: Sequence[int], w: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(f, w))


def _integer_points(config: PointConfig) -> list[tuple[int, ...]]:
    """Dual vectors P x scaled to integers (scaling each point by a positive rational
    changes no incidence)."""
    return [linalg.primitive_int(dual_coords(p)) for p in config.points]


def _check_full_rank(rows: list[tuple[int, ...]]) -> None:
    if not rows:
        raise ValueError("empty point configuration")
    r = linalg.int_rank(rows)
    if r < DIM:
        raise RankDeficient(r, DIM)


def _make_facet(f: Sequence[int], rows: list[tuple[int, ...]]) -> Facet:
    vals = [_dot(f, w) for w in rows]
    if any(v < 0 for v in vals):
        raise ArithmeticError("facet functional is negative on a point")
    verts = frozenset(i for i, v in enumerate(vals) if v == 0)
    return Facet(verts, tuple(f))


def facets(config: PointConfig) -> list[Facet]:
    """Facets of the cone on ``config`` by the double description method."""
    rows = _integer_points(config)
    _check_full_rank(rows)
    n = len(rows)

    # initial simplex: first DIM independent rows in order
    basis_idx: list[int] = []
    for i in range(n):
        if linalg.int_rank([rows[j] for j in basis_idx] + [rows[i]]) > len(basis_idx):
            basis_idx.append(i)
            if len(basis_idx) == DIM:
                break
    bmat = [rows[i] for i in basis_idx]
    rays: list[tuple[int, ...]] = []
    for k in range(DIM):
        rhs = [Fraction(int(j == k)) for j in range(DIM)]
        sol = linalg.solve_unique(bmat, rhs)
        rays.append(linalg.primitive_int(sol))

    processed = list(basis_idx)
    pos_of = {idx: p for p, idx in enumerate(processed)}

    def zero_mask(r: Sequence[int]) -> int:
        m = 0
        for p, idx in enumerate(processed):
            if _dot(r, rows[idx]) == 0:
                m |= 1 << p
        return m

    zmasks = [zero_mask(r) for r in rays]
    for i in range(n):
        if i in pos_of:
            continue
        w = rows[i]
        vals = [_dot(r, w) for r in rays]
        plus = [k for k, v in enumerate(vals) if v > 0]
        minus = [k for k, v in enumerate(vals) if v < 0]
        zero = [k for k, v in enumerate(vals) if v == 0]
        new_rays = []
        for a in plus:
            for b in minus:
                common = zmasks[a] & zmasks[b]
                if bin(common).count("1") < DIM - 2:
                    continue
                # combinatorial adjacency: no third ray is tight on all of `common`
                if any(
                    k != a and k != b and (zmasks[k] & common) == common
                    for k in itertools.chain(plus, minus, zero)
                ):
                    continue
                va, vb = vals[a], -vals[b]
                r = tuple(va * x + vb * y for x, y in zip(rays[b], rays[a]))
                new_rays.append(linalg.primitive_int(r))
        keep = plus + zero
        processed.append(i)
        pos_of[i] = len(processed) - 1
        bit = 1 << (len(processed) - 1)
        rays = [rays[k] for k in keep] + new_rays
        zmasks = [zmasks[k] | (bit if vals[k] == 0 else 0) for k in keep] + [
            zero_mask(r) for r in new_rays
        ]
    out = [_make_facet(r, rows) for r in rays]
    return _sorted_facets(out)


def _sorted_facets(fs: Iterable[Facet]) -> list[Facet]:
    return sorted(fs, key=lambda f: (-len(f.vertices), sorted(f.vertices)))


# ---------------------------------------------------------------------------
# second method: gift wrapping


def _nullspace_int(rows: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    return [linalg.primitive_int(v) for v in linalg.nullspace(rows, DIM)]


def _parallel(f: Sequence[int], g: Sequence[int]) -> bool:
    return linalg.int_rank([tuple(f), tuple(g)]) < 2


def _initial_facet(rows: list[tuple[int, ...]], positive: tuple[int, ...]) -> tuple[int, ...]:
    f = positive
    while True:
        tight = [w for w in rows if _dot(f, w) == 0]
        if tight and linalg.int_rank(tight) == DIM - 1:
            return linalg.primitive_int(f)
        ns = _nullspace_int(tight) if tight else [tuple(int(i == j) for j in range(DIM)) for i in range(DIM)]
        g = next(v for v in ns if not _parallel(v, f))
        if all(_dot(g, w) <= 0 for w in rows):
            g = tuple(-x for x in g)
        ratios = [Fraction(_dot(f, w), _dot(g, w)) for w in rows if _dot(g, w) > 0]
        lam = min(ratios)
        f = linalg.primitive_int([Fraction(a) - lam * b for a, b in zip(f, g)])


def _ridges(f: tuple[int, ...], verts: list[int], rows: list[tuple[int, ...]]) -> list[tuple[frozenset, tuple[int, ...]]]:
    """Ridges of the facet with normal f, each with a functional vanishing on the ridge
    and positive on the rest of the facet."""
    found: dict[frozenset, tuple[int, ...]] = {}
    for sub in itertools.combinations(verts, DIM - 2):
        if any(set(sub) <= r for r in found):
            continue
        srows = [rows[i] for i in sub]
        if linalg.int_rank(srows) < DIM - 2:
            continue
        ns = _nullspace_int(srows)
        g = next(v for v in ns if not _parallel(v, f))
        vals = {i: _dot(g, rows[i]) for i in verts}
        if all(v >= 0 for v in vals.values()):
            pass
        elif all(v <= 0 for v in vals.values()):
            g = tuple(-x for x in g)
            vals = {i: -v for i, v in vals.items()}
        else:
            continue
        ridge = frozenset(i for i, v in vals.items() if v == 0)
        found[ridge] = g
    return list(found.items())


def facets_by_walk(config: PointConfig, positive=None) -> list[Facet]:
    """Facets by rotating around ridges, starting from one facet found by tilting
    a strictly positive functional.  ``positive`` defaults to the sum of the points,
    which is strictly positive on any set of nonzero positive semidefinite points."""
    rows = _integer_points(config)
    _check_full_rank(rows)
    if positive is None:
        positive = [sum(p[i] for p in config.points) for i in range(DIM)]
    positive = linalg.primitive_int(positive)
    if any(_dot(positive, w) <= 0 for w in rows):
        raise ValueError("supplied functional is not strictly positive on the points")
    start = _initial_facet(rows, positive)
    seen: dict[frozenset, tuple[int, ...]] = {}
    stack = [start]
    while stack:
        f = stack.pop()
        verts = frozenset(i for i, w in enumerate(rows) if _dot(f, w) == 0)
        if verts in seen:
            continue
        seen[verts] = f
        outside = [w for i, w in enumerate(rows) if i not in verts]
        for ridge, g in _ridges(f, sorted(verts), rows):
            nu = max(Fraction(-_dot(g, w), _dot(f, w)) for w in outside)
            f2 = linalg.primitive_int([Fraction(a) + nu * b for a, b in zip(g, f)])
            v2 = frozenset(i for i, w in enumerate(rows) if _dot(f2, w) == 0)
            if v2 not in seen:
                stack.append(f2)
    return _sorted_facets(_make_facet(f, rows) for f in seen.values())


# ---------------------------------------------------------------------------
# face lattice


@dataclass
class FaceLattice:
    n_points: int
    faces: dict[int, list[int]]  # rank -> sorted vertex bitmasks
    covers: dict[int, list[int]] = field(default_factory=dict)  # face -> faces of rank one less

    def by_rank(self, r: int) -> list[int]:
        return self.faces.get(r, [])

    def counts(self) -> dict[int, int]:
        return {r: len(v) for r, v in sorted(self.faces.items())}

    def all_faces(self) -> Iterable[tuple[int, int]]:
        for r in sorted(self.faces, reverse=True):
            for m in self.faces[r]:
                yield r, m


def mask_to_indices(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def face_rank(config: PointConfig, mask: int) -> int:
    rows = [linalg.primitive_int(config.points[i]) for i in mask_to_indices(mask)]
    return linalg.int_rank(rows)


def face_lattice(config: PointConfig, facet_list: Sequence[Facet]) -> FaceLattice:
    """All nonempty faces, as intersections of facets, graded by the rank of their span."""
    n = len(config)
    full = (1 << n) - 1
    fmasks = sorted({f.mask for f in facet_list})
    for m in fmasks:
        if m == full or m == 0:
            raise ValueError("inconsistent facet list")
    seen = set(fmasks)
    frontier = list(fmasks)
    while frontier:
        nxt = []
        for m in frontier:
            for fm in fmasks:
                x = m & fm
                if x and x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    seen.add(full)
    graded: dict[int, list[int]] = {}
    for m in seen:
        graded.setdefault(face_rank(config, m), []).append(m)
    for r in graded:
        graded[r].sort(key=lambda m: (bin(m).count("1"), mask_to_indices(m)))
    lat = FaceLattice(n, graded)
    ranks = sorted(graded)
    for r in ranks:
        lower = graded.get(r - 1, [])
        for m in graded[r]:
            lat.covers[m] = [x for x in lower if x & m == x]
    # grading sanity: every proper face is covered by a face of rank one higher
    for r in ranks:
        if r == max(ranks):
            continue
        upper = graded.get(r + 1, [])
        for m in graded[r]:
            if not any(u & m == m for u in upper):
                raise ArithmeticError("face lattice is not graded")
    return lat
