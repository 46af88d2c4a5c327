"""Perfect forms over Q(zeta_5), Voronoi neighbours and the classification of cones.

The top cone of a perfect form phi is spanned by the q-points of its minimal
vectors.  Its facets lead to neighbouring perfect forms; comparing those with
the known classes up to GL_2(O) closes the traversal.  The faces of the top
cone, taken modulo GL_2(O), give every Voronoi cone.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from cyclovoronoi import golden, linalg
from cyclovoronoi.conjugacy import INFINITE, Config, GroupRecord, find_conjugator, stabilizer
from cyclovoronoi.cyclotomic import OMEGA, ONE, ZERO, ZETA
from cyclovoronoi.hermitian import (
    GMat,
    HermForm,
    MinData,
    OVec,
    act,
    dual_coords,
    evaluate,
    gram_matrix,
    is_positive_definite,
    minimum_and_vectors,
    q_coords,
    torsion_reps,
    vectors_below,
)
from cyclovoronoi.polyhedra import Facet, PointConfig, face_lattice, facets, mask_to_indices

log = logging.getLogger(__name__)


class VerificationError(AssertionError):
    """A computed quantity disagrees with the reference data."""


# ---------------------------------------------------------------------------
# the reference perfect form and its minimal vectors

_z = ZETA


def reference_form() -> HermForm:
    a = (_z**3 + _z**2 + 3) / 5
    b = (_z**3 - _z**2 + _z - 1) / 5
    b_low = (-2 * _z**3 - _z - 2) / 5
    return HermForm.from_matrix([[a, b], [b_low, a]])


def reference_vectors() -> list[OVec]:
    """The 24 minimal vectors modulo torsion, in the listed order (1-based labels)."""
    w = OMEGA
    wi = OMEGA.inverse()
    z = _z
    cols = [
        (1 - z, z**3 + 1),
        (1 - z**3, ONE),
        (ONE, -w),
        (ONE, -(z**2)),
        (ONE, ZERO),
        (ONE, z**3),
        (ONE, 1 - z**2),
        (ONE, ONE),
        (ONE, z**3 + 1),
        (ONE, z + 1),
        (ONE, z**3 + z + 1),
        (ONE, -(z**4)),
        (wi, z**4),
        (wi, z**4 - 1),
        (wi, -ONE),
        (wi, -(z**3) - 1),
        (wi, -(z**3) - z**2 - 1),
        (w, w + 1),
        (w, -(z**3)),
        (w, ZERO),
        (w, z**2),
        (w, w),
        (ZERO, ONE),
        (ZERO, w),
    ]
    return [OVec(a, b) for a, b in cols]


# ---------------------------------------------------------------------------
# records


@dataclass
class PerfectFormRecord:
    form: HermForm
    min_data: MinData
    vectors: tuple[OVec, ...]
    q_points: PointConfig
    facets: list[Facet]
    stabilizer: GroupRecord | None = None

    @cached_property
    def config(self) -> Config:
        return Config(self.vectors)

    def facet_vectors(self, facet: Facet) -> list[OVec]:
        return [self.vectors[i] for i in sorted(facet.vertices)]

    def ensure_stabilizer(self) -> GroupRecord:
        if self.stabilizer is None:
            self.stabilizer = stabilizer(self.config)
        return self.stabilizer


def perfect_record(
    form: HermForm,
    order: Sequence[OVec] | None = None,
    with_stabilizer: bool = True,
) -> PerfectFormRecord:
    md = minimum_and_vectors(form)
    if md.minimum != 1:
        raise ValueError(f"perfect form records are normalized to minimum 1, got {md.minimum}")
    reps = list(md.reps_mod_torsion)
    if order is not None:
        order = list(order)
        if sorted(v.canonical().coords for v in order) != sorted(v.coords for v in reps):
            raise VerificationError("requested vertex order does not match the minimal vectors")
        reps = order
    pts = PointConfig.build([q_coords(v) for v in reps])
    if linalg.rank([p for p in pts.points]) != 8:
        raise ValueError("form is not perfect: q-points of its minimal vectors do not span")
    rec = PerfectFormRecord(form, md, tuple(reps), pts, facets(pts))
    for v in reps:
        if evaluate(form, v) != 1:
            raise ArithmeticError("pairing normalization violated")
    if with_stabilizer:
        rec.ensure_stabilizer()
    return rec


def verify_initial_form(with_stabilizer: bool = True) -> PerfectFormRecord:
    """Check the reference perfect form and return its record (listed vertex order)."""
    g = golden.load()["initial_form"]
    phi = reference_form()
    problems = []
    if phi.b.conj() != (-2 * _z**3 - _z - 2) / 5:
        problems.append("lower-left entry is not the conjugate of the upper-right entry")
    if not is_positive_definite(phi):
        raise VerificationError("reference form is not positive definite")
    md = minimum_and_vectors(phi)
    if md.minimum != Fraction(g["minimum"]):
        problems.append(f"minimum {md.minimum} != {g['minimum']}")
    if len(md.vectors) != g["minimal_vectors"]:
        problems.append(f"{len(md.vectors)} minimal vectors != {g['minimal_vectors']}")
    if len(md.reps_mod_torsion) != g["reps_mod_torsion"]:
        problems.append(f"{len(md.reps_mod_torsion)} torsion orbits != {g['reps_mod_torsion']}")
    listed = {v.canonical() for v in reference_vectors()}
    found = set(md.reps_mod_torsion)
    if listed != found:
        missing = sorted(str(v) for v in listed - found)
        extra = sorted(str(v) for v in found - listed)
        problems.append(f"minimal vectors differ from the list: missing {missing}, extra {extra}")
    if problems:
        raise VerificationError("; ".join(problems))
    rec = perfect_record(phi, order=reference_vectors(), with_stabilizer=with_stabilizer)
    return rec


# ---------------------------------------------------------------------------
# finding perfect forms


def _vectors_strictly_below(psi: HermForm, m: Fraction) -> list[OVec]:
    return [v for v, val in vectors_below(psi, m) if val < m]


def voronoi_step(phi: HermForm, direction: HermForm, m: Fraction = Fraction(1)) -> HermForm:
    """phi + rho*direction for the largest rho keeping the minimum equal to m.

    ``direction`` must vanish on the minimal vectors kept and be negative on
    some lattice vector, so that new minimal vectors appear at the critical rho."""
    if _is_psd(direction):
        raise ValueError("direction is positive semidefinite; no new minimal vectors can appear")
    lo, hi = Fraction(0), None
    u = Fraction(1)
    for _ in range(400):
        psi = phi + direction.scale(u)
        if not is_positive_definite(psi):
            hi = u
            u = (lo + u) / 2
            continue
        below = _vectors_strictly_below(psi, m)
        if below:
            break
        lo = u
        u = 2 * u if hi is None else (u + hi) / 2
    else:
        raise ArithmeticError("line search did not bracket the critical parameter")
    rho = min((evaluate(phi, v) - m) / (-evaluate(direction, v)) for v in below)
    return phi + direction.scale(rho)


def _is_psd(f: HermForm) -> bool:
    from cyclovoronoi.cyclotomic import real_signs

    return all(s >= 0 for s in real_signs(f.a) + real_signs(f.c) + real_signs(f.det()))


def ascend_to_perfect(phi: HermForm, max_steps: int = 64) -> HermForm:
    """Voronoi's ascent: grow the set of minimal vectors until the form is perfect."""
    md = minimum_and_vectors(phi)
    phi = phi.scale(1 / md.minimum)
    for _ in range(max_steps):
        md = minimum_and_vectors(phi)
        rows = [dual_coords(q_coords(v)) for v in md.reps_mod_torsion]
        if linalg.rank(rows) == 8:
            return phi
        r = HermForm.from_coords(linalg.primitive_int(linalg.nullspace(rows, 8)[0]))
        if _is_psd(r):
            r = -r
        phi = voronoi_step(phi, r)
    raise ArithmeticError("ascent did not reach a perfect form")


def _vector_pool(bound: int) -> list[OVec]:
    ident = HermForm.identity()
    return torsion_reps(v for v, _ in vectors_below(ident, bound))


def find_initial_form(seed: Iterable[OVec] = (), pool_bound: int = 4) -> HermForm:
    """A perfect form whose minimal vectors contain the (grown) seed list L.

    L is enlarged from a pool of short vectors until {phi(v) = 1 : v in L} has a
    unique solution; the solution is accepted if positive definite with L inside
    its minimal vectors.  Otherwise the search restarts from the identity form by
    Voronoi ascent."""
    L: list[OVec] = []
    rows: list[tuple] = []
    for v in torsion_reps(seed):
        r = dual_coords(q_coords(v))
        if linalg.rank(rows + [r]) > len(rows):
            L.append(v)
            rows.append(r)
    pool = _vector_pool(pool_bound)
    for v in pool:
        if linalg.rank(rows) == 8:
            break
        if v in L:
            continue
        r = dual_coords(q_coords(v))
        if linalg.rank(rows + [r]) > len(rows):
            L.append(v)
            rows.append(r)
    if linalg.rank(rows) < 8:
        raise RuntimeError(f"vector pool of bound {pool_bound} exhausted before the system became unique")
    sol = linalg.solve_unique(rows, [1] * len(rows))
    if sol is not None:
        phi = HermForm.from_coords(sol)
        if is_positive_definite(phi):
            md = minimum_and_vectors(phi)
            if md.minimum == 1 and set(L) <= set(md.reps_mod_torsion):
                return phi
    log.info("seeded system failed; ascending from the identity form")
    return ascend_to_perfect(HermForm.identity())


# ---------------------------------------------------------------------------
# neighbours


def neighbor(rec: PerfectFormRecord, facet: Facet, with_stabilizer: bool = False) -> PerfectFormRecord:
    """The perfect form across ``facet`` of the top cone of ``rec``."""
    r = facet.form
    psi = voronoi_step(rec.form, r)
    out = perfect_record(psi, with_stabilizer=with_stabilizer)
    kept = {v.canonical() for v in rec.facet_vectors(facet)}
    new = set(out.vectors)
    if not kept <= new:
        raise ArithmeticError("neighbour lost minimal vectors of the facet")
    if kept == new or psi == rec.form:
        raise ArithmeticError("neighbour did not acquire new minimal vectors")
    return out


@dataclass
class FacetOrbit:
    label: str
    members: list[int]  # indices into rec.facets
    n_vertices: int
    stabilizer_order: int = 0  # elements of S_phi fixing the representative

    @property
    def representative(self) -> int:
        return self.members[0]

    @property
    def size(self) -> int:
        return len(self.members)


def apply_perm(perm: Sequence[int], mask: int) -> int:
    out = 0
    for i in mask_to_indices(mask):
        out |= 1 << perm[i]
    return out


def facet_orbits(rec: PerfectFormRecord) -> list[FacetOrbit]:
    perms = rec.ensure_stabilizer().vertex_perms
    index = {f.mask: k for k, f in enumerate(rec.facets)}
    seen: set[int] = set()
    orbits = []
    for k, f in enumerate(rec.facets):
        if k in seen:
            continue
        members = sorted({index[apply_perm(p, f.mask)] for p in perms})
        seen.update(members)
        orbits.append(members)
    orbits.sort(key=lambda o: (-len(rec.facets[o[0]].vertices), -len(o), o[0]))
    # S_phi acts on the 24 torsion orbits through vertex_perms; the kernel is the scalars
    kernel = rec.stabilizer.order // len(perms)
    out = []
    for i, o in enumerate(orbits):
        f = rec.facets[o[0]]
        fixing = sum(1 for p in perms if apply_perm(p, f.mask) == f.mask)
        out.append(FacetOrbit(f"F{i + 1}", o, len(f.vertices), kernel * fixing))
    return out


@dataclass
class NeighborStep:
    source: int  # class index of the form whose facet is crossed
    orbit: str
    facet_vertices: list[int]
    neighbor: HermForm
    class_index: int
    witness: GMat  # gamma with Theta(gamma) . class_form = neighbor


@dataclass
class ConjugatePair:
    first: str
    second: str
    witness: GMat  # gamma outside S_phi with gamma . F_first = F_second


@dataclass
class Traversal:
    classes: list[PerfectFormRecord]
    orbits: list[FacetOrbit]
    steps: list[NeighborStep]
    conjugate_pairs: list[ConjugatePair] = field(default_factory=list)


def _witness_for(source: PerfectFormRecord, target: PerfectFormRecord) -> GMat | None:
    gamma = find_conjugator(source.config, target.config)
    if gamma is None:
        return None
    if act(gamma.theta(), source.form) != target.form:
        raise ArithmeticError("conjugating matrix does not carry the perfect form")
    return gamma


def conjugate_pairs(rec: PerfectFormRecord, orbits: Sequence[FacetOrbit]) -> list[ConjugatePair]:
    """Pairs of facet orbits conjugate by some gamma outside the stabilizer."""
    out = []
    for i, a in enumerate(orbits):
        for b in orbits[i + 1 :]:
            if a.n_vertices != b.n_vertices:
                continue
            fa = rec.facet_vectors(rec.facets[a.representative])
            fb = rec.facet_vectors(rec.facets[b.representative])
            gamma = find_conjugator(fa, fb)
            if gamma is None:
                continue
            if rec.config.maps_onto(gamma, rec.config) is not None:
                raise ArithmeticError("distinct stabilizer orbits joined by a stabilizer element")
            out.append(ConjugatePair(a.label, b.label, gamma))
    return out


def classify_perfect_forms(initial: PerfectFormRecord | None = None, seed: int | None = None) -> Traversal:
    """Voronoi traversal up to GL_2(O), starting from the reference perfect form.

    ``seed`` shuffles the order in which facet orbits are crossed; the classes
    found and the reported steps do not depend on it."""
    rng = random.Random(seed) if seed is not None else None
    rec0 = initial if initial is not None else verify_initial_form()
    classes = [rec0]
    steps: list[NeighborStep] = []
    first_orbits = None
    pairs: list[ConjugatePair] = []
    queue = [0]
    while queue:
        ci = queue.pop(0)
        rec = classes[ci]
        orbits = facet_orbits(rec)
        if ci == 0:
            first_orbits = orbits
            pairs = conjugate_pairs(rec, orbits)
        todo = list(orbits)
        if rng is not None:
            rng.shuffle(todo)
        for orb in todo:
            facet = rec.facets[orb.representative]
            nb = neighbor(rec, facet)
            hit = None
            for k, known in enumerate(classes):
                gamma = _witness_for(known, nb)
                if gamma is not None:
                    hit = (k, gamma)
                    break
            if hit is None:
                nb.ensure_stabilizer()
                classes.append(nb)
                queue.append(len(classes) - 1)
                gamma = GMat.identity()
                hit = (len(classes) - 1, gamma)
            steps.append(NeighborStep(ci, orb.label, sorted(facet.vertices), nb.form, hit[0], hit[1]))
            log.info("class %d orbit %s -> class %d", ci, orb.label, hit[0])
    steps.sort(key=lambda st: (st.source, int(st.orbit[1:])))
    return Traversal(classes, first_orbits, steps, pairs)


# ---------------------------------------------------------------------------
# lower cones


@dataclass
class ConeClass:
    label: str
    rank: int
    vertices: tuple[int, ...]  # 0-based indices into the top cone's vertex list
    stabilizer: GroupRecord
    n_faces: int  # faces of the top cone in this class
    members: list[int] = field(default_factory=list, repr=False)  # vertex bitmasks

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def order(self):
        return self.stabilizer.order


def _face_key(mask: int) -> tuple:
    return tuple(mask_to_indices(mask))


def _group_faces(rec: PerfectFormRecord, masks: Sequence[int]) -> list[tuple[int, set[int]]]:
    perms = rec.ensure_stabilizer().vertex_perms
    seen: set[int] = set()
    out = []
    for m in sorted(masks, key=_face_key):
        if m in seen:
            continue
        orbit = {apply_perm(p, m) for p in perms}
        seen |= orbit
        out.append((min(orbit, key=_face_key), orbit))
    return out


def classify_cones(rec: PerfectFormRecord | None = None) -> list[ConeClass]:
    """GL_2(O)-classes of the faces of rank >= 2 of the top cone of ``rec``."""
    rec = rec if rec is not None else verify_initial_form()
    lat = face_lattice(rec.q_points, rec.facets)
    found: list[tuple[int, Config, set[int]]] = []
    for r in sorted(lat.faces, reverse=True):
        if r < 2:
            continue
        classes_r: list[tuple[Config, set[int]]] = []
        for _, orbit in _group_faces(rec, lat.by_rank(r)):
            m = min(orbit, key=_face_key)
            cfg = Config([rec.vectors[i] for i in mask_to_indices(m)])
            for ccfg, members in classes_r:
                if ccfg.invariant == cfg.invariant and find_conjugator(cfg, ccfg) is not None:
                    members |= orbit
                    break
            else:
                classes_r.append((cfg, set(orbit)))
        for ccfg, members in classes_r:
            found.append((r, ccfg, members))
    out = []
    for r, _, members in found:
        rep = min(members, key=_face_key)
        cfg = Config([rec.vectors[i] for i in mask_to_indices(rep)])
        st = stabilizer(cfg)
        out.append(ConeClass("", r, tuple(mask_to_indices(rep)), st, len(members), sorted(members, key=_face_key)))
    out.sort(key=lambda c: (-c.rank, -c.n_vertices, c.vertices))
    assign_labels(out)
    return out


def _order_key(order):
    return "INFINITE" if order == INFINITE else int(order)


def assign_labels(classes: list[ConeClass]) -> None:
    """Attach table labels by matching (rank, vertex count, stabilizer order).

    Inside a group of identical signatures the table's order is not recoverable,
    so labels follow the canonical order of the representatives."""
    rows = golden.table_rows()
    pool: dict[tuple, list[str]] = {}
    for row in rows:
        pool.setdefault((row["rank"], row["n_vertices"], row["order"]), []).append(row["label"])
    for c in classes:
        sig = (c.rank, c.n_vertices, _order_key(c.order))
        labels = pool.get(sig)
        c.label = labels.pop(0) if labels else f"?{c.rank}.{c.n_vertices}.{_order_key(c.order)}"


def identify_cone(vectors: Sequence[OVec], classes: Sequence[ConeClass], rec: PerfectFormRecord) -> str | None:
    """Label of the class containing the configuration of q(vectors), if any."""
    cfg = Config(vectors)
    for c in classes:
        ccfg = Config([rec.vectors[i] for i in c.vertices])
        if ccfg.invariant != cfg.invariant:
            continue
        if find_conjugator(cfg, ccfg) is not None:
            return c.label
    return None


# ---------------------------------------------------------------------------
# minimal vector configurations


@dataclass
class MinConfigClass:
    vertices: tuple[int, ...]  # 0-based indices into the top cone's vertex list
    label: str
    realizing_form: HermForm
    listed_entry: str | None = None

    @property
    def listed_indices(self) -> list[int]:
        return [i + 1 for i in self.vertices]


def face_functional(rec: PerfectFormRecord, mask: int) -> HermForm:
    """Sum of the inner normals of the facets containing the face."""
    total = HermForm.from_coords([0] * 8)
    for f in rec.facets:
        if f.mask & mask == mask:
            total = total + f.form
    return total


def _min_eig(phi: HermForm) -> float:
    g = np.array(gram_matrix(phi), dtype=float)
    return float(np.linalg.eigvalsh(g)[0])


def realizing_form(rec: PerfectFormRecord, mask: int) -> HermForm:
    """A form whose minimal vectors are exactly the vectors of the face (mod torsion)."""
    f = face_functional(rec, mask)
    want = {rec.vectors[i].canonical() for i in mask_to_indices(mask)}
    # floats only choose where to start; acceptance below is exact
    floor = _min_eig(rec.form) / 2
    t = Fraction(1)
    for _ in range(80):
        psi = rec.form + f.scale(t)
        if _min_eig(psi) >= floor and is_positive_definite(psi):
            md = minimum_and_vectors(psi)
            if md.minimum == 1 and set(md.reps_mod_torsion) == want:
                return psi
        t /= 2
    raise ArithmeticError("could not realize the face as a set of minimal vectors")


def classify_min_configs(
    rec: PerfectFormRecord | None = None, cones: list[ConeClass] | None = None
) -> list[MinConfigClass]:
    rec = rec if rec is not None else verify_initial_form()
    cones = cones if cones is not None else classify_cones(rec)
    e1 = OVec(ONE, ZERO).canonical()
    single = next(i for i, v in enumerate(rec.vectors) if v.canonical() == e1)
    out = [MinConfigClass((single,), "V", realizing_form(rec, 1 << single))]
    for c in cones:
        mask = sum(1 << i for i in c.vertices)
        out.append(MinConfigClass(c.vertices, c.label, realizing_form(rec, mask)))
    out.sort(key=lambda m: (len(m.vertices), m.vertices))
    # match the listed configurations
    entries = golden.load()["min_configs"]["list"]
    for entry in entries:
        idx = golden.parse_index_set(entry)
        cfg = Config([rec.vectors[i - 1] for i in idx])
        for m in out:
            mcfg = Config([rec.vectors[i] for i in m.vertices])
            if mcfg.invariant == cfg.invariant and find_conjugator(cfg, mcfg) is not None:
                if m.listed_entry is not None:
                    raise VerificationError(f"listed entries {m.listed_entry} and {entry} are conjugate")
                m.listed_entry = entry
                break
    return out
