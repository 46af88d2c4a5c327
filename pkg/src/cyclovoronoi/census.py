"""The full classification as one serializable record.

``build_census`` runs the whole pipeline; ``Census.to_json``/``from_json`` give
a byte-stable round trip, and ``Census.verify`` rechecks every witness of an
imported file with exact arithmetic.
"""

from __future__ import annotations

import json
import logging
import os
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from cyclovoronoi import voronoi
from cyclovoronoi.conjugacy import INFINITE, Config, GroupRecord
from cyclovoronoi.hermitian import GMat, HermForm, OVec, act, evaluate, minimum_and_vectors

SCHEMA = 1
CACHE_ENV = "CYCLOVORONOI_CACHE"


@dataclass
class GroupSummary:
    order: object  # int or INFINITE
    generators: list[GMat]
    invariants: dict = field(default_factory=dict)
    certificate: GMat | None = None

    @classmethod
    def of(cls, g: GroupRecord) -> "GroupSummary":
        return cls(g.order if g.is_infinite else int(g.order), list(g.generators), dict(g.invariants), g.certificate)

    @property
    def is_infinite(self) -> bool:
        return self.order == INFINITE

    def order_text(self) -> str:
        return "INFINITE" if self.is_infinite else str(self.order)

    def to_json(self) -> dict:
        out = {
            "order": "INFINITE" if self.is_infinite else self.order,
            "generators": [g.to_json() for g in self.generators],
            "invariants": self.invariants,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out

    @classmethod
    def from_json(cls, d: dict) -> "GroupSummary":
        order = INFINITE if d["order"] == "INFINITE" else int(d["order"])
        cert = GMat.from_json(d["certificate"]) if "certificate" in d else None
        return cls(order, [GMat.from_json(g) for g in d["generators"]], dict(d.get("invariants", {})), cert)


@dataclass
class OrbitSummary:
    label: str
    n_vertices: int
    size: int
    stabilizer_order: int
    representative: list[int]  # 1-based vertex labels

    def to_json(self) -> dict:
        return dict(self.__dict__)

    @classmethod
    def from_json(cls, d: dict) -> "OrbitSummary":
        return cls(d["label"], d["n_vertices"], d["size"], d["stabilizer_order"], list(d["representative"]))


@dataclass
class StepSummary:
    source: int  # class whose facet is crossed
    orbit: str
    facet_vertices: list[int]  # 1-based
    neighbor: HermForm
    class_index: int
    witness: GMat

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "orbit": self.orbit,
            "facet_vertices": self.facet_vertices,
            "neighbor": self.neighbor.to_json(),
            "class_index": self.class_index,
            "witness": self.witness.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "StepSummary":
        return cls(
            d["source"],
            d["orbit"], list(d["facet_vertices"]), HermForm.from_json(d["neighbor"]), d["class_index"], GMat.from_json(d["witness"])
        )


@dataclass
class ConeSummary:
    label: str
    rank: int
    vertices: list[int]  # 1-based
    n_faces: int
    stabilizer: GroupSummary

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "rank": self.rank,
            "n_vertices": self.n_vertices,
            "vertices": self.vertices,
            "n_faces": self.n_faces,
            "stabilizer": self.stabilizer.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "ConeSummary":
        return cls(d["label"], d["rank"], list(d["vertices"]), d["n_faces"], GroupSummary.from_json(d["stabilizer"]))


@dataclass
class MinConfigSummary:
    vertices: list[int]  # 1-based
    label: str
    listed_as: str | None
    realizing_form: HermForm

    def to_json(self) -> dict:
        return {
            "vertices": self.vertices,
            "label": self.label,
            "listed_as": self.listed_as,
            "realizing_form": self.realizing_form.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "MinConfigSummary":
        return cls(list(d["vertices"]), d["label"], d["listed_as"], HermForm.from_json(d["realizing_form"]))


@dataclass
class Census:
    form: HermForm | None = None
    n_minimal_vectors: int = 0
    vectors: list[OVec] = field(default_factory=list)
    facets: list[tuple[list[int], HermForm]] = field(default_factory=list)
    stabilizer: GroupSummary | None = None
    facet_orbits: list[OrbitSummary] = field(default_factory=list)
    conjugate_pairs: list[tuple[str, str, GMat]] = field(default_factory=list)
    perfect_forms: list[HermForm] = field(default_factory=list)
    steps: list[StepSummary] = field(default_factory=list)
    face_counts: dict[int, int] = field(default_factory=dict)
    cones: list[ConeSummary] = field(default_factory=list)
    min_configs: list[MinConfigSummary] = field(default_factory=list)

    @classmethod
    def empty(cls) -> "Census":
        return cls()

    # derived views

    def facet_profile(self) -> dict[int, int]:
        c = Counter(len(v) for v, _ in self.facets)
        return dict(sorted(c.items(), reverse=True))

    def cone_counts(self) -> dict[int, int]:
        c = Counter(k.rank for k in self.cones)
        return dict(sorted(c.items(), reverse=True))

    # serialization

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "initial_form": None if self.form is None else self.form.to_json(),
            "n_minimal_vectors": self.n_minimal_vectors,
            "vectors": [v.to_json() for v in self.vectors],
            "facets": [{"vertices": v, "functional": f.to_json()} for v, f in self.facets],
            "stabilizer": None if self.stabilizer is None else self.stabilizer.to_json(),
            "facet_orbits": [o.to_json() for o in self.facet_orbits],
            "conjugate_pairs": [{"first": a, "second": b, "witness": g.to_json()} for a, b, g in self.conjugate_pairs],
            "perfect_forms": [f.to_json() for f in self.perfect_forms],
            "steps": [s.to_json() for s in self.steps],
            "face_counts": {str(r): n for r, n in sorted(self.face_counts.items(), reverse=True)},
            "cone_classes": [c.to_json() for c in self.cones],
            "min_configs": [m.to_json() for m in self.min_configs],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, d: dict) -> "Census":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported census schema {d.get('schema')!r}")
        return cls(
            form=None if d["initial_form"] is None else HermForm.from_json(d["initial_form"]),
            n_minimal_vectors=d["n_minimal_vectors"],
            vectors=[OVec.from_json(v) for v in d["vectors"]],
            facets=[(list(f["vertices"]), HermForm.from_json(f["functional"])) for f in d["facets"]],
            stabilizer=None if d["stabilizer"] is None else GroupSummary.from_json(d["stabilizer"]),
            facet_orbits=[OrbitSummary.from_json(o) for o in d["facet_orbits"]],
            conjugate_pairs=[(p["first"], p["second"], GMat.from_json(p["witness"])) for p in d["conjugate_pairs"]],
            perfect_forms=[HermForm.from_json(f) for f in d["perfect_forms"]],
            steps=[StepSummary.from_json(s) for s in d["steps"]],
            face_counts={int(r): n for r, n in d["face_counts"].items()},
            cones=[ConeSummary.from_json(c) for c in d["cone_classes"]],
            min_configs=[MinConfigSummary.from_json(m) for m in d["min_configs"]],
        )

    @classmethod
    def loads(cls, text: str) -> "Census":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed census file: {exc}") from exc
        try:
            return cls.from_json(data)
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed census file: missing or bad field {exc}") from exc

    # checking an imported census

    def verify(self) -> list[str]:
        """Recheck the witnesses and incidences; returns a list of problems."""
        problems = []
        if self.form is None:
            return problems
        phi = self.form
        for i, v in enumerate(self.vectors):
            if evaluate(phi, v) != 1:
                problems.append(f"vector {i + 1} is not minimal with value 1")
        for verts, f in self.facets:
            vals = [evaluate(f, v) for v in self.vectors]
            zero = [i + 1 for i, x in enumerate(vals) if x == 0]
            if zero != verts or any(x < 0 for x in vals):
                problems.append(f"facet {verts} has inconsistent functional")
        cfg = Config(self.vectors)
        for g in self.stabilizer.generators if self.stabilizer else []:
            if cfg.maps_onto(g, cfg) is None or act(g.theta(), phi) != phi:
                problems.append("a stabilizer generator does not fix the form")
        for a, b, g in self.conjugate_pairs:
            if cfg.maps_onto(g, cfg) is not None:
                problems.append(f"pair witness for {a}, {b} lies in the stabilizer")
        for st in self.steps:
            target = self.perfect_forms[st.class_index]
            if act(st.witness.theta(), target) != st.neighbor:
                problems.append(f"neighbour witness for {st.orbit} does not carry the class form")
        for m in self.min_configs:
            md = minimum_and_vectors(m.realizing_form)
            want = {self.vectors[i - 1].canonical() for i in m.vertices}
            if md.minimum != 1 or set(md.reps_mod_torsion) != want:
                problems.append(f"realizing form for {m.vertices} has the wrong minimal vectors")
        for c in self.cones:
            s = c.stabilizer
            if s.is_infinite:
                sub = Config([self.vectors[i - 1] for i in c.vertices])
                if s.certificate is None or sub.maps_onto(s.certificate, sub) is None:
                    problems.append(f"cone {c.label}: infinite stabilizer without a valid certificate")
        return problems


def _vertex_labels(rec, indices) -> list[int]:
    return [i + 1 for i in sorted(indices)]


def assemble_census(rec, traversal=None, cones=None, min_configs=None, lattice=None) -> Census:
    """Census from already computed pipeline stages (later stages may be omitted)."""
    c = Census(form=rec.form, n_minimal_vectors=len(rec.min_data.vectors), vectors=list(rec.vectors))
    c.facets = [(_vertex_labels(rec, f.vertices), f.form) for f in rec.facets]
    if rec.stabilizer is not None:
        c.stabilizer = GroupSummary.of(rec.stabilizer)
    if traversal is not None:
        tr = traversal
        c.facet_orbits = [
            OrbitSummary(o.label, o.n_vertices, o.size, o.stabilizer_order, _vertex_labels(rec, rec.facets[o.representative].vertices))
            for o in tr.orbits
        ]
        c.conjugate_pairs = [(p.first, p.second, p.witness) for p in tr.conjugate_pairs]
        c.perfect_forms = [r.form for r in tr.classes]
        c.steps = [
            StepSummary(s.source, s.orbit, [i + 1 for i in s.facet_vertices], s.neighbor, s.class_index, s.witness) for s in tr.steps
        ]
    if lattice is not None:
        c.face_counts = dict(lattice.counts())
    if cones is not None:
        c.cones = [ConeSummary(k.label, k.rank, _vertex_labels(rec, k.vertices), k.n_faces, GroupSummary.of(k.stabilizer)) for k in cones]
    if min_configs is not None:
        c.min_configs = [MinConfigSummary(m.listed_indices, m.label, m.listed_entry, m.realizing_form) for m in min_configs]
    return c


def build_census(stages: str = "all", seed: int | None = None) -> Census:
    """Run the pipeline up to ``stages`` in {'form', 'facets', 'stabilizer',
    'neighbors', 'cones', 'all'}."""
    from cyclovoronoi.polyhedra import face_lattice

    order = ["form", "facets", "stabilizer", "neighbors", "cones", "all"]
    if stages not in order:
        raise ValueError(f"unknown stage {stages!r}")
    upto = order.index(stages)
    rec = voronoi.verify_initial_form(with_stabilizer=upto >= 2)
    tr = voronoi.classify_perfect_forms(rec, seed=seed) if upto >= 3 else None
    lat = cones = mcs = None
    if upto >= 4:
        lat = face_lattice(rec.q_points, rec.facets)
        cones = voronoi.classify_cones(rec)
    if upto >= 5:
        mcs = voronoi.classify_min_configs(rec, cones)
    c = assemble_census(rec, tr, cones, mcs, lat)
    if upto < 1:
        c.facets = []
    return c


def cache_dir() -> Path | None:
    d = os.environ.get(CACHE_ENV)
    return Path(d) if d else None


def load_or_build(seed: int | None = None) -> Census:
    """Full census, read from the cache directory when one is configured."""
    d = cache_dir()
    path = d / "census.json" if d else None
    if path is not None and path.exists():
        try:
            return Census.loads(path.read_text(encoding="utf-8"))
        except ValueError:
            logging.getLogger(__name__).warning("ignoring unreadable cache file %s", path)
    c = build_census("all", seed=seed)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(c.dumps(), encoding="utf-8")
    return c


# ---------------------------------------------------------------------------
# comparison with the embedded reference numbers

SECTIONS = ("verify-perfect", "facets", "stabilizer", "neighbors", "classify", "min-configs")


def _expect(problems: list[str], what: str, found, wanted) -> None:
    if found != wanted:
        problems.append(f"{what}: found {found}, expected {wanted}")


def golden_mismatches(c: Census, section: str) -> list[str]:
    """Differences between the census and the reference data for one section."""
    from fractions import Fraction

    from cyclovoronoi import golden

    g = golden.load()
    out: list[str] = []
    if section == "verify-perfect":
        gi = g["initial_form"]
        if c.form is None:
            return ["no initial form in census"]
        md = minimum_and_vectors(c.form)
        _expect(out, "minimum", md.minimum, Fraction(gi["minimum"]))
        _expect(out, "minimal vectors", c.n_minimal_vectors, gi["minimal_vectors"])
        _expect(out, "minimal vectors mod torsion", len(c.vectors), gi["reps_mod_torsion"])
    elif section == "facets":
        _expect(out, "facets", len(c.facets), g["facets"]["count"])
        _expect(out, "facet profile", c.facet_profile(), dict(sorted(g["facets"]["profile"].items(), reverse=True)))
    elif section == "stabilizer":
        if c.stabilizer is None:
            return ["no stabilizer in census"]
        _expect(out, "stabilizer order", c.stabilizer.order, g["stabilizer"]["order"])
        _expect(out, "stabilizer abelian", c.stabilizer.invariants.get("abelian"), g["stabilizer"]["abelian"])
    elif section == "neighbors":
        sizes: dict[int, list[int]] = {}
        for o in c.facet_orbits:
            sizes.setdefault(o.n_vertices, []).append(o.size)
            if o.size * o.stabilizer_order != g["stabilizer"]["order"]:
                out.append(f"orbit {o.label}: size x stabilizer != group order")
        _expect(out, "facet orbits", sizes, {int(k): v for k, v in g["facet_orbits"].items()})
        _expect(out, "perfect form classes", len(c.perfect_forms), g["perfect_forms"]["classes"])
        singles = sorted(o.label for o in c.facet_orbits if o.size == 1 and o.n_vertices == 12)
        if not any(sorted((a, b)) == singles for a, b, _ in c.conjugate_pairs):
            out.append("no witness joining the two singleton 12-vertex facet orbits")
        if len(c.steps) != len(c.facet_orbits):
            out.append("not every facet orbit was crossed")
    elif section == "classify":
        _expect(out, "cone classes by rank", c.cone_counts(), dict(sorted(g["cone_classes"]["by_rank"].items(), reverse=True)))
        found = Counter((k.n_vertices, k.rank, k.stabilizer.order_text()) for k in c.cones)
        wanted = Counter((r["n_vertices"], r["rank"], str(r["order"])) for r in golden.table_rows())
        if found != wanted:
            out.append(f"(vertices, rank, order) multiset differs: extra {dict(found - wanted)}, missing {dict(wanted - found)}")
    elif section == "min-configs":
        gm = g["min_configs"]
        _expect(out, "minimal vector configurations", len(c.min_configs), gm["total"])
        listed = sorted(m.listed_as for m in c.min_configs if m.listed_as is not None)
        _expect(out, "listed configurations matched", listed, sorted(gm["list"]))
    else:
        raise ValueError(f"unknown section {section!r}")
    return out
