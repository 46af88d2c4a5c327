"""Text and figure reports of a census.

Every CLI section becomes a ``Table``; tables render deterministically as
json, csv or markdown.  Figures go to PNG files next to the text output.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from cyclovoronoi.census import Census
from cyclovoronoi.golden import format_index_set

FORMATS = ("json", "csv", "md")

CLASSIFY_COLUMNS = ["type", "# of v", "cone rank", "stabilizer", "representative", "faces"]


@dataclass
class Table:
    title: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    summary: str = ""
    notes: list[str] = field(default_factory=list)


def _orbit_text(orbits) -> str:
    by_nv: dict[int, list[int]] = {}
    for o in orbits:
        by_nv.setdefault(o.n_vertices, []).append(o.size)
    return "; ".join(f"{nv}-vertex: {', '.join(map(str, s))}" for nv, s in sorted(by_nv.items(), reverse=True))


def table_for(c: Census, section: str = "classify") -> Table:
    if section == "verify-perfect":
        t = Table("Initial perfect form", ["vertex", "alpha", "beta"])
        t.rows = [[i + 1, str(v.alpha), str(v.beta)] for i, v in enumerate(c.vectors)]
        if c.form is not None:
            t.summary = f"{c.n_minimal_vectors} minimal vectors / {len(c.vectors)} mod torsion"
            t.notes = [f"form: {c.form}"]
        return t
    if section == "facets":
        t = Table("Facets of the top cone", ["facet", "# of v", "vertices"])
        t.rows = [[i + 1, len(v), format_index_set(v)] for i, (v, _) in enumerate(c.facets)]
        if c.facets:
            prof = ", ".join(f"{n}×{nv}" for nv, n in c.facet_profile().items())
            t.summary = f"{len(c.facets)} facets: {prof}"
        return t
    if section == "stabilizer":
        t = Table("Stabilizer of the minimal vectors", ["property", "value"])
        s = c.stabilizer
        if s is not None:
            t.rows = [["order", s.order_text()]] + [[k, str(v)] for k, v in sorted(s.invariants.items()) if k != "order"]
            t.rows += [[f"generator {i + 1}", str(g.columns())] for i, g in enumerate(s.generators)]
            t.summary = f"stabilizer of order {s.order_text()}"
        return t
    if section == "neighbors":
        t = Table("Facet orbits and neighbours", ["orbit", "# of v", "orbit size", "facet stabilizer", "representative", "neighbour class"])
        step = {s.orbit: s for s in c.steps if s.source == 0}
        for o in c.facet_orbits:
            st = step.get(o.label)
            t.rows.append(
                [o.label, o.n_vertices, o.size, o.stabilizer_order, format_index_set(o.representative), "" if st is None else st.class_index]
            )
        if c.facet_orbits:
            t.summary = f"{len(c.facet_orbits)} facet orbits ({_orbit_text(c.facet_orbits)}); {len(c.perfect_forms)} class(es) of perfect forms"
            t.notes = [f"{a} and {b} are conjugate by a matrix outside the stabilizer" for a, b, _ in c.conjugate_pairs]
        return t
    if section == "classify":
        t = Table("Classes of Voronoi cones", list(CLASSIFY_COLUMNS))
        t.rows = [
            [k.label, k.n_vertices, k.rank, k.stabilizer.order_text(), format_index_set(k.vertices), k.n_faces] for k in c.cones
        ]
        if c.cones:
            counts = ", ".join(f"rank {r}: {n}" for r, n in c.cone_counts().items())
            t.summary = f"{len(c.cones)} classes ({counts})"
            t.notes = [
                "Labels inside a group of equal (rank, vertices, stabilizer order) follow the canonical order of representatives."
            ]
        return t
    if section == "min-configs":
        t = Table("Minimal vector configurations", ["vertices", "# of v", "cone type", "listed as"])
        t.rows = [[format_index_set(m.vertices), len(m.vertices), m.label, m.listed_as or ""] for m in c.min_configs]
        if c.min_configs:
            t.summary = f"{len(c.min_configs)} classes of minimal vector configurations"
        return t
    raise ValueError(f"unknown section {section!r}")


def render_table(t: Table, fmt: str) -> str:
    if fmt == "json":
        body = {
            "title": t.title,
            "summary": t.summary,
            "columns": t.columns,
            "rows": [dict(zip(t.columns, r)) for r in t.rows],
            "notes": t.notes,
        }
        return json.dumps(body, indent=1, sort_keys=True, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(t.columns)
        w.writerows(t.rows)
        return buf.getvalue()
    if fmt == "md":
        lines = [f"## {t.title}", ""]
        if t.summary:
            lines += [t.summary, ""]
        lines.append("| " + " | ".join(t.columns) + " |")
        lines.append("|" + "|".join("---" for _ in t.columns) + "|")
        for r in t.rows:
            lines.append("| " + " | ".join(str(x) for x in r) + " |")
        if t.notes:
            lines.append("")
            lines += [f"- {n}" for n in t.notes]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")


def render_report(census: Census, fmt: str = "md", section: str = "classify") -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    return render_table(table_for(census, section), fmt)


# ---------------------------------------------------------------------------
# figures


def _figure_path(output: Path, name: str) -> Path:
    return output.with_name(f"{output.stem}_{name}.png")


def render_figures(census: Census, section: str, output: Path) -> list[Path]:
    """PNG figures for a section, written next to ``output``; returns their paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    paths: list[Path] = []

    def save(fig, name):
        p = _figure_path(output, name)
        fig.tight_layout()
        fig.savefig(p, dpi=120, metadata={"Software": None})
        plt.close(fig)
        paths.append(p)

    if section == "facets" and census.facets:
        prof = census.facet_profile()
        fig, ax = plt.subplots(figsize=(4, 3))
        ax.bar([str(k) for k in prof], list(prof.values()), color="tab:blue")
        ax.set_xlabel("vertices per facet")
        ax.set_ylabel("facets")
        save(fig, "facet_profile")
    elif section == "neighbors" and census.facet_orbits:
        fig, ax = plt.subplots(figsize=(5, 3))
        labels = [o.label for o in census.facet_orbits]
        palette = {12: "tab:blue", 9: "tab:orange", 7: "tab:green"}
        colors = [palette.get(o.n_vertices, "tab:gray") for o in census.facet_orbits]
        ax.bar(labels, [o.size for o in census.facet_orbits], color=colors)
        ax.set_ylabel("orbit size")
        save(fig, "facet_orbits")
    elif section == "classify" and census.cones:
        counts = census.cone_counts()
        fig, ax = plt.subplots(figsize=(4, 3))
        ax.bar([str(r) for r in counts], list(counts.values()), color="tab:blue")
        ax.set_xlabel("cone rank")
        ax.set_ylabel("classes")
        save(fig, "classes_by_rank")
        finite = [k for k in census.cones if not k.stabilizer.is_infinite]
        fig, ax = plt.subplots(figsize=(8, 3))
        ax.bar([k.label for k in finite], [k.stabilizer.order for k in finite], color="tab:purple")
        ax.set_yscale("log")
        ax.set_ylabel("stabilizer order")
        ax.tick_params(axis="x", labelrotation=90, labelsize=7)
        save(fig, "stabilizer_orders")
    elif section == "min-configs" and census.min_configs:
        c = Counter(len(m.vertices) for m in census.min_configs)
        fig, ax = plt.subplots(figsize=(5, 3))
        ax.bar([str(k) for k in sorted(c)], [c[k] for k in sorted(c)], color="tab:green")
        ax.set_xlabel("minimal vectors mod torsion")
        ax.set_ylabel("classes")
        save(fig, "min_configs")
    return paths
