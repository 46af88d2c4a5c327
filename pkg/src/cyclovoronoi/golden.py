"""Access to the embedded reference numbers (data/golden.yaml)."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

import yaml


@lru_cache(maxsize=1)
def load() -> dict:
    text = resources.files("cyclovoronoi").joinpath("data/golden.yaml").read_text(encoding="utf-8")
    return yaml.safe_load(text)


def parse_index_set(spec: str) -> list[int]:
    """'3-5, 8, 22-24' -> [3, 4, 5, 8, 22, 23, 24]."""
    out: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return sorted(set(out))


def format_index_set(indices) -> str:
    """Inverse of parse_index_set, compressing runs of three or more."""
    idx = sorted(indices)
    parts = []
    i = 0
    while i < len(idx):
        j = i
        while j + 1 < len(idx) and idx[j + 1] == idx[j] + 1:
            j += 1
        if j - i >= 2:
            parts.append(f"{idx[i]}-{idx[j]}")
        else:
            parts.extend(str(x) for x in idx[i : j + 1])
        i = j + 1
    return ", ".join(parts)


def table_rows() -> list[dict]:
    rows = []
    for label, nv, rank, order, magma in load()["cone_classes"]["table"]:
        rows.append(
            {
                "label": label,
                "n_vertices": nv,
                "rank": rank,
                "order": order,
                "magma": magma,
            }
        )
    return rows
