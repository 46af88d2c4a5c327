"""Command line front end.

    cyclovoronoi verify-perfect --check
    cyclovoronoi facets --format csv --output facets.csv
    cyclovoronoi classify --format md
    cyclovoronoi export --output census.json
    cyclovoronoi import census.json --check

Set CYCLOVORONOI_CACHE to a directory to reuse the full census and the lattice
basis between runs.  With ``--output`` the text report is written to that path
and PNG figures are written next to it.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from cyclovoronoi import __version__
from cyclovoronoi.census import SECTIONS, Census, build_census, cache_dir, golden_mismatches, load_or_build
from cyclovoronoi.report import FORMATS, render_figures, render_report

log = logging.getLogger("cyclovoronoi")

COMMANDS = SECTIONS + ("export", "import")

STAGE = {
    "verify-perfect": "form",
    "facets": "facets",
    "stabilizer": "stabilizer",
    "neighbors": "neighbors",
    "classify": "cones",
    "min-configs": "all",
}

EXIT_OK, EXIT_MISMATCH, EXIT_IO = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    fmt: str = "md"  # report format
    output: Path | None = None  # stdout when None
    height_bound: int = 4  # vector pool for the initial-form search
    lambda_bound: int = 6  # starting height for the lattice saturation
    seed: int | None = None  # facet exploration order only
    verbose: int = 0
    check: bool = False
    input: Path | None = None
    section: str = "classify"  # rendered section for import


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyclovoronoi", description="Voronoi cones of binary Hermitian forms over Q(zeta_5).")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "verify-perfect": "check the initial perfect form and its minimal vectors",
        "facets": "facets of the top cone",
        "stabilizer": "stabilizer of the minimal vectors in GL_2(O)",
        "neighbors": "facet orbits and Voronoi neighbours",
        "classify": "classes of Voronoi cones",
        "min-configs": "classes of minimal vector configurations",
        "export": "write the full census as JSON",
        "import": "read a census JSON file, recheck it and render it",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        if name == "import":
            sp.add_argument("input", type=Path, help="census JSON file")
            sp.add_argument("--section", choices=SECTIONS, default="classify", help="section to render (default classify)")
        sp.add_argument("--format", dest="fmt", choices=FORMATS, default="md", help="report format (default md)")
        sp.add_argument("--output", "-o", type=Path, default=None, help="output file (default stdout)")
        sp.add_argument("--check", action="store_true", help="compare with the reference numbers; exit 1 on mismatch")
        sp.add_argument("--height-bound", type=int, default=4, help="vector pool height for the initial-form search (default 4)")
        sp.add_argument("--lambda-bound", type=int, default=6, help="starting height for lattice saturation (default 6)")
        sp.add_argument("--seed", type=int, default=None, help="shuffle facet exploration order (results do not change)")
        sp.add_argument("-v", "--verbose", action="count", default=0)
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        fmt=ns.fmt,
        output=ns.output,
        height_bound=ns.height_bound,
        lambda_bound=ns.lambda_bound,
        seed=ns.seed,
        verbose=ns.verbose,
        check=ns.check,
        input=getattr(ns, "input", None),
        section=getattr(ns, "section", "classify"),
    )


def _lambda_basis(cfg: RunConfig) -> list:
    from cyclovoronoi.hermitian import lambda_basis

    d = cache_dir()
    path = d / f"lambda_basis_{cfg.lambda_bound}.json" if d else None
    if path is not None and path.exists():
        return [tuple(r) for r in json.loads(path.read_text(encoding="utf-8"))]
    basis = lambda_basis(bound=cfg.lambda_bound)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps([list(map(int, r)) for r in basis]), encoding="utf-8")
    return basis


def _initial_form_checks(cfg: RunConfig, census: Census) -> list[str]:
    """Extra checks for verify-perfect: the seeded search and the lattice basis."""
    from cyclovoronoi.voronoi import find_initial_form, reference_vectors

    problems = []
    found = find_initial_form(reference_vectors(), pool_bound=cfg.height_bound)
    if found != census.form:
        problems.append("search seeded with the listed vectors returned a different form")
    basis = _lambda_basis(cfg)
    ident = [tuple(int(i == j) for j in range(8)) for i in range(8)]
    if sorted(map(tuple, basis)) != sorted(ident):
        problems.append("the lattice spanned by the q-points is not the standard lattice")
    return problems


def _census_for(cfg: RunConfig) -> Census:
    if cfg.command == "import":
        try:
            text = cfg.input.read_text(encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot read {cfg.input}: {exc.strerror}") from exc
        return Census.loads(text)
    if cfg.command in ("export", "min-configs") or (cache_dir() and (cache_dir() / "census.json").exists()):
        return load_or_build(seed=cfg.seed)
    return build_census(STAGE[cfg.command], seed=cfg.seed)


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
        return
    cfg.output.parent.mkdir(parents=True, exist_ok=True)
    cfg.output.write_text(text, encoding="utf-8")


def run(cfg: RunConfig) -> int:
    census = _census_for(cfg)
    problems: list[str] = []
    if cfg.command == "export":
        _write(cfg, census.dumps())
        section = None
    else:
        section = cfg.command if cfg.command in SECTIONS else cfg.section
        _write(cfg, render_report(census, cfg.fmt, section))
        if cfg.output is not None:
            for p in render_figures(census, section, cfg.output):
                log.info("wrote %s", p)
    if cfg.check:
        if cfg.command in ("export", "import"):
            if cfg.command == "import":
                problems += census.verify()
            for s in SECTIONS:
                problems += [f"{s}: {m}" for m in golden_mismatches(census, s)]
        else:
            problems += golden_mismatches(census, section)
            if section == "verify-perfect":
                problems += _initial_form_checks(cfg, census)
        for m in problems:
            print(f"MISMATCH {m}", file=sys.stderr)
        if not problems:
            print(f"check passed: {cfg.command}", file=sys.stderr)
    return EXIT_MISMATCH if problems else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = _config(ns)
    logging.basicConfig(level=logging.WARNING - 10 * min(cfg.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(cfg)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
