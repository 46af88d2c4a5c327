import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    derandomize=True,
)
settings.load_profile("default")

# acceptance results, filled by test_acceptance and printed at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def initial():
    from cyclovoronoi.voronoi import verify_initial_form

    return verify_initial_form()


@pytest.fixture(scope="session")
def traversal(initial):
    from cyclovoronoi.voronoi import classify_perfect_forms

    return classify_perfect_forms(initial)


@pytest.fixture(scope="session")
def lattice(initial):
    from cyclovoronoi.polyhedra import face_lattice

    return face_lattice(initial.q_points, initial.facets)


@pytest.fixture(scope="session")
def cones(initial):
    from cyclovoronoi.voronoi import classify_cones

    return classify_cones(initial)


@pytest.fixture(scope="session")
def min_configs(initial, cones):
    from cyclovoronoi.voronoi import classify_min_configs

    return classify_min_configs(initial, cones)


@pytest.fixture(scope="session")
def census(initial, traversal, cones, min_configs, lattice):
    from cyclovoronoi.census import assemble_census

    return assemble_census(initial, traversal, cones, min_configs, lattice)


@pytest.fixture(scope="session")
def census_cache(tmp_path_factory, census):
    """A cache directory holding the full census, so CLI runs skip the pipeline."""
    d = tmp_path_factory.mktemp("cache")
    (d / "census.json").write_text(census.dumps(), encoding="utf-8")
    return d


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {text}")
