import csv
import io
import json

import pytest

from cyclovoronoi import cli
from cyclovoronoi.census import SECTIONS, Census, golden_mismatches
from cyclovoronoi.report import CLASSIFY_COLUMNS, FORMATS, render_figures, render_report, table_for


def test_round_trip_is_byte_identical(census):
    text = census.dumps()
    again = Census.loads(text)
    assert again.dumps() == text
    assert again == census or again.dumps() == census.dumps()


def test_census_matches_reference(census):
    for s in SECTIONS:
        assert golden_mismatches(census, s) == [], s


def test_census_verifies(census):
    assert census.verify() == []


def test_tampered_census_fails_verification(census):
    data = json.loads(census.dumps())
    data["conjugate_pairs"][0]["witness"] = data["stabilizer"]["generators"][0]
    bad = Census.from_json(data)
    assert bad.verify() != []


def test_malformed_json_raises():
    with pytest.raises(ValueError):
        Census.loads("{not json")
    with pytest.raises(ValueError):
        Census.loads(json.dumps({"schema": 99}))


def test_empty_census_gives_header_only_tables():
    c = Census.empty()
    for s in SECTIONS:
        t = table_for(c, s)
        assert t.rows == []
    out = render_report(c, "csv", "classify")
    assert out == ",".join(CLASSIFY_COLUMNS) + "\n"


def test_classify_csv(census):
    rows = list(csv.reader(io.StringIO(render_report(census, "csv", "classify"))))
    assert rows[0] == CLASSIFY_COLUMNS
    assert len(rows) == 43
    assert rows[1][:4] == ["A", "24", "8", "600"]
    assert ["G2", "2", "2", "INFINITE"] in [r[:4] for r in rows]


def test_reports_are_deterministic(census):
    for fmt in FORMATS:
        for s in SECTIONS:
            assert render_report(census, fmt, s) == render_report(Census.loads(census.dumps()), fmt, s)


def test_json_report_parses(census):
    body = json.loads(render_report(census, "json", "facets"))
    assert body["summary"] == "118 facets: 14×12, 80×9, 24×7"
    assert len(body["rows"]) == 118


def test_unknown_format_and_section(census):
    with pytest.raises(ValueError):
        render_report(census, "xml")
    with pytest.raises(ValueError):
        table_for(census, "nope")


def test_figures(census, tmp_path):
    paths = render_figures(census, "classify", tmp_path / "report.md")
    assert paths
    for p in paths:
        assert p.exists() and p.read_bytes()[:4] == b"\x89PNG"


# ---------------------------------------------------------------------------
# command line


@pytest.fixture
def cached(monkeypatch, census_cache):
    monkeypatch.setenv("CYCLOVORONOI_CACHE", str(census_cache))
    return census_cache


def test_cli_verify_perfect_check(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv("CYCLOVORONOI_CACHE", str(tmp_path))
    assert cli.main(["verify-perfect", "--check"]) == 0
    out = capsys.readouterr()
    assert "240 minimal vectors / 24 mod torsion" in out.out
    assert "check passed: verify-perfect" in out.err


def test_cli_facets_check(monkeypatch, tmp_path, capsys):
    monkeypatch.delenv("CYCLOVORONOI_CACHE", raising=False)
    assert cli.main(["facets", "--check", "--format", "csv"]) == 0
    out = capsys.readouterr()
    assert len(out.out.strip().splitlines()) == 119


@pytest.mark.parametrize("cmd", ["stabilizer", "neighbors", "classify", "min-configs"])
def test_cli_sections_from_cache(cached, cmd, capsys):
    assert cli.main([cmd, "--check"]) == 0
    assert f"check passed: {cmd}" in capsys.readouterr().err


def test_cli_export_import_round_trip(cached, tmp_path, capsys):
    out = tmp_path / "census.json"
    assert cli.main(["export", "--output", str(out)]) == 0
    assert out.read_text() == (cached / "census.json").read_text()
    assert cli.main(["import", str(out), "--check", "--section", "neighbors", "--format", "md"]) == 0
    captured = capsys.readouterr()
    assert "check passed: import" in captured.err
    assert "F2 and F3 are conjugate" in captured.out


def test_cli_output_writes_figures(cached, tmp_path):
    out = tmp_path / "classes.md"
    assert cli.main(["classify", "--output", str(out)]) == 0
    assert out.read_text().startswith("## Classes of Voronoi cones")
    assert list(tmp_path.glob("classes_*.png"))


def test_cli_mismatch_exit_code(cached, tmp_path, capsys):
    data = json.loads((cached / "census.json").read_text())
    data["facets"] = data["facets"][:-1]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert cli.main(["import", str(bad), "--check", "--section", "facets"]) == 1
    assert "MISMATCH" in capsys.readouterr().err


def test_cli_malformed_import(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    assert cli.main(["import", str(bad)]) == 2
    assert cli.main(["import", str(tmp_path / "missing.json")]) == 2
    assert "error:" in capsys.readouterr().err


def test_cli_rejects_unknown_format():
    with pytest.raises(SystemExit) as e:
        cli.main(["facets", "--format", "xml"])
    assert e.value.code == 2
