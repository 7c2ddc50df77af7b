import json

import jsonschema
import pytest

from tropmirror import cli
from tropmirror.errors import ParseError, ValidationError
from tropmirror.pipeline import dumps, parse_input, run, serialize_job

from conftest import FIXTURES, ROOT, load_job

ALL_FIXTURES = sorted(p.stem for p in FIXTURES.glob("*.json"))


def pants(**changes):
    raw = json.loads((FIXTURES / "pair_of_pants_2.json").read_text())
    for key, value in changes.items():
        section, _, field = key.partition("__")
        if field:
            raw[section][field] = value
        else:
            raw[section] = value
    return raw


def write(tmp_path, raw, name="job.json"):
    path = tmp_path / name
    path.write_text(raw if isinstance(raw, str) else json.dumps(raw))
    return str(path)


class TestParsing:
    def test_syntax_error_position(self):
        with pytest.raises(ParseError, match="line 2 column"):
            parse_input('{"n": 2,\n "points": [,]}')

    def test_field_path(self):
        raw = pants()
        raw["points"][1]["rho"] = 0.5
        with pytest.raises(ParseError, match=r"points\[1\]\.rho"):
            parse_input(json.dumps(raw))

    def test_decimal_string_rejected(self):
        raw = pants()
        raw["points"][0]["rho"] = "0.5"
        with pytest.raises(ParseError):
            parse_input(json.dumps(raw))

    @pytest.mark.parametrize(
        "change",
        [
            {"ambient__epsilon": "0"},
            {"ambient__epsilon": "-1/3"},
            {"ambient__rays": [[2, 2], [0, 1], [-1, -1]]},
            {"ambient__lambda": ["0", "0", "2"]},
        ],
    )
    def test_invalid_ambient(self, change):
        with pytest.raises(ValidationError):
            parse_input(json.dumps(pants(**change)))

    def test_duplicate_point(self):
        raw = pants()
        raw["points"].append(dict(raw["points"][0]))
        with pytest.raises(ValidationError, match="duplicate"):
            parse_input(json.dumps(raw))

    def test_mode_mismatch(self):
        with pytest.raises(ValidationError):
            parse_input((FIXTURES / "ci_two_lines.json").read_bytes(), mode="hypersurface")

    def test_critlocus_needs_plane(self):
        with pytest.raises(ValidationError):
            parse_input((FIXTURES / "pair_of_pants_3.json").read_bytes(), mode="critlocus")

    @pytest.mark.parametrize("name", ALL_FIXTURES)
    def test_round_trip(self, name):
        job = load_job(name)
        assert parse_input(serialize_job(job)) == job
        assert serialize_job(job) == (FIXTURES / f"{name}.json").read_bytes()


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_fixtures_match_schema(name):
    schema = json.loads((ROOT / "docs" / "schema.json").read_text())
    jsonschema.validate(json.loads((FIXTURES / f"{name}.json").read_text()), schema)


class TestReports:
    def test_deterministic(self):
        job = load_job("genus2")
        assert dumps(run(job)[0]) == dumps(run(load_job("genus2"))[0])

    def test_genus2(self):
        report, _ = run(load_job("genus2"))
        assert len(report["mirror"]["facets"]) == 12
        terms = report["superpotential"]["W0H"]
        assert [t["name"] for t in terms] == ["v0", "w1", "w2", "w3", "w4"]
        w1 = {tuple(o["alpha"]): o["order"] for o in terms[1]["vanishing_orders"]}
        assert all(w1[a] == a[0] for a in w1)
        assert report["warnings"] == []

    def test_pants(self):
        report, _ = run(load_job("pair_of_pants_2"))
        assert report["mirror"]["smooth"]
        v0 = report["superpotential"]["W0H"][0]
        assert v0["weight"] == [0, 0, 1]
        assert {o["order"] for o in v0["vanishing_orders"]} == {1}

    def test_ci_two_points(self):
        report, _ = run(load_job("ci_two_points"))
        charts = [t["chart"] for t in report["realized_tuples"]]
        assert charts == [[[0], [0]], [[1], [0]], [[1], [1]]]


class TestMain:
    def test_subdivide(self, capsys):
        assert cli.main(["subdivide", str(FIXTURES / "genus2.json")]) == 0
        report = json.loads(capsys.readouterr().out)
        assert set(report) == {"mode", "input", "warnings", "subdivision", "tropical"}

    @pytest.mark.parametrize("name", ALL_FIXTURES)
    def test_every_fixture(self, name, tmp_path):
        job = load_job(name)
        command = {"ci": "ci", "critlocus": "critlocus", "wallcheck": "wallcheck"}.get(job.mode, "mirror")
        out = tmp_path / "report.json"
        assert cli.main([command, str(FIXTURES / f"{name}.json"), "--out", str(out)]) == 0
        assert json.loads(out.read_text())["mode"] == job.mode

    def test_wallcheck_summary(self, capsys):
        assert cli.main(["wallcheck", str(FIXTURES / "genus2_wallcheck.json")]) == 0
        assert capsys.readouterr().out.strip() == "cocycle: PASS, chart-invariance: PASS"

    def test_svg(self, tmp_path, capsys):
        svg = tmp_path / "curve.svg"
        assert cli.main(["subdivide", str(FIXTURES / "genus2.json"), "--svg", str(svg)]) == 0
        text = svg.read_text()
        assert text.startswith("<svg") and 'stroke-dasharray="6 4"' in text

    def test_delete_flag(self, capsys):
        args = ["critlocus", str(FIXTURES / "genus2.json"), "--delete=-1,0", "--delete=0,-1"]
        assert cli.main(args) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["input"]["options"]["delete"] == [[-1, 0], [0, -1]]

    @pytest.mark.parametrize(
        "raw",
        ["{not json", json.dumps(pants(ambient__epsilon="0")), json.dumps(pants(n=3))],
    )
    def test_input_errors(self, raw, tmp_path, capsys):
        assert cli.main(["mirror", write(tmp_path, raw)]) == 2
        assert capsys.readouterr().err.startswith("error [")

    def test_missing_file(self, tmp_path):
        assert cli.main(["mirror", str(tmp_path / "absent.json")]) == 2

    def test_bad_cutoff_flag(self):
        assert cli.main(["wallcheck", str(FIXTURES / "genus2.json"), "--cutoff", "0.5"]) == 2

    def test_internal_error(self, monkeypatch, capsys):
        def boom(job):
            raise RuntimeError("boom")

        monkeypatch.setattr(cli, "run", boom)
        assert cli.main(["mirror", str(FIXTURES / "genus2.json")]) == 3
        assert "boom" in capsys.readouterr().err

    def test_strict_degenerate(self, tmp_path):
        raw = {
            "n": 2,
            "points": [{"alpha": [0, 0], "rho": "0"}, {"alpha": [1, 1], "rho": "0"}],
            "ambient": {"epsilon": "1"},
        }
        path = write(tmp_path, raw)
        out = tmp_path / "r.json"
        assert cli.main(["subdivide", path, "--out", str(out)]) == 0
        assert json.loads(out.read_text())["warnings"]
        assert cli.main(["subdivide", path, "--strict"]) == 2
