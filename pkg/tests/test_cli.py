import json
from types import SimpleNamespace

import pytest

from cli.main import build_parser, main, parse_config
from config.constants import EXIT_DOMAIN_ERROR, EXIT_OK, EXIT_UNRESOLVED
from config.enums import GroupKind, Subcommand
from config.errors import DomainError
from covers.cover_ball import cover_ball


def read_json(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


# ----------------------------------------------------------------------
# Parsing
# ----------------------------------------------------------------------

def test_parse_config_reads_fractions():
    config = parse_config(["cover", "--gen", "circle:1", "--eps", "1/3", "--radius", "1", "--res", "1/50"])
    assert config.subcommand == Subcommand.COVER
    assert config.eps == pytest.approx(1 / 3)
    assert config.resolution == pytest.approx(0.02)


def test_demo_defaults_to_a_hawaiian_graph():
    config = parse_config(["demo", "--stages", "3"])
    assert config.graph == "hawaiian:3"


def test_parse_config_validates():
    with pytest.raises(DomainError):
        parse_config(["generators", "--gen", "circle:1"])


@pytest.mark.parametrize("argv", [
    [],
    ["unknown"],
    ["spectrum", "--res", "abc"],
    ["demo", "--stages", "two"],
])
def test_malformed_flags_exit_with_usage_error(argv):
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    assert excinfo.value.code == 2


def test_every_subcommand_is_registered():
    parser = build_parser()
    for command in Subcommand:
        assert parser.parse_args([command.value]).subcommand == command.value


# ----------------------------------------------------------------------
# Domain errors
# ----------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["cover", "--gen", "circle:1", "--eps", "0.03", "--radius", "1"],
    ["spectrum", "--gen", "circle:1", "--graph", "circle.graph"],
    ["spectrum"],
    ["spectrum", "--gen", "moebius:1"],
    ["spectrum", "--gen", "circle:1", "--eps-min", "0.5", "--eps-max", "0.2"],
])
def test_bad_input_exits_with_domain_error(argv, tmp_path):
    assert main(argv + ["--out", str(tmp_path)]) == EXIT_DOMAIN_ERROR


def test_missing_graph_file(tmp_path):
    argv = ["spectrum", "--graph", str(tmp_path / "nowhere.graph"), "--out", str(tmp_path)]
    assert main(argv) == EXIT_DOMAIN_ERROR


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------

def test_spectrum_of_the_circle(tmp_path, capsys):
    code = main(["spectrum", "--gen", "circle:1", "--eps-min", "0.05", "--eps-max", "0.45",
                 "--eta", "0.04", "--workers", "2", "--out", str(tmp_path)])
    assert code == EXIT_OK
    report = read_json(tmp_path / "spectrum.json")
    assert report["format_version"] == 1
    assert report["graph"] == "circle:1"
    assert len(report["entries"]) == 1
    assert report["entries"][0]["value"] == pytest.approx(1 / 3, abs=0.02)
    assert report["covering_spectrum"][0][0] == pytest.approx(1.5 * report["entries"][0]["value"])
    assert "critical value" in capsys.readouterr().out
    lines = (tmp_path / "spectrum.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "value,multiplicity,certainty,error"
    assert len(lines) == 2
    assert lines[1].split(",")[1:3] == ["1", "certain"]


def test_spectrum_over_the_default_range(tmp_path):
    code = main(["spectrum", "--gen", "circle:1", "--res", "0.02", "--workers", "2", "--out", str(tmp_path)])
    assert code == EXIT_OK
    report = read_json(tmp_path / "spectrum.json")
    assert report["eps_min"] == pytest.approx(0.03)
    assert [e["multiplicity"] for e in report["entries"]] == [1]


def test_spectrum_csv_rows_are_sorted_by_value(tmp_path):
    code = main(["spectrum", "--gen", "wedge:1,2", "--res", "0.05", "--eps-min", "0.2", "--eps-max", "0.8",
                 "--eta", "0.05", "--workers", "2", "--out", str(tmp_path)])
    assert code == EXIT_OK
    rows = (tmp_path / "spectrum.csv").read_text(encoding="utf-8").splitlines()[1:]
    values = [float(row.split(",")[0]) for row in rows]
    assert len(values) == 2
    assert values == sorted(values)


def test_reruns_are_byte_identical(tmp_path):
    argv = ["spectrum", "--gen", "circle:1", "--eps-min", "0.25", "--eps-max", "0.45", "--eta", "0.04"]
    first, second = tmp_path / "first", tmp_path / "second"
    assert main(argv + ["--workers", "1", "--out", str(first)]) == EXIT_OK
    assert main(argv + ["--workers", "3", "--out", str(second)]) == EXIT_OK
    for name in ("spectrum.json", "spectrum.csv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_spectrum_of_a_graph_file(tmp_path):
    path = tmp_path / "path.graph"
    path.write_text("v 0\nv 1\nv 2\ne 0 0 1 1\ne 1 1 2 0.5\n", encoding="utf-8")
    assert main(["spectrum", "--graph", str(path), "--out", str(tmp_path)]) == EXIT_OK
    report = read_json(tmp_path / "spectrum.json")
    assert report["entries"] == []
    assert report["graph"] == str(path)


def test_cover_writes_graph_and_projection(tmp_path):
    code = main(["cover", "--gen", "circle:1", "--eps", "0.4", "--radius", "0.6", "--out", str(tmp_path)])
    assert code == EXIT_OK
    table = read_json(tmp_path / "cover_projection.json")
    assert len(table["nodes"]) == 50
    assert table["deck_rank"] == 0
    assert (tmp_path / "cover_ball.graph").read_text(encoding="utf-8").strip()


def test_cover_with_kernel_triads(tmp_path):
    triads = {"triads": [{"points": [[0, 0.0], [0, 0.34], [0, 0.66]], "eta": 0.02}]}
    path = tmp_path / "kernel.json"
    path.write_text(json.dumps(triads), encoding="utf-8")
    code = main(["cover", "--gen", "circle:1", "--eps", "0.3", "--radius", "0.6",
                 "--triads", str(path), "--out", str(tmp_path)])
    assert code == EXIT_OK
    table = read_json(tmp_path / "cover_projection.json")
    assert len(table["kernel_triads"]) == 1
    assert table["deck_rank"] == 0
    assert len(table["nodes"]) == 50


def test_cover_with_unrecognised_deck_group_is_unresolved(tmp_path, monkeypatch):
    import cli.main as cli

    def unrecognised(*args, **kwargs):
        ball = cover_ball(*args, **kwargs)
        ball.quotient = SimpleNamespace(kind=GroupKind.UNKNOWN)
        return ball

    monkeypatch.setattr(cli, "cover_ball", unrecognised)
    code = main(["cover", "--gen", "circle:1", "--eps", "0.4", "--radius", "0.6", "--out", str(tmp_path)])
    assert code == EXIT_UNRESOLVED
    assert read_json(tmp_path / "cover_projection.json")["group_kind"] == "unknown"


def test_generators_of_a_wedge(tmp_path):
    code = main(["generators", "--gen", "wedge:1,2", "--res", "0.05", "--eps", "0.25", "--out", str(tmp_path)])
    assert code == EXIT_OK
    report = read_json(tmp_path / "generators.json")
    assert len(report["generators"]) == 2
    assert report["generation_certified"] is True


def test_gh_experiment(tmp_path, capsys):
    config = {"family": "circle", "indices": [2, 4], "eps": "1/3", "delta": 0.3, "radius": 0.5,
              "resolution": 0.02, "limit_scales": [0.35], "triad_rule": "none", "workers": 2}
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    out = tmp_path / "out"
    assert main(["gh", "--config", str(path), "--out", str(out)]) == EXIT_OK
    report = read_json(out / "experiment.json")
    assert [r["i"] for r in report["rows"]] == [2, 4]
    lines = (out / "experiment.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("i,target,scale,gh_lower,gh_upper")
    assert len(lines) == 3
    assert "deck_matches_limit" in capsys.readouterr().out


def test_gh_experiment_that_never_settles_is_unresolved(tmp_path):
    # at 0.3 the limit cover unwraps the circle while every member stays simply covered
    config = {"family": "circle", "indices": [2, 4], "eps": "1/3", "delta": 0.3, "radius": 0.5,
              "resolution": 0.02, "limit_scales": [0.3], "triad_rule": "none", "workers": 2}
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    out = tmp_path / "out"
    assert main(["gh", "--config", str(path), "--out", str(out)]) == EXIT_UNRESOLVED
    report = read_json(out / "experiment.json")
    assert report["thresholds"]["deck_matches_limit"] is None


def test_demo(tmp_path):
    code = main(["demo", "--stages", "2", "--floor", "0.12", "--out", str(tmp_path)])
    assert code in (EXIT_OK, EXIT_UNRESOLVED)
    report = read_json(tmp_path / "demo.json")
    assert [s["valency"] for s in report["stages"]] == [2, 4]
    assert report["floor"] == 0.12


def test_logging_bootstrap_creates_the_log_directory(tmp_path, monkeypatch):
    import app

    monkeypatch.setattr(app, "LOG_FILE", str(tmp_path / "logs" / "run.log"))
    app.configure_logging()
    assert (tmp_path / "logs").is_dir()
