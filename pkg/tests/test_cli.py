import json

import pytest

from main import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK, build_parser, main


def _run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


@pytest.fixture
def k4(tmp_path, capsys):
    path = tmp_path / "k4.json"
    code, payload = _run(capsys, "--data-dir", str(tmp_path), "gen", "complete", "--n", "4", "-o", str(path))
    assert code == EXIT_OK and payload["edges"] == 6
    return path


def test_gen_writes_coordinates(tmp_path, capsys):
    coords = tmp_path / "coords.json"
    code, payload = _run(
        capsys, "gen", "grid", "--rows", "3", "--cols", "3", "--r", "1",
        "-o", str(tmp_path / "grid.json"), "--coords", str(coords),
    )
    assert code == EXIT_OK
    assert payload["n"] == 9 and payload["spec"]["r"] == 1.0
    assert len(json.loads(coords.read_text())) == 9


def test_spectral(k4, capsys):
    code, payload = _run(capsys, "spectral", "--graph", str(k4))
    assert code == EXIT_OK
    assert payload["eigenvalues"] == pytest.approx([0, 4, 4, 4], abs=1e-8)
    assert payload["rho"] == pytest.approx(4.0)


def test_mbo_below_the_critical_step(k4, tmp_path, capsys):
    init = tmp_path / "s.json"
    init.write_text("[0]")
    trace = tmp_path / "trace.jsonl"
    code, payload = _run(
        capsys, "--data-dir", str(tmp_path), "mbo", "--graph", str(k4), "--init", str(init), "--tau", "0.2",
        "--trace", str(trace),
    )
    assert code == EXIT_OK
    assert payload["final_set"] == [0] and payload["converged"]
    assert len(trace.read_text().splitlines()) == 1


def test_bounds_with_flip_analysis(tmp_path, capsys):
    graph = tmp_path / "grid.json"
    _run(capsys, "gen", "grid", "--rows", "3", "--cols", "3", "--r", "1", "-o", str(graph))
    members = tmp_path / "s.json"
    members.write_text("[3, 5, 6, 7, 8]")
    code, payload = _run(capsys, "bounds", "--graph", str(graph), "--set", str(members), "--node", "4")
    assert code == EXIT_OK
    assert payload["flip"]["kappa"] == pytest.approx(-0.75)
    assert payload["tau"]["tau_t"] >= 0
    assert payload["allen_cahn"]["alpha"] == pytest.approx(0.999)


def test_malformed_graph_is_an_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "edges": [[0, 0, 1.0]]}')
    code, payload = _run(capsys, "spectral", "--graph", str(bad))
    assert code == EXIT_INPUT_ERROR
    assert payload["error"] == "self_loop"


def test_unknown_experiment_is_an_input_error(tmp_path, capsys):
    code, payload = _run(capsys, "--data-dir", str(tmp_path), "repro", "hexagons")
    assert code == EXIT_INPUT_ERROR
    assert payload["error"] == "unknown_experiment"


def test_run_reports_failed_expectations(tmp_path, capsys):
    manifest = tmp_path / "m.json"
    manifest.write_text(json.dumps({
        "name": "k4",
        "graph": {"family": "complete", "n": 4},
        "initial": {"members": [0]},
        "method": "mbo",
        "params": {"tau": 1.0},
        "expected": {"final_set": [0]},
    }))
    code, payload = _run(capsys, "--data-dir", str(tmp_path), "run", str(manifest))
    assert code == EXIT_CHECK_FAILED
    assert payload["final_set"] == [] and not payload["passed"]


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_mcf_with_squared_distance(tmp_path, capsys):
    graph = tmp_path / "path.json"
    _run(capsys, "gen", "path", "--n", "6", "-o", str(graph))
    init = tmp_path / "s.json"
    init.write_text("[0, 1, 2]")
    code, payload = _run(capsys, "mcf", "--graph", str(graph), "--init", str(init), "--dt", "0.1", "--distance", "squared")
    assert code == EXIT_OK
    assert payload["final_set"] == [0, 1, 2]
