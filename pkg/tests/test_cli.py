import csv
import json

from click.testing import CliRunner

from spectraplex.cli import main
from spectraplex.graphs import multiplex_to_dict


def _write_multiplex(path, spec):
    with open(path, "w") as fh:
        json.dump(multiplex_to_dict(spec), fh)


def test_gen_layer_and_pairing(tmp_path):
    runner = CliRunner()
    l1 = tmp_path / "l1.json"
    l2 = tmp_path / "l2.json"
    m = tmp_path / "m.json"
    r = runner.invoke(main, ["gen", "--model", "ws", "--n", "8", "--k", "2",
                             "--p", "0.1", "--seed", "1", "--out", str(l1)])
    assert r.exit_code == 0, r.output
    data = json.loads(l1.read_text())
    assert data["n"] == 8 and data["edges"]

    r = runner.invoke(main, ["gen", "--model", "ws", "--n", "8", "--k", "2",
                             "--p", "0.1", "--seed", "2", "--out", str(l2)])
    assert r.exit_code == 0
    r = runner.invoke(main, ["gen", "--layer1", str(l1), "--layer2", str(l2),
                             "--out", str(m)])
    assert r.exit_code == 0
    md = json.loads(m.read_text())
    assert set(md) == {"layer1", "layer2", "matching"}


def test_gen_two_seeds_shortcut(tmp_path):
    runner = CliRunner()
    m = tmp_path / "m.json"
    r = runner.invoke(main, ["gen", "--model", "er", "--n", "6", "--p", "0.8",
                             "--seed", "1", "--seed2", "5", "--out", str(m)])
    assert r.exit_code == 0, r.output
    assert "layer2" in json.loads(m.read_text())


def test_solve_and_result_schema(tmp_path, single_edge_spec):
    runner = CliRunner()
    m = tmp_path / "m.json"
    out = tmp_path / "result.json"
    emb = tmp_path / "emb.csv"
    _write_multiplex(m, single_edge_spec)
    r = runner.invoke(main, ["solve", "--multiplex", str(m), "--objective",
                             "lambda2", "--budget", "1.0", "--out", str(out),
                             "--embed-out", str(emb)])
    assert r.exit_code == 0, r.output
    data = json.loads(out.read_text())
    for key in ("weights", "objective_value", "duality_gap", "mu", "xi",
                "eig_head", "eig_tail", "embedding_file", "status"):
        assert key in data
    assert data["status"] == "optimal"
    assert abs(data["objective_value"] - 1.0) <= 1e-6
    rows = list(csv.reader(emb.open()))
    assert rows[0][:2] == ["node", "layer"]
    assert len(rows) == 5


def test_sweep_csv_columns(tmp_path, single_edge_spec):
    runner = CliRunner()
    m = tmp_path / "m.json"
    out = tmp_path / "sweep.csv"
    _write_multiplex(m, single_edge_spec)
    r = runner.invoke(main, ["sweep", "--multiplex", str(m), "--objective",
                             "width", "--cmin", "0", "--cmax", "3",
                             "--points", "4", "--out", str(out)])
    assert r.exit_code == 0, r.output
    rows = list(csv.reader(out.open()))
    header = rows[0]
    for col in ("c", "objective_opt", "objective_uniform", "multiplicity", "emb_dim"):
        assert col in header
    assert len(rows) == 5


def test_threshold_command(tmp_path, triangle_spec):
    runner = CliRunner()
    m = tmp_path / "m.json"
    _write_multiplex(m, triangle_spec)
    r = runner.invoke(main, ["threshold", "--multiplex", str(m)])
    assert r.exit_code == 0, r.output
    data = json.loads(r.output)
    assert abs(data["c1_star"] - 1.25) <= 1e-6
    assert data["c_star"] > 0


def test_embed_scaled_json(tmp_path, single_edge_spec):
    runner = CliRunner()
    m = tmp_path / "m.json"
    _write_multiplex(m, single_edge_spec)
    r = runner.invoke(main, ["embed", "--multiplex", str(m), "--budget", "1.0",
                             "--scaled", "--format", "json"])
    assert r.exit_code == 0, r.output
    data = json.loads(r.output)
    assert data["source"] == "scaled"
    assert len(data["points"]) == 4


def test_verify_command_passes(tmp_path, triangle_spec):
    runner = CliRunner()
    m = tmp_path / "m.json"
    _write_multiplex(m, triangle_spec)
    r = runner.invoke(main, ["verify", "--multiplex", str(m), "--objective",
                             "lambdan", "--budget", "0.8"])
    assert r.exit_code == 0, r.output
    assert "FAIL" not in r.output


def test_correlate_csv(tmp_path, triangle_spec):
    runner = CliRunner()
    m = tmp_path / "m.json"
    _write_multiplex(m, triangle_spec)
    r = runner.invoke(main, ["correlate", "--multiplex", str(m), "--objective",
                             "lambdan", "--budget", "0.8", "--format", "csv"])
    assert r.exit_code == 0, r.output
    rows = list(csv.reader(r.output.splitlines()))
    assert rows[0] == ["measure", "layer", "pearson_r"]
    assert len(rows) == 9
