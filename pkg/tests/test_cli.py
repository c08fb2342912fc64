import csv
import io
import json

import pytest

from wavechaos import cli


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


@pytest.fixture
def models(tmp_path):
    return {
        "wn3": _write(tmp_path, "wn3.json", {"alpha0": 0.0, "covariance": {"kind": "white-noise", "dimension": 3}}),
        "wn1": _write(tmp_path, "wn1.json", {"alpha0": 0.0, "covariance": {"kind": "white-noise", "dimension": 1}}),
        "pi": _write(tmp_path, "pi.json", {"alpha0": 0.0, "measure": {
            "dimension": 1, "kind": "atomic",
            "params": {"atoms": [[3.141592653589793], [-3.141592653589793]], "weights": [1, 1]}}}),
        "bad": _write(tmp_path, "bad.json", {"alpha0": 0.5, "covariance": {"kind": "riesz", "dimension": 3,
                                                                           "alpha": 2.6}}),
        "riesz": _write(tmp_path, "r.json", {"alpha0": 0.5, "covariance": {"kind": "riesz", "dimension": 1,
                                                                           "alpha": 0.5}}),
        "broken": _write(tmp_path, "broken.json", {"covariance": {"kind": "riesz"}}),
    }


def run(argv, capsys):
    code = cli.run(argv)
    return code, capsys.readouterr()


def test_white_noise_space_is_divergent(models, capsys):
    code, out = run(["check-condition", "--model", models["wn3"]], capsys)
    rep = json.loads(out.out)
    assert code == 0
    assert rep["status"] == "divergent" and rep["result"]["status"] == "divergent"
    assert rep["constants"]["version"]
    assert rep["config"]["model"] == models["wn3"]
    assert set(rep["timing"]) == {"timestamp", "wall_time"}


def test_white_noise_line_values(models, capsys):
    _, out = run(["check-condition", "--model", models["wn1"]], capsys)
    assert abs(json.loads(out.out)["result"]["value"] - 2.0) < 1e-6
    _, out = run(["check-condition", "--model", models["wn1"], "--dalang"], capsys)
    assert abs(json.loads(out.out)["result"]["value"] - 3.141592653589793) < 1e-6


def test_input_errors_exit_2(models, tmp_path, capsys):
    assert run(["check-condition", "--model", str(tmp_path / "missing.json")], capsys)[0] == 2
    assert run(["check-condition", "--model", models["broken"]], capsys)[0] == 2
    assert run(["first-chaos", "--t", "1"], capsys)[0] == 2
    with pytest.raises(SystemExit) as info:
        cli.run(["check-condition", "--bogus"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        cli.run(["check-condition", "--model", models["wn1"], "--tol", "-1"])
    with pytest.raises(SystemExit):
        cli.run(["simulate-noise", "--model", models["pi"], "--seed", str(2 ** 64)])


def test_first_chaos_divergent_and_finite(models, capsys):
    code, out = run(["first-chaos", "--model", models["bad"], "--t", "1"], capsys)
    assert code == 0 and json.loads(out.out)["status"] == "divergent"
    code, out = run(["first-chaos", "--model", models["pi"], "--t", "1", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out.out)))
    assert code == 0 and abs(float(rows[0]["value"]) - 8 / 3.141592653589793 ** 4) < 1e-12


def test_scaling_csv(capsys):
    code, out = run(["scaling-test", "--n", "1", "--alpha", "0.5", "--alpha0", "0.5", "--samples", "5e4",
                     "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out.out)))
    assert code == 0
    assert [r["t"] for r in rows] == ["0.5", "2.0"]
    assert {"ratio", "expected_ratio", "z"} <= set(rows[0])


def test_simulate_noise_reproducible(models, tmp_path, capsys):
    outs = []
    for threads in ("1", "4"):
        path = tmp_path / f"noise{threads}.json"
        code = cli.run(["simulate-noise", "--model", models["pi"], "--t", "1", "--samples", "1e5",
                        "--seed", "42", "--threads", threads, "--out", str(path)])
        assert code == 0
        rep = json.loads(path.read_text())
        rep.pop("timing")
        rep["config"].pop("threads")
        rep["config"].pop("out")
        outs.append(json.dumps(rep, sort_keys=True))
    assert outs[0] == outs[1]
    assert {"norm_quadrature", "norm_empirical", "stderr", "z"} <= set(json.loads(outs[0])["result"])


def test_simulate_noise_needs_atomic(models, capsys):
    assert run(["simulate-noise", "--model", models["riesz"], "--samples", "100"], capsys)[0] == 2


def test_laplace_bound_divergent(models, capsys):
    code, out = run(["laplace-bound", "--model", models["bad"]], capsys)
    assert code == 0 and json.loads(out.out)["status"] == "divergent"


def test_series_diag(models, capsys):
    code, out = run(["series-diag", "--model", models["riesz"], "--samples", "2e4", "--n-max", "2"], capsys)
    rep = json.loads(out.out)
    assert code == 0 and len(rep["result"]["terms"]) == 3


def test_sweep_single_point_and_invalid(capsys):
    code, out = run(["sweep", "--alpha0", "0.5", "--alpha", "1.0,2.0", "--d", "1"], capsys)
    pts = json.loads(out.out)["result"]["points"]
    assert code == 0
    assert pts[0]["status"] == "finite"
    assert pts[1]["status"] == "invalid-parameter"


def test_w_eval(tmp_path, capsys):
    data = _write(tmp_path, "d.json", {"dimension": 1, "u0": {"kind": "constant", "value": 1.0},
                                       "u1": {"kind": "constant", "value": 2.0}})
    code, out = run(["w-eval", "--data", data, "--t", "0.5", "--x", "0.0"], capsys)
    assert code == 0 and abs(json.loads(out.out)["result"]["value"] - 2.0) < 1e-8


def test_figure_option(models, tmp_path, capsys):
    pytest.importorskip("matplotlib")
    fig = tmp_path / "shells.png"
    code, _ = run(["check-condition", "--model", models["wn1"], "--figure", str(fig)], capsys)
    assert code == 0 and fig.stat().st_size > 0
