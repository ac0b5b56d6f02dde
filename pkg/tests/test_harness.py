import json
import math
from pathlib import Path

import pytest

from ldis import cli, harness
from ldis.errors import ConfigError
from ldis.events import EventSet

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"
GOLDEN = Path(__file__).resolve().parent / "golden"
GOLDEN_CASES = ["rate_exponential", "limit_undertilt", "lra_two_sided", "simulate_gaussian", "oracle_exponential"]


def _mode(path):
    return harness.load_config(path).mode


@pytest.mark.parametrize("name", GOLDEN_CASES)
def test_golden_csv(name, capsys):
    cfg = CONFIGS / f"{name}.ini"
    assert cli.main([_mode(cfg), str(cfg)]) == 0
    out = capsys.readouterr().out
    assert out == (GOLDEN / f"{name}.csv").read_text()
    assert "\r" not in out and out.endswith("\n")


def test_rate_row():
    rows = harness.run_mode(harness.load_config(CONFIGS / "rate_exponential.ini")).rows
    row = next(r for r in rows if abs(r[0] - 1.3) < 1e-12)
    assert f"{row[1]:.6f}" == "0.037636"


def test_csv_formatting_rules():
    text = (GOLDEN / "limit_undertilt.csv").read_text()
    header, first = text.splitlines()[:2]
    assert header == "r,xi,y,exponent,label"
    assert first == "0.020000000,1.000000000,-inf,inf,zero-hit"
    for line in text.splitlines()[1:]:
        for cell in line.split(","):
            if cell.replace(".", "", 1).replace("-", "", 1).isdigit():
                assert len(cell.split(".")[1]) == 9


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.ini")), ids=lambda p: p.stem)
def test_config_round_trip(path):
    cfg = harness.load_config(path)
    echo = harness.echo_config(cfg)
    assert harness.parse_config(echo) == cfg
    assert harness.echo_config(harness.parse_config(echo)) == echo


@pytest.mark.parametrize("name", harness.PRESETS)
def test_preset_round_trip(name):
    for _, cfg in harness.preset_scenarios(name, seeds=(1, 2)):
        assert harness.parse_config(harness.echo_config(cfg)) == cfg


def test_auto_reference_rate():
    text = (CONFIGS / "simulate_gaussian.ini").read_text()
    text = text.replace("grid = r", "grid = c\nreference_rate = auto").replace("theta = 0.8", "theta = 0.4")
    cfg = harness.parse_config(text)
    assert cfg.schedule.reference_rate == pytest.approx(0.08, abs=1e-12)


@pytest.mark.parametrize(
    "text",
    [
        "[scenario]\nmode = nope\n[base]\nkind = gaussian\nmean = 0\nvariance = 1\n",
        "[scenario]\nmode = rate\n[base]\nkind = gaussian\nmean = 0\nvariance = -1\n[grid]\nvalues = 1\n",
        "[scenario]\nmode = simulate\n[base]\nkind = gaussian\nmean = 0\nvariance = 1\n",
        "[scenario]\nmode = rate\n[base]\nkind = weird\n[grid]\nvalues = 1\n",
        "not an ini file",
    ],
)
def test_bad_configs_fail_fast(text):
    with pytest.raises(ConfigError):
        harness.parse_config(text)


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_exit_codes(tmp_path, capsys):
    sim = (CONFIGS / "simulate_gaussian.ini").read_text()
    assert cli.main(["simulate", str(tmp_path / "missing.ini")]) == cli.EXIT_CONFIG
    over = _write(tmp_path, "over.ini", sim.replace("cap = 1e7", "cap = 100"))
    assert cli.main(["simulate", over]) == cli.EXIT_BUDGET
    assert cli.main(["rate", str(CONFIGS / "simulate_gaussian.ini")]) == cli.EXIT_CONFIG
    bad = _write(tmp_path, "bad.ini", sim.replace("theta = 0.8", "theta = 0.8\n[extra").replace("[event]", "[event]"))
    assert cli.main(["simulate", bad]) == cli.EXIT_CONFIG
    absc = _write(
        tmp_path,
        "abs.ini",
        sim.replace("kind = tilt\ntheta = 0.8", "kind = exponential\nrate = 1"),
    )
    assert cli.main(["simulate", absc]) == cli.EXIT_CONFIG
    err = capsys.readouterr().err
    assert err.count("ldis: error:") == 5
    assert cli.exit_code(__import__("ldis").errors.ConvergenceError("x")) == cli.EXIT_NUMERIC
    assert cli.exit_code(RuntimeError("x")) == cli.EXIT_FAIL


def test_outputs_and_seed_override(tmp_path, capsys):
    cfg = CONFIGS / "simulate_gaussian.ini"
    assert cli.main(["simulate", str(cfg), "--seed", "5", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "simulate_gaussian.json").read_text())
    assert "seeds = 5" in doc["config"]
    assert doc["reports"][0]["seed"] == 5
    svg = (tmp_path / "simulate_gaussian.svg").read_text()
    assert svg.startswith('<svg xmlns="http://www.w3.org/2000/svg" width="960" height="540"')
    csv = (tmp_path / "simulate_gaussian.csv").read_text()
    assert csv.splitlines()[1].startswith("5,")


def test_lra_outputs_breakpoints():
    res = harness.run_mode(harness.load_config(CONFIGS / "lra_two_sided.ini"))
    bps = sorted(res.extra["breakpoints"])
    assert bps[0] == pytest.approx(0.44, abs=1e-8) and bps[1] == pytest.approx(2.42, abs=1e-8)


def test_selftest_passes(capsys):
    assert cli.main(["selftest"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_quick_preset_files(tmp_path):
    run = harness.run_preset("two_sided_lra", seeds=(1,), quick=True)
    paths = harness.write_preset(run, tmp_path)
    names = sorted(Path(p).name for p in paths)
    assert "two_sided_lra.csv" in names and "two_sided_lra_curve.csv" in names
    assert "two_sided_lra.timing.json" in names
    doc = json.loads((tmp_path / "two_sided_lra.json").read_text())
    assert "wall_time" not in json.dumps(doc)
