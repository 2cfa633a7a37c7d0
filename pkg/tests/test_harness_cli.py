import csv
import io
import json

import pytest

from qcdecay import cli
from qcdecay.errors import ConfigError
from qcdecay.families import list_families, parse_field, parse_lift, parse_map
from qcdecay.harness import SuiteConfig, run_suite


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- families ------------------------------------------------------------------

def test_catalog_entries():
    cat = {e["name"]: e for e in list_families()}
    assert "identity" in cat
    assert "ell" in cat["radial"]["constraint"] and "< 1" in cat["radial"]["constraint"]
    assert "positive" in cat["trig"]["constraint"]


def test_catalog_specs_parse():
    parsers = {"lift": parse_lift, "field": parse_field, "map": parse_map}
    for e in list_families():
        if "..." in json.dumps(e["spec"]) or e["kind"] == "map" and e["name"] == "solver":
            continue
        parsers[e["kind"]](e["spec"])


@pytest.mark.parametrize(
    "spec",
    ['{"type": "nope"}', "[1, 2]", "{bad json", '{"type": "constant", "k": 1.5}', '{"type": "radial"}'],
)
def test_bad_field_specs(spec):
    with pytest.raises(ConfigError):
        parse_field(spec)


# -- config --------------------------------------------------------------------

@pytest.mark.parametrize(
    "d",
    [
        {"suite": "everything"},
        {"alphas": [1.5]},
        {"lifts": [{"type": "trig", "a": 1.5}]},
        {"tolerances": {"made_up": 1}},
        {"grid": {"n_q": 3}},
        {"colour": "red"},
    ],
)
def test_config_validation(d):
    with pytest.raises(ConfigError):
        SuiteConfig.from_dict(d)


def test_trivial_suite_measures_zero():
    rep = run_suite(SuiteConfig(suite="trivial"))
    assert rep.overall_pass
    assert all(r.measured == 0 for r in rep.records)


def test_report_is_deterministic_apart_from_timestamp():
    a = run_suite(SuiteConfig(suite="recurrence")).as_dict()
    b = run_suite(SuiteConfig(suite="recurrence")).as_dict()
    a.pop("timestamp")
    b.pop("timestamp")
    assert a == b


# -- command line ---------------------------------------------------------------

def test_cli_families(capsys):
    code, out, _ = run_cli(capsys, "families")
    assert code == 0 and any(e["name"] == "identity" for e in json.loads(out))


def test_cli_qsq_single_value(capsys):
    code, out, err = run_cli(capsys, "qsq", "--lift", '{"type": "trig", "a": 0.1}', "--x", "0.1", "--t", "0.2", "--alpha", "0.5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and abs(float(rows[0]["m"]) - 0.940889046638) < 1e-11
    consts = json.loads(err)
    assert consts["inf_deriv"] == pytest.approx(0.9, abs=1e-12)


def test_cli_extend_ba(capsys):
    code, out, _ = run_cli(capsys, "extend-ba", "--lift", '{"type": "identity"}', "--points", "5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 5
    assert all(float(r["re_mu"]) == 0 and float(r["im_mu"]) == 0 for r in rows)


def test_cli_norms_writes_plot(capsys, tmp_path):
    png = tmp_path / "kappa.png"
    code, out, err = run_cli(capsys, "norms", "--field", '{"type": "power", "ell": 0.5, "alpha": 0.5}', "--plot", str(png))
    assert code == 0 and png.stat().st_size > 0
    assert json.loads(err)["weighted_norm_est"] == pytest.approx(0.5 * 2**0.5, abs=1e-12)


def test_cli_decay(capsys):
    code, out, _ = run_cli(capsys, "decay", "--map", '{"type": "identity"}', "--tmin", "0.0625")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    assert all(float(r["beta"]) == 0 for r in rows)


def test_cli_phi(capsys):
    code, out, _ = run_cli(capsys, "phi", "--field", '{"type": "constant", "k": 0.2}', "--grid", "512,2", "--eval-circle", "2,4")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    assert abs(float(rows[0]["re_S"]) - (-0.08310)) < 1e-2


def test_cli_certify(capsys):
    code, out, _ = run_cli(capsys, "certify", "--suite", "koebe")
    recs = json.loads(out)
    assert code == 0 and len(recs) == 80 and all(r["pass"] for r in recs)


def test_cli_verify_writes_report(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "verify", "--suite", "mori", "--out", str(tmp_path))
    assert code == 0 and out.strip().endswith("records)")
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["overall_pass"] and report["n_failed"] == 0
    assert (tmp_path / "mori.csv").exists() and (tmp_path / "mori.png").exists()


def test_cli_verify_failing_config_exits_nonzero(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"suite": "mori", "tolerances": {"stability": 0.0}}))
    code, out, _ = run_cli(capsys, "verify", "--config", str(cfg), "--no-figures")
    assert code == 1 and "FAIL" in out


def test_cli_bad_input_exits_two(capsys):
    code, _, err = run_cli(capsys, "qsq", "--lift", '{"type": "trig", "a": 1.5}', "--x", "0", "--t", "0.1")
    assert code == 2 and err.startswith("error:")
