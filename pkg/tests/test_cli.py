import json

import pytest

from asd_forge.cli import ConfigError, load_config, main, parse_primes


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_primes():
    assert parse_primes("5..13") == [5, 7, 11, 13]
    assert parse_primes("5,7, 11") == [5, 7, 11]
    assert parse_primes("5..11,17") == [5, 7, 11, 17]
    for bad in ("5..", "a..b", "13..5", ""):
        with pytest.raises(ConfigError):
            parse_primes(bad)


def test_expand_delta(capsys):
    code, out, _ = run(capsys, "expand", "--form", "delta", "--order", "6")
    assert code == 0
    assert out.split(",")[:3] == ["1", " -24", " 252"]
    code, out, _ = run(capsys, "expand", "--form", "delta", "--order", "6", "--json")
    doc = json.loads(out)
    assert doc["coefficients"][:2] == [["1", "1"], ["2", "-24"]]


def test_pipeline(capsys):
    code, out, _ = run(capsys, "pipeline", "gamma15", "--order", "40", "--json")
    assert code == 0
    assert json.loads(out)


def test_zagier_apery(capsys):
    code, out, _ = run(capsys, "zagier", "--a", "11", "--b", "-1", "--lambda", "-3", "--order", "6", "--json")
    assert code == 0
    assert "147" in out


@pytest.mark.parametrize("check", ["asd-ec", "mu", "honda"])
def test_fgl(capsys, check):
    code, _, _ = run(capsys, "fgl", "--curve", "legendre:-1", "--prime", "5", "--check", check)
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["--check", "van-hamme", "--prime", "13"],
    ["--check", "dwork", "--prime", "7", "--lambda", "-1"],
    ["--check", "clausen", "--prime", "7"],
    ["--check", "beukers", "--prime", "11"],
    ["--check", "stienstra-beukers", "--prime", "13"],
])
def test_hyp(capsys, argv):
    code, out, _ = run(capsys, "hyp", *argv)
    assert code == 0, out


def test_curve_charpoly(capsys):
    code, out, _ = run(capsys, "curve", "--model", "genus2-x5plus2", "--prime", "3", "--charpoly", "--json")
    assert code == 0
    assert "9" in out


def test_suite_exit_codes(capsys):
    code, out, _ = run(capsys, "suite", "asd-ec", "--primes", "5..13")
    assert code == 0 and "FAIL" not in out
    code, _, err = run(capsys, "suite", "asd-ec", "--primes", "5..")
    assert code == 2 and "error" in err


def test_suite_json_output(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, _, _ = run(capsys, "suite", "atkin-j", "--primes", "5,7", "--json", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    cell = doc["suites"][0]["cells"][0]
    rep = cell["reports"][0]
    assert {"suite", "prime", "spec", "verdicts", "summary"} <= set(rep)


def test_config_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text('suites = ["asd-ec"]\nprimes = "5..7"\nformat = "csv"\n')
    c = load_config(cfg)
    assert c.suites == ["asd-ec"] and c.primes == {"asd-ec": [5, 7]}
    code, out, _ = run(capsys, "suite", "asd-ec", "--config", str(cfg))
    assert code == 0 and out.startswith("suite,prime")
    code, out, _ = run(capsys, "suite", "asd-ec", "--config", str(cfg), "--primes", "11", "--format", "json")
    doc = json.loads(out)
    assert [c["prime"] for c in doc["suites"][0]["cells"]] == [11]


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text('suites = ["asd-ec"]\ncolour = "red"\n')
    with pytest.raises(ConfigError):
        load_config(cfg)


def test_report_writes_artifacts(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        code, _, _ = run(capsys, "report", "--suites", "asd-ec,atkin-j", "--primes", "5,7",
                         "--out", str(out), "--no-timestamp")
        assert code == 0
    for name in ("report.json", "report.csv", "summary.png", "margin_asd-ec.png", "margin_atkin-j.png"):
        assert (a / name).stat().st_size > 0
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
    assert (a / "report.csv").read_text().splitlines()[0].startswith("suite,prime,label,n")
