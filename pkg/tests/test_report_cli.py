import json

import pytest

from realwonder import cli
from realwonder.engine import wonderful_run
from realwonder.errors import EngineError
from realwonder.models import build_moduli, parse_sigma
from realwonder.report import build_report, from_json, render_text, to_json


def run_report(sigma="(1 2)", n=5):
    result = wonderful_run(build_moduli(parse_sigma(sigma, n)))
    return build_report({"kind": "moduli", "n": n, "sigma": sigma}, result)


def test_reports_are_deterministic():
    assert to_json(run_report()) == to_json(run_report())


def test_report_roundtrip_identity():
    text = to_json(run_report())
    assert to_json(from_json(text)) == text


def test_report_schema_guard():
    report = run_report()
    report["schema_version"] = 99
    with pytest.raises(Exception):
        from_json(to_json(report))


def test_report_checks_all_pass():
    report = run_report("id", 6)
    assert report["checks"] and all(ok for _, ok in report["checks"])
    assert report["final"]["total_c"] == 34


def test_render_text_mentions_verdict():
    text = render_text(run_report(), trace=True)
    assert "EffectiveGaloisMaximal" in text
    assert "blow up" in text
    assert "pass" in text


def test_cli_moduli(tmp_path, capsys):
    machine = tmp_path / "report.json"
    code = cli.main(
        ["moduli", "--n", "5", "--sigma", "(1 2)", "--machine", str(machine)]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "verdict: EffectiveGaloisMaximal" in out
    assert "total 7" in out and "total 5" in out
    report = json.loads(machine.read_text())
    assert report["final"]["deficiency"] == 2


def test_cli_byte_identical_reports(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert cli.main(["moduli", "--n", "5", "--machine", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_cli_dcp(tmp_path, capsys):
    spec = {
        "ambient_dim": 2,
        "generators": [
            {"name": "p", "rnc_span": ["0"]},
            {"name": "q", "rnc_span": ["1"]},
            {"name": "r", "rnc_span": ["i"]},
            {"name": "rbar", "rnc_span": ["-i"]},
        ],
    }
    path = tmp_path / "arr.json"
    path.write_text(json.dumps(spec))
    assert cli.main(["dcp", str(path)]) == 0
    out = capsys.readouterr().out
    assert "total 7" in out and "total 5" in out


def test_cli_dcp_basis_input(tmp_path, capsys):
    spec = {
        "ambient_dim": 3,
        "generators": [
            {"name": "line", "basis": [["1", "0", "0", "0"], ["0", "1", "0", "0"]]}
        ],
    }
    path = tmp_path / "arr.json"
    path.write_text(json.dumps(spec))
    assert cli.main(["dcp", str(path), "--validate-prefixes"]) == 0
    assert "ConjugationSpace" in capsys.readouterr().out


def test_cli_config(tmp_path, capsys):
    space = tmp_path / "space.json"
    space.write_text(
        json.dumps(
            {
                "name": "P2",
                "dim_c": 2,
                "betti_c": [1, 0, 1, 0, 1],
                "betti_r": [1, 1, 1],
                "flags": {"effective": "yes", "maximal": "yes", "galois_maximal": "yes"},
            }
        )
    )
    assert cli.main(["config", "--model", "fm", "--n", "2", "--space", str(space)]) == 0
    out = capsys.readouterr().out
    assert "total 12" in out and "ConjugationSpace" in out
    # kt needs a building set
    assert (
        cli.main(["config", "--model", "kt", "--n", "2", "--space", str(space)]) == 2
    )


def test_cli_seed_flags(tmp_path, capsys):
    space = tmp_path / "space.json"
    space.write_text(
        json.dumps(
            {
                "name": "mystery",
                "dim_c": 1,
                "betti_c": [1, 0, 1],
                "betti_r": [1, 1],
                "flags": {},
            }
        )
    )
    flags = tmp_path / "flags.json"
    flags.write_text(json.dumps({"ambient": {"effective": "yes"}}))
    assert (
        cli.main(
            [
                "config",
                "--model",
                "fm",
                "--n",
                "3",
                "--space",
                str(space),
                "--seed-flags",
                str(flags),
            ]
        )
        == 0
    )
    out = capsys.readouterr().out
    assert "user axiom" in out


def test_cli_hilb2_file(tmp_path, capsys):
    payload = {
        "smith": {
            "n": 2,
            "beta_total": 4,
            "beta_fixed": 2,
            "delta": [0, 1, 0, 0],
            "rank_mu": 2,
        },
        "attest": {"tors2_free": True, "effective_gm": True},
    }
    path = tmp_path / "smith.json"
    path.write_text(json.dumps(payload))
    out_path = tmp_path / "out.json"
    assert cli.main(["hilb2", "--file", str(path), "--machine", str(out_path)]) == 0
    out = capsys.readouterr().out
    assert "12" in out
    data = json.loads(out_path.read_text())
    assert data["deficiency"] == {"general": 12, "effective_gm": 12}


def test_cli_hilb2_from_report(tmp_path, capsys):
    report = tmp_path / "report.json"
    assert cli.main(["moduli", "--n", "5", "--machine", str(report)]) == 0
    capsys.readouterr()
    assert cli.main(["hilb2", "--report", str(report)]) == 0
    assert "0" in capsys.readouterr().out
    # non-conjugation-space reports are refused
    assert (
        cli.main(["moduli", "--n", "5", "--sigma", "(1 2)", "--machine", str(report)])
        == 0
    )
    capsys.readouterr()
    assert cli.main(["hilb2", "--report", str(report)]) == 2


def test_cli_input_error_exit_codes(tmp_path):
    assert cli.main(["moduli", "--n", "5", "--sigma", "(1 2 3)"]) == 2
    assert cli.main(["dcp", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["dcp", str(bad)]) == 2


def test_cli_engine_error_maps_to_3(monkeypatch):
    def boom(args):
        raise EngineError("guard tripped")

    monkeypatch.setitem(cli.build_parser.__globals__, "cmd_moduli", boom)
    parser_main = cli.main
    assert parser_main(["moduli", "--n", "5"]) == 3


def test_cli_verify_core_smoke(capsys):
    assert cli.main(["verify", "--suite", "core"]) == 0
    out = capsys.readouterr().out
    assert "all checks passed" in out
    assert out.count("[pass]") == 12
