"""Spec files, CSV/JSON emission, schemas, manifests, and CLI exit codes."""

import json
import math

import jsonschema
import pytest

from sepsplit import (
    DuplicateHarmonic,
    ParseError,
    RunManifest,
    StokesEstimate,
    ZeroMeanViolation,
    arnold_pipeline,
    emit_spec,
    load_spec,
    save_spec,
    validate_spec,
)
from sepsplit.cli import main
from sepsplit.io import (
    MELNIKOV_CSV_HEADER,
    SCAN_CSV_HEADER,
    Table1Cell,
    arnold_report_dict,
    format_table1,
    load_schema,
    load_table1_fixture,
    manifest_path,
    plateau_report_dict,
    run_table1,
    write_melnikov_csv,
    write_scan_csv,
)


def write_json_spec(tmp_path, doc, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


COS_SPEC_DOC = {"harmonics": [{"cos": 1, "amp": 1.0}]}
SPEC_23_DOC = {"harmonics": [{"cos": 3, "amp": 20.0}, {"cos": 2, "amp": 16.0}]}


# --- spec documents ---


def test_load_spec_cos_sugar(tmp_path):
    spec = load_spec(write_json_spec(tmp_path, SPEC_23_DOC))
    assert spec.coefficients == {3: 10.0, 2: 8.0}
    assert spec.sigma0 == 1.0


def test_load_spec_sin_sugar_and_merge(tmp_path):
    doc = {
        "sigma0": 1.5,
        "harmonics": [
            {"sin": 2, "amp": 6.0},
            {"cos": 2, "amp": 4.0},
            {"cos": 3, "amp": 2.0},
        ],
    }
    spec = load_spec(write_json_spec(tmp_path, doc))
    assert spec.coefficients == {2: 2.0 - 3.0j, 3: 1.0}
    assert spec.sigma0 == 1.5


def test_load_spec_explicit_entries(tmp_path):
    doc = {"harmonics": [{"k": -2, "re": 1.0, "im": 1.0}, {"k": 3, "re": 0.5, "im": 0.0}]}
    spec = load_spec(write_json_spec(tmp_path, doc))
    assert spec.coefficients == {2: 1.0 - 1.0j, 3: 0.5}


def test_load_spec_toml(tmp_path):
    path = tmp_path / "forcing.toml"
    path.write_text(
        "sigma0 = 2.0\n"
        "[[harmonics]]\ncos = 3\namp = 20.0\n"
        "[[harmonics]]\ncos = 2\namp = 16.0\n"
    )
    spec = load_spec(path)
    assert spec.coefficients == {3: 10.0, 2: 8.0}
    assert spec.sigma0 == 2.0


def test_load_spec_duplicate_explicit(tmp_path):
    doc = {"harmonics": [{"k": 2, "re": 1.0, "im": 0.0}, {"k": 2, "re": 2.0, "im": 0.0}]}
    with pytest.raises(DuplicateHarmonic):
        load_spec(write_json_spec(tmp_path, doc))
    # explicit and sugar entries for the same k collide too
    doc = {"harmonics": [{"k": 2, "re": 1.0, "im": 0.0}, {"cos": 2, "amp": 1.0}, {"cos": 3, "amp": 1.0}]}
    with pytest.raises(DuplicateHarmonic):
        load_spec(write_json_spec(tmp_path, doc))


def test_load_spec_parse_errors(tmp_path):
    with pytest.raises(ParseError):
        load_spec(write_json_spec(tmp_path, {"harmonics": "nope"}))
    with pytest.raises(ParseError):
        load_spec(write_json_spec(tmp_path, {"harmonics": [{"cos": 1}]}))
    with pytest.raises(ParseError):
        load_spec(write_json_spec(tmp_path, {"harmonics": [17]}))
    with pytest.raises(ParseError):
        load_spec(write_json_spec(tmp_path, [1, 2, 3]))
    with pytest.raises(ParseError):
        load_spec(write_json_spec(tmp_path, {"harmonics": [], "sigma0": "wide"}))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_spec(bad)
    bad_toml = tmp_path / "bad.toml"
    bad_toml.write_text("= nope")
    with pytest.raises(ParseError):
        load_spec(bad_toml)


def test_load_spec_validation_passthrough(tmp_path):
    doc = {"harmonics": [{"k": 0, "re": 1.0, "im": 0.0}]}
    with pytest.raises(ZeroMeanViolation):
        load_spec(write_json_spec(tmp_path, doc))


def test_spec_round_trip(tmp_path):
    spec = validate_spec([(1, 0.125 - 0.375j), (4, 2.0**-40)], sigma0=0.75)
    path = tmp_path / "spec.json"
    save_spec(spec, path)
    again = load_spec(path)
    assert again.coefficients == spec.coefficients
    assert again.sigma0 == spec.sigma0
    assert emit_spec(again) == emit_spec(spec)


# --- CSV and reports ---


def test_scan_csv_round_trip(tmp_path):
    rows = [(4.0, 55.80061234567891 + 1e-17j), (5.0, -0.5 + 0.25j)]
    path = tmp_path / "scan.csv"
    write_scan_csv(path, rows)
    lines = path.read_text().splitlines()
    assert lines[0] == SCAN_CSV_HEADER == "rho,re_chi,im_chi,abs_chi"
    for line, (rho, chi) in zip(lines[1:], rows):
        r, re, im, ab = (float(p) for p in line.split(","))
        assert r == rho and re == chi.real and im == chi.imag and ab == abs(chi)


def test_melnikov_csv(tmp_path):
    path = tmp_path / "mel.csv"
    write_melnikov_csv(path, [(0.0, 1.0 / 3.0, 1e-300)])
    lines = path.read_text().splitlines()
    assert lines[0] == MELNIKOV_CSV_HEADER == "tau,melnikov,leading_term"
    tau, value, leading = (float(p) for p in lines[1].split(","))
    assert value == 1.0 / 3.0 and leading == 1e-300


def test_plateau_report_schema():
    est = StokesEstimate((4.0, 5.0, 6.0, 7.0), (1j, 1j, 1j, 1j), 1j, (4.0, 6.0), 0.003)
    payload = plateau_report_dict(est)
    jsonschema.validate(payload, load_schema("plateau"))
    assert payload["plateau_value_im"] == 1.0
    assert payload["window_lo"] == 4.0 and payload["window_hi"] == 6.0


def test_manifest_schema_and_path(tmp_path):
    manifest = RunManifest("plateau", {"spec": "x.json"}, duration_s=0.25)
    jsonschema.validate(manifest.to_dict(), load_schema("manifest"))
    assert manifest_path(tmp_path / "out.csv").name == "out.csv.manifest.json"


# --- reference table ---


def synthetic_fixture(references):
    return {
        "version": 1,
        "description": "synthetic",
        "re_z0": 40.0,
        "series_order": 20,
        "rho": [4, 5, 6, 11],
        "rows": [
            {
                "label": "order-1 forcing",
                "order": 1,
                "harmonics": [{"k": 1, "re": 0.5, "im": 0.0}],
                "reference": references,
            }
        ],
    }


def test_run_table1_synthetic_pass():
    two_pi = 2.0 * math.pi
    result = run_table1(fixture=synthetic_fixture([two_pi, two_pi, two_pi, 9.9]))
    assert result.passed
    cells = result.rows[0].cells
    assert [c.gated for c in cells] == [True, True, True, False]
    assert cells[-1].passed  # ungated cell never fails
    text = format_table1(result)
    assert "ok" in text and "-" in text and "FAIL" not in text


def test_run_table1_synthetic_fail():
    result = run_table1(fixture=synthetic_fixture([7.0, 6.3, 6.3, 6.3]))
    assert not result.passed
    assert not result.rows[0].cells[0].passed
    assert "FAIL" in format_table1(result)


def test_table1_cell_gate():
    cell = Table1Cell(4.0, 1.0 + 0j, 1.05, rel_deviation=0.05, gated=True)
    assert not cell.passed
    cell = Table1Cell(12.0, 1.0 + 0j, 1.05, rel_deviation=0.05, gated=False)
    assert cell.passed


def test_shipped_fixture_shape():
    fixture = load_table1_fixture()
    assert fixture["re_z0"] == 40.0 and fixture["series_order"] == 20
    assert len(fixture["rows"]) == 2
    for row in fixture["rows"]:
        assert len(row["reference"]) == len(fixture["rho"])


# --- CLI ---


def test_cli_validate_ok(tmp_path, capsys):
    assert main(["validate", write_json_spec(tmp_path, SPEC_23_DOC)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["harmonics"] == [
        {"k": 2, "re": 8.0, "im": 0.0},
        {"k": 3, "re": 10.0, "im": 0.0},
    ]


def test_cli_analyze(tmp_path, capsys):
    assert main(["analyze", write_json_spec(tmp_path, SPEC_23_DOC)]) == 0
    out = capsys.readouterr().out
    assert "n(g) = 2" in out
    assert "witness: 1 = (-2) + (3)" in out


def test_cli_chi_analytic(tmp_path, capsys):
    assert main(["chi-analytic", write_json_spec(tmp_path, SPEC_23_DOC)]) == 0
    out = capsys.readouterr().out
    line = next(l for l in out.splitlines() if l.startswith("chi_re"))
    assert abs(float(line.split(":")[1]) - 160.0 * math.pi / 9.0) < 1e-12


def test_cli_usage_errors(tmp_path, capsys):
    spec = write_json_spec(tmp_path, COS_SPEC_DOC)
    assert main(["chi-numeric", spec, "--rho-grid", "nonsense"]) == 1
    assert main(["chi-numeric", spec, "--rho-grid", "8:4:1"]) == 1
    assert main(["melnikov", spec]) == 1  # missing required --epsilon
    assert main(["no-such-command"]) == 1
    capsys.readouterr()


def test_cli_validation_errors(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "missing.json")]) == 2
    doc = {"harmonics": [{"k": 0, "re": 1.0, "im": 0.0}]}
    assert main(["validate", write_json_spec(tmp_path, doc, "zero.json")]) == 2
    spec = write_json_spec(tmp_path, SPEC_23_DOC)
    assert main(["chi-numeric", spec, "--order", "3", "--rho-grid", "4:7:1"]) == 2
    assert main(["chi-analytic", write_json_spec(tmp_path, {"harmonics": [{"cos": 5, "amp": 2.0}, {"cos": 3, "amp": 2.0}]}, "n3.json")]) == 2
    capsys.readouterr()


def test_cli_numerical_error_exit(tmp_path, capsys):
    spec = write_json_spec(tmp_path, COS_SPEC_DOC)
    # R < 2N makes the seeds unusable; surfaced as a numerical failure
    assert main(["chi-numeric", spec, "--re-z0", "30", "--rho-grid", "4:7:1"]) == 3
    err = capsys.readouterr().err
    assert "numerical failure" in err and "branch integration" in err


def test_cli_chi_numeric_csv_and_manifest(tmp_path, capsys):
    spec = write_json_spec(tmp_path, COS_SPEC_DOC)
    out = tmp_path / "scan.csv"
    args = [
        "chi-numeric", spec,
        "--rho-grid", "4:5:1",
        "--fixed-step", "0.05",
        "--out", str(out),
    ]
    assert main(args) == 0
    first = out.read_bytes()
    lines = first.decode().splitlines()
    assert lines[0] == SCAN_CSV_HEADER
    assert len(lines) == 3
    chi_at_4 = float(lines[1].split(",")[3])
    assert abs(chi_at_4 - 2.0 * math.pi) < 1e-5
    mpath = manifest_path(out)
    manifest = json.loads(mpath.read_text())
    jsonschema.validate(manifest, load_schema("manifest"))
    assert manifest["subcommand"] == "chi-numeric"
    assert manifest["parameters"]["fixed_step"] == 0.05
    # fixed-step rerun is bit-identical
    assert main(args) == 0
    assert out.read_bytes() == first
    capsys.readouterr()


def test_cli_plateau_json(tmp_path, capsys):
    spec = write_json_spec(tmp_path, COS_SPEC_DOC)
    out = tmp_path / "plateau.json"
    assert main(["plateau", spec, "--rho-grid", "4:7:1", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    jsonschema.validate(payload, load_schema("plateau"))
    assert abs(payload["plateau_value_re"] - 2.0 * math.pi) < 1e-6
    assert manifest_path(out).exists()
    capsys.readouterr()


def test_cli_plateau_stage_error(tmp_path, capsys):
    spec = write_json_spec(tmp_path, COS_SPEC_DOC)
    assert main(["plateau", spec, "--rho-grid", "12:15:1"]) == 3
    assert "plateau scan" in capsys.readouterr().err


def test_cli_melnikov_oracle_ok(tmp_path, capsys):
    spec = write_json_spec(tmp_path, SPEC_23_DOC)
    out = tmp_path / "mel.csv"
    code = main(["melnikov", spec, "--epsilon", "0.8", "--oracle", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == MELNIKOV_CSV_HEADER
    assert len(lines) == 10  # default grid 0..2pi step pi/4
    assert manifest_path(out).exists()
    capsys.readouterr()


def test_cli_melnikov_oracle_disagreement(tmp_path, capsys, monkeypatch):
    import sepsplit.cli as cli

    monkeypatch.setattr(cli, "melnikov_quadrature", lambda spec, eps, tau: 123.0)
    spec = write_json_spec(tmp_path, COS_SPEC_DOC)
    assert main(["melnikov", spec, "--epsilon", "0.8", "--oracle"]) == 3
    assert "oracle comparison" in capsys.readouterr().err


def test_cli_melnikov_below_oracle_floor(tmp_path, capsys):
    spec = write_json_spec(tmp_path, COS_SPEC_DOC)
    assert main(["melnikov", spec, "--epsilon", "0.1", "--oracle"]) == 3
    capsys.readouterr()


def test_cli_splitting(tmp_path, capsys):
    spec = write_json_spec(tmp_path, SPEC_23_DOC)
    code = main([
        "splitting", spec,
        "--mu", "0.05", "--epsilon", "0.1", "--tau", str(0.5 * math.pi),
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "dominance: asymptotic_valid" in out
    line = next(l for l in out.splitlines() if l.startswith("leading"))
    assert abs(float(line.split("=")[1]) - 4.208386134398521e-06) < 1e-18


def test_cli_arnold_json(tmp_path, capsys):
    out = tmp_path / "arnold.json"
    code = main([
        "arnold", "--p", "2", "--q", "3", "--A", "1", "--B", "1",
        "--out", str(out),
    ])
    assert code == 0
    payload = json.loads(out.read_text())
    jsonschema.validate(payload, load_schema("arnold"))
    assert payload["n"] == 2
    assert abs(payload["theta_im"] - math.pi / 9.0) < 1e-12
    assert payload["provenance"] == "analytic"
    assert set(payload) == {
        "p", "q", "A", "B", "n", "theta_re", "theta_im", "chi_re", "chi_im", "provenance",
    }
    assert payload == arnold_report_dict(arnold_pipeline(2, 3, 1.0, 1.0))
    assert manifest_path(out).exists()
    capsys.readouterr()


def test_cli_arnold_not_coprime(capsys):
    assert main(["arnold", "--p", "2", "--q", "4", "--A", "1", "--B", "1"]) == 2
    capsys.readouterr()


def test_cli_table1_synthetic(monkeypatch, tmp_path, capsys):
    import sepsplit.io as io_mod

    two_pi = 2.0 * math.pi
    monkeypatch.setattr(
        io_mod, "load_table1_fixture", lambda: synthetic_fixture([two_pi, two_pi, two_pi, 9.9])
    )
    out = tmp_path / "table.json"
    assert main(["table1", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["passed"] is True
    assert len(payload["rows"][0]["cells"]) == 4
    assert manifest_path(out).exists()
    capsys.readouterr()

    monkeypatch.setattr(
        io_mod, "load_table1_fixture", lambda: synthetic_fixture([7.0, two_pi, two_pi, 9.9])
    )
    assert main(["table1"]) == 4
    captured = capsys.readouterr()
    assert "FAIL" in captured.out
    assert "mismatch" in captured.err
