import json

from click.testing import CliRunner

from src import __version__
from src.cli import cli


def _run(*args):
    return CliRunner().invoke(cli, list(args))


def test_version() -> None:
    result = _run("--version")

    assert result.exit_code == 0
    assert __version__ in result.output


def test_enumerate_relevant(chi_registry_file) -> None:
    result = _run("enumerate", "-n", "1", "--registry", str(chi_registry_file))

    assert result.exit_code == 0
    assert "✓ 4 relevant items for n=1" in result.output
    assert "weight 1/2" in result.output


def test_enumerate_rs_json() -> None:
    result = _run("enumerate", "--rs", "-n", "2", "--json")

    assert result.exit_code == 0
    assert len(json.loads(result.output)) == 8


def test_enumerate_rs_needs_positive_n() -> None:
    result = _run("enumerate", "--rs", "-n", "0")

    assert result.exit_code == 2
    assert "✗ Error enumerating rs" in result.output


def test_enumerate_pipeline_writes_out(chi_registry_file, tmp_path) -> None:
    out = tmp_path / "listing" / "pipeline.json"

    result = _run("enumerate", "--pipeline", "-n", "1", "--registry", str(chi_registry_file), "--out", str(out))

    assert result.exit_code == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["matches_direct_enumeration"] is True
    assert sorted(c["weight"] for c in payload["classes"]) == ["1", "1", "1", "1/2"]


def test_enumerate_bad_registry(tmp_path) -> None:
    result = _run("enumerate", "--registry", str(tmp_path / "missing.json"))

    assert result.exit_code == 2


def test_verify_rs() -> None:
    result = _run("verify", "rs")

    assert result.exit_code == 0
    assert "✓ All 2 checks passed" in result.output


def test_verify_suite_option() -> None:
    result = _run("verify", "--suite", "nij", "-n", "1")

    assert result.exit_code == 0
    assert "[nij]" in result.output


def test_verify_pipeline_json(chi_registry_file, tmp_path) -> None:
    out = tmp_path / "verify.json"

    result = _run("verify", "pipeline", "-n", "1", "--registry", str(chi_registry_file), "--out", str(out))

    assert result.exit_code == 0
    records = json.loads(out.read_text(encoding="utf-8"))
    assert all(r["pass"] for r in records)
    assert {r["suite"] for r in records} == {"pipeline"}


def test_verify_invalid_limit() -> None:
    result = _run("verify", "rs", "--threads", "0")

    assert result.exit_code == 2


def test_divisor(chi_registry_file, tmp_path) -> None:
    datum_file = tmp_path / "datum.json"
    datum_file.write_text(json.dumps({"zones": {"one": [{"sigma": "chi"}],
                                                "two": [{"sigma": "chi", "d": 2}, {"sigma": "chi"}]}}),
                          encoding="utf-8")

    result = _run("divisor", str(datum_file), "--which", "P", "--registry", str(chi_registry_file))

    assert result.exit_code == 0
    assert "✓ L_P = " in result.output
    wrong = _run("divisor", str(datum_file), "--which", "Pup", "--registry", str(chi_registry_file))
    assert wrong.exit_code == 2


def test_divisor_of_a_representation(chi_registry_file, tmp_path) -> None:
    rep_file = tmp_path / "pi.json"
    rep_file.write_text(json.dumps({"n": [{"sigma": "chi"}], "n1": [{"sigma": "chi"}, {"sigma": "chi"}]}),
                        encoding="utf-8")

    result = _run("divisor", str(rep_file), "--which", "0", "--registry", str(chi_registry_file), "--json")

    assert result.exit_code == 0
    assert len(json.loads(result.output)) == 1


def test_report(chi_registry_file, tmp_path) -> None:
    out = tmp_path / "reports" / "Rankin_Report.md"

    result = _run("report", "-n", "1", "--registry", str(chi_registry_file), "--out", str(out))

    assert result.exit_code == 0
    text = out.read_text(encoding="utf-8")
    assert "# Rankin-Selberg classes for GL(1) x GL(2)" in text
    assert "matches direct enumeration: True" in text
    assert (out.parent / "weights_n1.png").exists()
