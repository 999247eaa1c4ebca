import pytest

from src.core.suites import MAX_FAILURES, PIPELINE_CORPUS, SUITES, Check, SuiteOptions, pipeline_registries, run_suite
from src.core.spectra import TokenRegistry
from src.core.zetanum import TRIVIAL
from .conftest import CHI


def test_check_records_failures() -> None:
    check = Check("demo", "always fails")

    for k in range(MAX_FAILURES + 2):
        check.expect(False, f"case {k}")

    record = check.record()
    assert not check.passed
    assert record["cases"] == MAX_FAILURES + 2
    assert len(record["failures"]) == MAX_FAILURES
    assert record["pass"] is False


def test_check_passes_without_failures() -> None:
    check = Check("demo", "always holds", extra={"points": []})

    check.expect(True, "only case")

    assert check.passed
    assert check.record() == {"suite": "demo", "check": "always holds", "cases": 1, "pass": True,
                              "failures": [], "detail": "", "points": []}


def test_default_tokens() -> None:
    assert SuiteOptions().tokens().tokens == [TRIVIAL]
    assert SuiteOptions(registry=TokenRegistry([])).tokens().tokens == [TRIVIAL]


@pytest.mark.parametrize("name", ["rs", "nij", "counting", "pipeline"])
def test_exact_suites_pass(name: str) -> None:
    checks = run_suite(name, SuiteOptions(n=1))

    assert checks
    assert all(c.suite == name for c in checks)
    assert [c.name for c in checks if not c.passed] == []


def test_run_suite_unknown_name() -> None:
    with pytest.raises(ValueError):
        run_suite("everything", SuiteOptions())


def test_suite_names() -> None:
    assert sorted(SUITES) == ["affine", "counting", "nij", "pipeline", "rs", "zeta"]


def test_pipeline_registries_default_to_corpus() -> None:
    registries = pipeline_registries(SuiteOptions())

    assert [r.tokens for r in registries[:1]] == [[TRIVIAL]]
    assert [len(r) for r in registries[1:]] == [3] * len(PIPELINE_CORPUS)
    assert [sorted(t.id for t in r.tokens) for r in registries[1:]] == [["chi", "eta", "sigma"], ["a", "b", "chi"],
                                                                      ["a", "b", "sigma"]]


def test_pipeline_registries_keep_the_given_registry() -> None:
    registry = TokenRegistry([CHI])

    assert pipeline_registries(SuiteOptions(registry=registry)) == [registry]


def test_nij_suite_covers_every_interleaving() -> None:
    checks = {c.name: c for c in run_suite("nij", SuiteOptions(n=1))}

    check = checks["both variants agree on every partial interleaving of two blocks"]
    assert check.passed
    assert check.cases == 912
