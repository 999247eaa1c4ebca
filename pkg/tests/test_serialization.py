import json
from fractions import Fraction

import pytest

from src.core.divisors import DivisorPoly
from src.core.errors import ConfigError, ValidationError
from src.core.exactlin import AffineForm, WeylBlockElement
from src.core.relevant import RelevantDatum, make_increasing
from src.core.spectra import TokenRegistry
from src.utils.formatters import dict_to_md_table, format_rational, format_shape
from src.utils.serialization import (datum_from_json, datum_to_json, divisor_from_json, divisor_to_json,
                                     form_from_json, form_to_json, load_json, load_registry, rat_from_json,
                                     rat_to_json, weyl_from_json, write_json)
from .conftest import CHI, speh


def test_format_rational() -> None:
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(-4, 2)) == "-2"
    assert format_shape((0, 1, 2, 0)) == "(0,1,2,0)"


def test_dict_to_md_table() -> None:
    assert dict_to_md_table({}) == "None"
    assert dict_to_md_table({"a": 1}, "K", "V") == "| K | V |\n|---|---|\n| a | 1 |"


def test_rationals() -> None:
    assert rat_to_json(Fraction(-1, 2)) == "-1/2"
    assert rat_from_json("-1/2") == Fraction(-1, 2)
    assert rat_from_json(3) == 3
    with pytest.raises(ConfigError):
        rat_from_json("x")


def test_form_json() -> None:
    form = AffineForm((1, Fraction(-1, 2)), 3)

    data = form_to_json(form)

    assert data == {"coeffs": ["1", "-1/2"], "const": "3"}
    assert form_from_json(data) == form


def test_divisor_json() -> None:
    divisor = DivisorPoly.from_forms([AffineForm((1, -1)), AffineForm((1, -1)), AffineForm((0, 1), 1)])

    data = divisor_to_json(divisor)

    assert [item["exp"] for item in data] == [1, 2]
    assert divisor_from_json(json.loads(json.dumps(data))) == divisor


def test_weyl_from_json() -> None:
    assert weyl_from_json([[2, 1], [1]]) == WeylBlockElement(((1, 0), (0,)))
    with pytest.raises(ConfigError):
        weyl_from_json([[1, 1]])


def test_datum_to_json_keys() -> None:
    datum = RelevantDatum(one=(speh(CHI),), two=(speh(CHI, 2), speh(CHI)))

    data = datum_to_json(datum)

    assert set(data) == {"I", "P", "pi", "I1", "I2", "zones"}
    assert data["I"] == [0, 1, 3, 0]
    assert data["zones"]["two"] == [{"sigma": "chi", "d": 2}, {"sigma": "chi", "d": 1}]
    assert set(datum_to_json(make_increasing(c1=[speh(CHI)], c2=[speh(CHI)]))["zones"]) == {
        "plus", "one", "c1", "two", "c2", "minus"}


def test_datum_from_zones(chi_registry: TokenRegistry) -> None:
    datum = RelevantDatum(one=(speh(CHI),), two=(speh(CHI), speh(CHI)))

    result = datum_from_json(json.loads(json.dumps(datum_to_json(datum))), chi_registry)

    assert result == datum


def test_increasing_datum_from_zones(chi_registry: TokenRegistry) -> None:
    datum = make_increasing(c1=[speh(CHI)], c2=[speh(CHI), speh(CHI)])

    result = datum_from_json(datum_to_json(datum), chi_registry)

    assert result == datum


def test_datum_from_shape_and_rep(chi_registry: TokenRegistry) -> None:
    data = {"I": [0, 1, 2, 0], "pi": {"n": [{"sigma": "chi"}], "n1": [{"sigma": "chi"}, {"sigma": "chi"}]}}

    result = datum_from_json(data, chi_registry)

    assert result == RelevantDatum(one=(speh(CHI),), two=(speh(CHI), speh(CHI)))


def test_datum_from_json_errors(chi_registry: TokenRegistry) -> None:
    with pytest.raises(ConfigError):
        datum_from_json({"I": [0, 1, 2, 0]}, chi_registry)
    with pytest.raises(ConfigError):
        datum_from_json({"zones": {"one": [{"sigma": "eta"}]}}, chi_registry)
    with pytest.raises(ValidationError):
        datum_from_json({"I": [1, 1, 0, 0], "pi": {"n": [{"sigma": "chi"}], "n1": [{"sigma": "chi"}] * 2}},
                        chi_registry)


def test_load_json_errors(tmp_path) -> None:
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")

    with pytest.raises(ConfigError):
        load_json(bad)
    with pytest.raises(ConfigError):
        load_json(tmp_path / "missing.json")


def test_load_registry(chi_registry_file) -> None:
    assert load_registry(None).tokens == []
    assert [t.id for t in load_registry(chi_registry_file).tokens] == ["chi"]


def test_load_registry_needs_array(tmp_path) -> None:
    path = tmp_path / "registry.json"
    path.write_text('{"id": "chi"}', encoding="utf-8")

    with pytest.raises(ConfigError):
        load_registry(path)


def test_write_json_creates_parents(tmp_path) -> None:
    path = tmp_path / "deep" / "out.json"

    text = write_json({"w": "1/2"}, path)

    assert path.read_text(encoding="utf-8") == text
    assert json.loads(text) == {"w": "1/2"}
