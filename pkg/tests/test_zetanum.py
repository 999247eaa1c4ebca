import math

import pytest

from src.core.errors import LimitInstability, PoleAt, Unsupported
from src.core.exactlin import AffineForm
from src.core.scalarfactor import LTermProduct
from src.core.zetanum import (TRIVIAL, XiEvaluator, check_against_mpmath, check_conjugation,
                              check_functional_equation, check_gl1gl2, check_n_at_zero, evaluate_product, gamma,
                              gl1gl2_residue_check, numeric_n_at_zero, numeric_residue, relative_error,
                              residue_of_xi, xi, xi_mpmath)
from .conftest import CHI


def test_gamma() -> None:
    assert gamma(5) == pytest.approx(24, rel=1e-12)
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    assert gamma(-0.5) == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-12)


def test_xi_at_two() -> None:
    assert xi(2) == pytest.approx(math.pi / 6, rel=1e-12)
    assert xi(2) == pytest.approx(xi_mpmath(2), rel=1e-12)


@pytest.mark.parametrize("pole", [0, 1])
def test_xi_poles(pole: int) -> None:
    with pytest.raises(PoleAt) as excinfo:
        xi(pole)

    assert excinfo.value.pole == pole


def test_zeta_pole() -> None:
    with pytest.raises(PoleAt):
        XiEvaluator().zeta(1)


def test_xi_reflects_far_left() -> None:
    assert xi(-2) == pytest.approx(xi(3), rel=1e-12)


def test_zeta_cutoff_grows_with_height() -> None:
    evaluator = XiEvaluator()

    assert evaluator.cutoff(complex(0.5, 10)) == 50
    assert evaluator.cutoff(complex(0.5, 50)) == 80
    assert evaluator.cutoff(complex(0.5, -45.5)) == 75


@pytest.mark.parametrize("sigma", [-1.5, -0.4, 0.3, 0.7, 1.4, 2.5])
@pytest.mark.parametrize("height", [30, 40, 45, 50])
def test_xi_relative_accuracy_at_large_height(sigma: float, height: float) -> None:
    s = complex(sigma, height)

    error = relative_error(xi(s), xi_mpmath(s, 40))

    assert error <= 1e-12

def test_numeric_residue_of_simple_pole() -> None:
    result = numeric_residue(lambda s: 3 / (s - 2) + s, 2)

    assert result == pytest.approx(3, abs=1e-9)


def test_numeric_residue_unstable_for_higher_order_poles() -> None:
    with pytest.raises(LimitInstability):
        numeric_residue(lambda s: 1 / (s - 2) ** 3, 2)


def test_residues_of_xi() -> None:
    assert residue_of_xi(1) == pytest.approx(1, abs=1e-9)
    assert residue_of_xi(0) == pytest.approx(-1, abs=1e-9)
    with pytest.raises(ValueError):
        residue_of_xi(2)


def test_evaluate_product() -> None:
    product = LTermProduct.ratio(TRIVIAL, TRIVIAL, AffineForm((1, -1), 2), AffineForm((1, -1), 3))

    result = evaluate_product(product, (0.0, 0.0))

    assert result == pytest.approx(xi(2) / xi(3), rel=1e-12)


def test_evaluate_product_needs_trivial_character() -> None:
    product = LTermProduct.ratio(CHI, CHI, AffineForm((1,), 2), AffineForm((1,), 3))

    with pytest.raises(Unsupported):
        evaluate_product(product, (0.0,))


def test_n_at_zero() -> None:
    assert numeric_n_at_zero(1) == pytest.approx(-1, abs=1e-9)
    with pytest.raises(ValueError):
        numeric_n_at_zero(0)


def test_gl1gl2_residue() -> None:
    result = gl1gl2_residue_check(0.1, 0.2)

    assert result.abs_error < 1e-8
    with pytest.raises(ValueError):
        gl1gl2_residue_check(0.1, 0.2, mode=3)


@pytest.mark.parametrize("check", [check_functional_equation, check_conjugation, check_against_mpmath])
def test_xi_symmetries(check) -> None:
    report = check()

    assert report.passed, report.max_error
    assert len(report.points) == 100
    assert max(t for _, t in report.points) == 50


def test_n_at_zero_report() -> None:
    assert check_n_at_zero(2).passed


@pytest.mark.parametrize("mode", [1, 2])
def test_gl1gl2_reports(mode: int) -> None:
    assert check_gl1gl2(mode).passed


def test_mpmath_comparison_is_relative() -> None:
    report = check_against_mpmath()

    assert report.metric == "rel"
    assert report.tolerance == 1e-12
    assert report.passed, report.max_error
