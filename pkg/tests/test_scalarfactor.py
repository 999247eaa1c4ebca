import pytest
from hypothesis import given

from src.core.exactlin import AffineForm
from src.core.scalarfactor import (LTermProduct, LToken, cocycle_holds, cuspidal_n_factor, mzeros_regularity,
                                   n_factor, nij_expand, nij_total, pair_interleavings, pole_order_at)
from . import strategies
from .conftest import A, B, CHI, speh


def test_ratio_of_equal_arguments_is_one() -> None:
    form = AffineForm((1, -1))

    assert LTermProduct.ratio(CHI, CHI, form, form).is_one


def test_product_group_laws() -> None:
    p = LTermProduct.ratio(CHI, CHI, AffineForm((1, -1)), AffineForm((1, -1), 1))

    assert (p * p.inverse()).is_one
    assert p.degree == 0
    assert p.counts() == {"tokens": 2, "numerator": 1, "denominator": 1}
    assert p.pretty(("a", "b")) == "L(a - b, chi x chi^v) * L(a - b + 1, chi x chi^v)^-1"


def test_poles_only_for_matching_tokens() -> None:
    assert LToken(CHI, CHI, AffineForm((1,))).has_poles()
    assert not LToken(A, B, AffineForm((1,))).has_poles()


def test_n_factor_for_cuspidal_swap() -> None:
    result = n_factor([speh(CHI), speh(CHI)], (1, 0))

    expected = LTermProduct.ratio(CHI, CHI, AffineForm((1, -1)), AffineForm((1, -1), 1))
    assert result == expected
    assert n_factor([speh(CHI), speh(CHI)], (0, 1)).is_one


def test_n_factor_length_mismatch() -> None:
    with pytest.raises(ValueError):
        n_factor([speh(CHI)], (1, 0))


@given(strategies.degrees, strategies.degrees)
def test_pair_expansions_agree(d_i: int, d_j: int) -> None:
    blocks = [speh(CHI, d_i), speh(CHI, d_j)]

    discrete = n_factor(blocks, (1, 0))

    assert cuspidal_n_factor(blocks, (1, 0)) == discrete
    assert nij_total(blocks, (1, 0), "A") == discrete
    assert nij_total(blocks, (1, 0), "B") == discrete



def test_pair_interleavings() -> None:
    assert list(pair_interleavings(1, 2)) == [(0, 1, 2), (1, 0, 2), (2, 0, 1)]
    assert sum(len(list(pair_interleavings(d_i, d_j))) for d_i in range(1, 6) for d_j in range(1, 6)) == 912


@pytest.mark.parametrize("d_i", range(1, 6))
@pytest.mark.parametrize("d_j", range(1, 6))
def test_variants_agree_on_partial_interleavings(d_i: int, d_j: int) -> None:
    blocks = [speh(CHI, d_i), speh(CHI, d_j)]

    for w_sub in pair_interleavings(d_i, d_j):
        assert nij_expand(blocks, w_sub, 0, 1, "A") == nij_expand(blocks, w_sub, 0, 1, "B"), w_sub

@pytest.mark.parametrize("degrees", [(1, 2, 3), (2, 2, 1), (3, 1, 2)])
def test_cocycle(degrees) -> None:
    blocks = [speh(CHI, d) for d in degrees]

    assert cocycle_holds(blocks, (1, 0, 2), (0, 2, 1))
    assert cocycle_holds(blocks, (0, 2, 1), (1, 0, 2))


def test_cocycle_needs_lengths_to_add() -> None:
    with pytest.raises(ValueError):
        cocycle_holds([speh(CHI)] * 3, (1, 0, 2), (1, 0, 2))


def test_nij_expand_errors() -> None:
    blocks = [speh(CHI, 2), speh(CHI)]

    with pytest.raises(ValueError):
        nij_expand(blocks, (0, 1, 2), 1, 0)
    with pytest.raises(ValueError):
        nij_expand(blocks, (0, 1, 2), 0, 1, "C")
    with pytest.raises(ValueError):
        nij_expand(blocks, (1, 0, 2), 0, 1)
    with pytest.raises(ValueError):
        nij_expand(blocks, (0, 1), 0, 1)


def test_pole_order_at() -> None:
    p = LTermProduct.ratio(CHI, CHI, AffineForm((1, -1)), AffineForm((1, -1), 2))

    assert pole_order_at(p, (0, 0)) == -1
    assert pole_order_at(p, (1, 0)) == -1
    assert pole_order_at(p, (-1, 0)) == 1
    assert pole_order_at(p, (5, 0)) == 0


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_regular_on_the_diagonal(d: int) -> None:
    report = mzeros_regularity(speh(CHI, d))

    assert report.regular
    assert report.order == 0
