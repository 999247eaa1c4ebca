from fractions import Fraction

import pytest

from src.core.exactlin import Composition
from src.core.rsparab import (brute_force_semistandard_rs, enumerate_rs, levi_trace, rho_underline, rs_counts,
                              rs_from_pair, standardize)


def test_rs_counts() -> None:
    assert rs_counts(4) == {1: 3, 2: 8, 3: 20, 4: 48}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumeration_matches_brute_force(n: int) -> None:
    listed = enumerate_rs(n)
    blocks = {q.semi_standard_blocks() for q in listed}

    assert len(blocks) == len(listed)
    assert blocks == brute_force_semistandard_rs(n)


def test_enumerate_rs_needs_positive_n() -> None:
    with pytest.raises(ValueError):
        enumerate_rs(0)


def test_brute_force_limit() -> None:
    with pytest.raises(ValueError):
        brute_force_semistandard_rs(5)


def test_marked_block_gives_up_a_coordinate() -> None:
    q = rs_from_pair(Composition((2,)), 1)

    assert q.case == 1
    assert q.p_n == Composition((1,))
    assert q.w_std == (0, 1)
    assert q.n == 1


def test_marked_singleton_disappears() -> None:
    q = rs_from_pair(Composition((1, 1)), 1)

    assert q.case == 2
    assert q.p_n == Composition((1,))
    assert q.one_line() == [2, 1]


def test_rs_from_pair_errors() -> None:
    with pytest.raises(IndexError):
        rs_from_pair(Composition((1, 1)), 3)
    with pytest.raises(ValueError):
        rs_from_pair(Composition((1, 0)), 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_standardize_reassembles(n: int) -> None:
    for q in enumerate_rs(n):
        assert standardize(q).reassemble() == (q.p_n, q.p_n1_std)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_levi_trace_is_the_gl_n_parabolic(n: int) -> None:
    for q in enumerate_rs(n):
        assert levi_trace(q) == q.p_n


def test_rho_underline() -> None:
    q = rs_from_pair(Composition((1, 2, 1)), 2)

    assert rho_underline(q) == (Fraction(1, 2), None, Fraction(-1, 2))
