from fractions import Fraction

import pytest
from hypothesis import given

from src.core.errors import ConfigError, DegenerateBlock, RefinementError
from src.core.exactlin import Composition, WeylBlockElement, rho_of_parabolic
from src.core.spectra import (CuspidalToken, DiscreteRep, Segment, SpehBlock, TokenRegistry, block_nu,
                              canonical_order, cuspidal_support, discrete_L_expand, multiplicity_factorial,
                              nu_relative, segment_of, zone_key)
from . import strategies
from .conftest import A, B, CHI, SIGMA, speh


def test_registry_rejects_duplicates() -> None:
    with pytest.raises(ConfigError):
        TokenRegistry([CHI, CHI])


def test_registry_rejects_missing_dual() -> None:
    with pytest.raises(ConfigError):
        TokenRegistry([A])


def test_registry_rejects_rank_mismatch() -> None:
    with pytest.raises(ConfigError):
        TokenRegistry([CuspidalToken("a", 1, "b"), CuspidalToken("b", 2, "a")])


def test_registry_from_records() -> None:
    registry = TokenRegistry.from_records([{"id": "chi", "rank": 1}, {"id": "a", "rank": 1, "dual": "b"},
                                           {"id": "b", "rank": 1, "dual": "a"}])

    assert [t.id for t in registry.tokens] == ["a", "b", "chi"]
    assert registry.get("a").dual == registry.get("b")
    assert registry.get("chi").self_dual
    assert "chi" in registry
    with pytest.raises(ConfigError):
        registry.get("missing")


def test_registry_from_malformed_records() -> None:
    with pytest.raises(ConfigError):
        TokenRegistry.from_records([{"id": "chi"}])


def test_registry_blocks(chi_registry: TokenRegistry, self_dual_registry: TokenRegistry) -> None:
    assert chi_registry.blocks(2) == [speh(CHI, 2), speh(CHI, 1)]
    assert [b for b in self_dual_registry.blocks(3) if b.sigma == SIGMA] == [speh(SIGMA, 1)]
    assert chi_registry.cuspidal_blocks(3) == [speh(CHI, 1)]


def test_speh_block() -> None:
    block = speh(SIGMA, 3)

    assert block.size == 6
    assert block.derivative() == speh(SIGMA, 2)
    assert block.label() == "Speh(sigma,3)"
    assert speh(CHI).label() == "chi"
    assert speh(CHI, 0).label() == "1_GL0"
    assert speh(A, 2).dual() == speh(B, 2)


def test_derivative_of_degenerate_block() -> None:
    with pytest.raises(DegenerateBlock):
        speh(CHI, 0).derivative()


def test_negative_degree() -> None:
    with pytest.raises(ValueError):
        SpehBlock(CHI, -1)


def test_degenerate_blocks_are_isomorphic() -> None:
    assert speh(CHI, 0).iso(speh(A, 0))
    assert not speh(CHI, 0).iso(speh(CHI, 1))


@given(strategies.speh_blocks)
def test_dual_is_involution(block: SpehBlock) -> None:
    assert block.dual().dual() == block
    assert block.dual().size == block.size


def test_canonical_order() -> None:
    result = canonical_order([speh(CHI), speh(SIGMA, 2), speh(A, 2)])

    assert result == (speh(A, 2), speh(SIGMA, 2), speh(CHI))


def test_multiplicity_factorial() -> None:
    assert multiplicity_factorial(["a", "a", "b", "a"]) == 6
    assert multiplicity_factorial([]) == 1


def test_zone_key_ignores_order() -> None:
    assert zone_key([speh(CHI), speh(A, 2)]) == zone_key([speh(A, 2), speh(CHI)])


def test_discrete_rep() -> None:
    pi = DiscreteRep((speh(CHI), speh(CHI, 0)), (speh(SIGMA), speh(CHI)))

    assert pi.sizes == (1, 3)
    assert pi.composition() == (Composition((1, 0)), Composition((2, 1)))
    assert pi.nonzero_sides() == ((speh(CHI),), (speh(SIGMA), speh(CHI)))
    assert pi.is_cuspidal()
    assert not DiscreteRep((speh(CHI, 2),)).is_cuspidal()


def test_discrete_rep_permuted() -> None:
    pi = DiscreteRep((speh(CHI), speh(A)), (speh(B), speh(CHI), speh(SIGMA)))
    w = WeylBlockElement(((1, 0), (0, 2, 1)))

    result = pi.permuted_by(w)

    assert result == DiscreteRep((speh(A), speh(CHI)), (speh(B), speh(SIGMA), speh(CHI)))
    assert result.dual().dual() == result


def test_block_nu() -> None:
    assert block_nu(speh(CHI, 3)) == (-1, 0, 1)
    assert block_nu(speh(CHI, 2)) == (Fraction(-1, 2), Fraction(1, 2))


def test_cuspidal_support() -> None:
    pi = DiscreteRep((speh(SIGMA, 2), speh(CHI, 0)), (speh(CHI, 3),))

    support = cuspidal_support(pi)

    assert support.P_pi == (Composition((2, 2)), Composition((1, 1, 1)))
    assert support.sigma[0] == (SIGMA, SIGMA)
    assert support.nu[1] == (-1, 0, 1)



@given(strategies.speh_block_lists)
def test_nu_is_minus_rho_over_rank(blocks) -> None:
    expected = tuple(-x / b.sigma.rank for b in blocks
                     for x in rho_of_parabolic(Composition((b.sigma.rank,) * b.d)))

    support = cuspidal_support(blocks)

    assert support.nu == (expected,)
    assert support.P_pi == (Composition(tuple(b.sigma.rank for b in blocks for _ in range(b.d))),)

def test_nu_relative() -> None:
    assert nu_relative([speh(CHI, 4)], Composition((2, 2))) == (-1, 1)
    assert nu_relative([speh(SIGMA, 2)], Composition((2, 2))) == (Fraction(-1, 2), Fraction(1, 2))


def test_nu_relative_needs_nested_compositions() -> None:
    with pytest.raises(RefinementError):
        nu_relative([speh(SIGMA, 2)], Composition((1, 3)))


def test_segments() -> None:
    assert Segment(0, 3).elements() == (-1, 0, 1)
    assert segment_of(speh(CHI, 2), Fraction(1, 2)).as_set() == frozenset({0, 1})
    with pytest.raises(ValueError):
        Segment(0, 0)
    with pytest.raises(DegenerateBlock):
        segment_of(speh(CHI, 0))


def test_discrete_L_expand() -> None:
    result = discrete_L_expand(speh(CHI, 2), speh(CHI, 1))

    assert [shift for _, shift in result] == [Fraction(1, 2), Fraction(-1, 2)]
    assert all(pair == (CHI, CHI) for pair, _ in result)
