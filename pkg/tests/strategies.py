from functools import lru_cache

from hypothesis import strategies

from src.core.exactlin import AffineForm, Composition, WeylBlockElement
from src.core.relevant import enumerate_relevant
from src.core.spectra import SpehBlock, TokenRegistry

from .conftest import A, B, CHI, ETA, SIGMA

FORM_DIM = 3

rationals = strategies.fractions(min_value=-6, max_value=6, max_denominator=8)
nonzero_rationals = rationals.filter(bool)
small_ints = strategies.integers(min_value=-4, max_value=4)

compositions = strategies.lists(strategies.integers(min_value=1, max_value=4),
                                min_size=1, max_size=4).map(lambda parts: Composition(tuple(parts)))


def _permutations_of(k: int):
    return strategies.permutations(list(range(k))).map(tuple)


permutations = strategies.integers(min_value=1, max_value=5).flatmap(_permutations_of)

weyl_triples = strategies.integers(min_value=1, max_value=5).flatmap(
    lambda k: strategies.tuples(_permutations_of(k), _permutations_of(k), _permutations_of(k))
).map(lambda ps: tuple(WeylBlockElement((p,)) for p in ps))

permutations_with_values = strategies.integers(min_value=1, max_value=5).flatmap(
    lambda k: strategies.tuples(_permutations_of(k), _permutations_of(k),
                                strategies.lists(small_ints, min_size=k, max_size=k)))

affine_forms = strategies.builds(
    AffineForm,
    strategies.lists(rationals, min_size=FORM_DIM, max_size=FORM_DIM).map(tuple),
    rationals,
)
nonconstant_forms = affine_forms.filter(lambda f: not f.is_constant)

points = strategies.lists(rationals, min_size=FORM_DIM, max_size=FORM_DIM).map(tuple)

equation_rows = strategies.lists(
    strategies.lists(small_ints, min_size=FORM_DIM + 1, max_size=FORM_DIM + 1),
    min_size=0, max_size=FORM_DIM,
)

tokens = strategies.sampled_from([CHI, ETA, SIGMA, A, B])
speh_blocks = strategies.builds(SpehBlock, tokens, strategies.integers(min_value=1, max_value=4))
degrees = strategies.integers(min_value=1, max_value=4)
composition_totals = strategies.integers(min_value=1, max_value=7)
speh_block_lists = strategies.lists(speh_blocks, min_size=1, max_size=3)

CLOSURE_REGISTRIES = (TokenRegistry([CHI, ETA, SIGMA]), TokenRegistry([A, B, CHI]))


@lru_cache(maxsize=None)
def _relevant_data(n: int) -> tuple:
    return tuple(d for registry in CLOSURE_REGISTRIES for d in enumerate_relevant(n, registry))


relevant_data = strategies.integers(min_value=1, max_value=2).flatmap(
    lambda n: strategies.sampled_from(_relevant_data(n)))
