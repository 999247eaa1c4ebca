from fractions import Fraction

import networkx as nx
import pytest

from src.core.errors import LimitExceeded, ValidationError
from src.core.relevant import RelevantDatum, make_increasing
from src.core.resgraph import (WeightedIndexSet, bijection_inverse, direct_enumeration, edge_key, family_partitions,
                               fiber_count, graphs_stage1, graphs_stage2, level_family, level_partition_holds,
                               levels, pipeline, run_pipeline, stage1_by_levels, starting_data, tuple_of_stage1,
                               tuple_of_stage2)
from src.core.spectra import TokenRegistry
from src.core.suites import RANK_ONE_REFERENCE
from .conftest import CHI, speh


def test_starting_data_rank_one(chi_registry: TokenRegistry) -> None:
    result = starting_data(1, chi_registry)

    assert [(s.datum, s.weight) for s in result] == [
        (make_increasing(c1=[speh(CHI)], c2=[speh(CHI), speh(CHI)]), Fraction(1, 2)),
        (make_increasing(plus=[speh(CHI)], c2=[speh(CHI)]), Fraction(1)),
    ]


def test_starting_data_unknown_tie_break(chi_registry: TokenRegistry) -> None:
    with pytest.raises(ValueError):
        starting_data(1, chi_registry, tie_break="random")


def test_stage1_graphs() -> None:
    datum = make_increasing(plus=[speh(CHI)], c2=[speh(CHI)])

    graphs = graphs_stage1(datum)

    assert sorted(len(edge_key(g)) for g in graphs) == [0, 1]
    attached = next(g for g in graphs if g.number_of_edges())
    assert tuple_of_stage1(datum, attached) == make_increasing(two=[speh(CHI, 2)])
    assert len(stage1_by_levels(datum)) == len(graphs)


def test_stage1_needs_ordered_plus() -> None:
    datum = make_increasing(plus=[speh(CHI), speh(CHI, 2)])
    unordered = type(datum)(plus=(speh(CHI), speh(CHI, 2)))

    assert datum.plus == (speh(CHI, 2), speh(CHI))
    with pytest.raises(ValidationError):
        graphs_stage1(unordered)


def test_stage2_graphs_are_matchings() -> None:
    datum = make_increasing(c1=[speh(CHI)], c2=[speh(CHI), speh(CHI)])

    graphs = graphs_stage2(datum)

    assert len(graphs) == 3
    assert all(nx.is_matching(g, set(g.edges())) for g in graphs)
    images = {tuple_of_stage2(datum, g) for g in graphs if g.number_of_edges()}
    assert images == {make_increasing(c2=[speh(CHI)], minus=[speh(CHI)])}


def test_stage2_limit() -> None:
    datum = make_increasing(c1=[speh(CHI)], c2=[speh(CHI), speh(CHI)])

    with pytest.raises(LimitExceeded):
        graphs_stage2(datum, max_graphs=2)


def test_tuple_of_stage2_rejects_non_matching() -> None:
    datum = make_increasing(c1=[speh(CHI)], c2=[speh(CHI), speh(CHI)])
    graph = nx.Graph()
    graph.add_edge(("c1", 0), ("c2", 0))
    graph.add_edge(("c1", 0), ("c2", 1))

    with pytest.raises(ValidationError):
        tuple_of_stage2(datum, graph)


def test_weighted_index_set() -> None:
    a = RelevantDatum(two=(speh(CHI, 2),))
    b = RelevantDatum(plus=(speh(CHI),), two=(speh(CHI),))
    left = WeightedIndexSet({a: Fraction(1, 2)})

    result = left.merge(WeightedIndexSet({a: Fraction(1, 2), b: Fraction(1)}))

    assert len(result) == 2
    assert result.total() == 2
    assert result.by_shape() == {(0, 0, 2, 0): Fraction(1), (1, 0, 1, 0): Fraction(1)}
    with pytest.raises(ValueError):
        result.add(a, Fraction(0))


def test_pipeline_rank_one(chi_registry: TokenRegistry) -> None:
    report = run_pipeline(1, chi_registry)

    assert report.graphs == 5
    assert report.starts == 2
    assert report.matches_direct_enumeration
    assert report.classes.by_shape() == RANK_ONE_REFERENCE
    assert report.classes.total() == Fraction(7, 2)


def test_pipeline_with_gl2_token(chi_sigma_registry: TokenRegistry) -> None:
    report = run_pipeline(1, chi_sigma_registry)

    assert report.starts == 3
    assert len(report.classes) == 5
    assert report.matches_direct_enumeration



@pytest.mark.parametrize("fixture, starts, classes", [
    ("self_dual_registry", 52, 114),
    ("dual_pair_registry", 141, 315),
    ("mixed_rank_registry", 52, 114),
])
def test_pipeline_matches_direct_enumeration_over_corpus(request, fixture: str, starts: int, classes: int) -> None:
    registry = request.getfixturevalue(fixture)

    report = run_pipeline(2, registry)

    assert report.matches_direct_enumeration
    assert report.starts == starts
    assert len(report.classes) == classes

def test_pipeline_threads_agree(chi_registry: TokenRegistry) -> None:
    assert pipeline(2, chi_registry, threads=2) == pipeline(2, chi_registry)


def test_pipeline_tie_break_does_not_change_classes(self_dual_registry: TokenRegistry) -> None:
    assert pipeline(1, self_dual_registry, tie_break="reverse") == pipeline(1, self_dual_registry)


def test_pipeline_limits(chi_registry: TokenRegistry) -> None:
    with pytest.raises(LimitExceeded):
        run_pipeline(1, chi_registry, max_blocks=1)
    with pytest.raises(LimitExceeded):
        run_pipeline(1, chi_registry, max_graphs=0)


def test_fiber_counts() -> None:
    start = make_increasing(c1=[speh(CHI)], c2=[speh(CHI), speh(CHI)])
    matched = next(g for g in graphs_stage2(start) if g.number_of_edges())

    result = fiber_count(start, matched)

    assert (result.brute_force, result.formula, result.stab_ratio) == (2, 2, 2)
    assert result.consistent


def test_stage1_fiber_counts() -> None:
    datum = make_increasing(plus=[speh(CHI)], c2=[speh(CHI)])
    base = next(iter(level_family(datum, 2)))

    for g in family_partitions(datum, base, 1).full:
        assert fiber_count(datum, g, 1, base).consistent
    with pytest.raises(ValueError):
        fiber_count(datum, base, 1)


def test_level_partitions() -> None:
    datum = make_increasing(plus=[speh(CHI, 2), speh(CHI)], c1=[speh(CHI)], c2=[speh(CHI), speh(CHI)])

    assert levels(datum) == [2, 1]
    for d in levels(datum):
        assert level_partition_holds(datum, d)
        for base in level_family(datum, d + 1):
            assert family_partitions(datum, base, d).disjoint_union_holds()


def test_bijection_inverse(chi_registry: TokenRegistry) -> None:
    for datum, _ in direct_enumeration(1, chi_registry).items():
        assert bijection_inverse(datum).verify(datum)
