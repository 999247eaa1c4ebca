"""
Residue graphs and the weighted index pipeline.

Starting from the unfolding data (plus blocks with cuspidal c1/c2 zones),
stage-1 graphs attach + blocks to cuspidal vertices on either side and
stage-2 graphs match the remaining dual cuspidal pairs. Pushing every
outcome through the downward transform and adding the starting weights
reproduces the relevant classes weighted by 1/|Stab|.
"""

import logging
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .errors import LimitExceeded, ValidationError
from .relevant import (IncreasingDatum, RelevantDatum, class_weight, downward_transform, enumerate_relevant,
                       make_increasing)
from .spectra import SpehBlock, TokenRegistry, blocks_total, canonical_order

logger = logging.getLogger(__name__)

Node = Tuple[str, int]
EdgeKey = FrozenSet[Tuple[Node, Node]]
STAGE_ZONES = {"+": "plus", "c1": "c1", "c2": "c2"}


def edge_key(graph: nx.Graph) -> EdgeKey:
    return frozenset(tuple(sorted(e)) for e in graph.edges())


def _order_plus(blocks: Sequence[SpehBlock], tie_break: str) -> Tuple[SpehBlock, ...]:
    if tie_break == "id":
        return canonical_order(blocks)
    if tie_break == "reverse":
        by_id = sorted(blocks, key=lambda b: b.sigma.id, reverse=True)
        return tuple(sorted(by_id, key=lambda b: -b.d))
    raise ValueError(f"unknown tie break {tie_break!r}")


def _multisets(candidates: Sequence[SpehBlock], total: int, start: int = 0) -> Iterator[Tuple[SpehBlock, ...]]:
    if total == 0:
        yield ()
        return
    for k in range(start, len(candidates)):
        if candidates[k].size <= total:
            for tail in _multisets(candidates, total - candidates[k].size, k):
                yield (candidates[k],) + tail


@dataclass(frozen=True)
class StartingDatum:
    datum: IncreasingDatum
    weight: Fraction


def starting_data(n: int, registry: TokenRegistry, tie_break: str = "id") -> List[StartingDatum]:
    """Unfolding data with r = |plus| from 0 to n, each weighted by 1/|Stab|."""
    blocks = registry.blocks(n + 1)
    cusp = registry.cuspidal_blocks(n + 1)
    out = []
    for r in range(n + 1):
        for plus in _multisets(blocks, r):
            for c1 in _multisets(cusp, n - r):
                for c2 in _multisets(cusp, n + 1 - r):
                    datum = IncreasingDatum(plus=_order_plus(plus, tie_break), c1=canonical_order(c1),
                                            c2=canonical_order(c2))
                    out.append(StartingDatum(datum, Fraction(1, datum.stab_order())))
    logger.debug("%d starting data for n=%d", len(out), n)
    return out


def _base_graph(datum: IncreasingDatum, zones: Sequence[str]) -> nx.Graph:
    graph = nx.Graph()
    for zone in zones:
        for i, b in enumerate(getattr(datum, STAGE_ZONES[zone])):
            graph.add_node((zone, i), block=b)
    return graph


def _check_plus_order(datum: IncreasingDatum) -> None:
    if any(datum.plus[k].d < datum.plus[k + 1].d for k in range(len(datum.plus) - 1)):
        raise ValidationError("plus blocks must be ordered by non-increasing d")


def _stage1_options(datum: IncreasingDatum, i: int, used1: FrozenSet[int], used2: FrozenSet[int]):
    b = datum.plus[i]
    ones = [None] + [j for j, c in enumerate(datum.c1) if j not in used1 and c.sigma == b.sigma]
    twos = [None] + [k for k, c in enumerate(datum.c2) if k not in used2 and c.sigma == b.sigma.dual]
    for j in ones:
        for k in twos:
            yield j, k


def _extend_vertices(datum: IncreasingDatum, graph: nx.Graph, vertices: Sequence[int], sides: str) -> List[nx.Graph]:
    """Every way of adding edges on the chosen side(s) at the given + vertices of ``graph``."""
    used1 = frozenset(j for (z, j) in graph.nodes if z == "c1" and graph.degree((z, j)))
    used2 = frozenset(k for (z, k) in graph.nodes if z == "c2" and graph.degree((z, k)))
    out = []

    def step(pos: int, current: nx.Graph, u1: FrozenSet[int], u2: FrozenSet[int]):
        if pos == len(vertices):
            out.append(current)
            return
        i = vertices[pos]
        for j, k in _stage1_options(datum, i, u1, u2):
            if (j is not None and "1" not in sides) or (k is not None and "2" not in sides):
                continue
            nxt = current.copy()
            if j is not None:
                nxt.add_edge(("+", i), ("c1", j))
            if k is not None:
                nxt.add_edge(("+", i), ("c2", k))
            step(pos + 1, nxt, u1 | ({j} - {None}), u2 | ({k} - {None}))

    step(0, graph, used1, used2)
    return out


def graphs_stage1(datum: IncreasingDatum, max_graphs: Optional[int] = None) -> List[nx.Graph]:
    """All stage-1 residue graphs on an unfolding datum.

    Raises:
        ValidationError: If the plus blocks are not ordered by non-increasing d
        LimitExceeded: If more than ``max_graphs`` graphs arise
    """
    _check_plus_order(datum)
    base = _base_graph(datum, ("+", "c1", "c2"))
    graphs = _extend_vertices(datum, base, list(range(len(datum.plus))), "12")
    if max_graphs is not None and len(graphs) > max_graphs:
        raise LimitExceeded(f"{len(graphs)} stage-1 graphs exceed the limit {max_graphs}")
    return graphs


def tuple_of_stage1(datum: IncreasingDatum, graph: nx.Graph) -> IncreasingDatum:
    """Promote + blocks along their edges and drop the consumed cuspidal vertices."""
    plus, one, two, pairs = [], [], [], []
    for i, b in enumerate(datum.plus):
        sides = {z for z, _ in graph.neighbors(("+", i))}
        up = SpehBlock(b.sigma, b.d + 1)
        if sides == {"c1", "c2"}:
            pairs.append((up, up.dual()))
        elif sides == {"c1"}:
            one.append(up)
        elif sides == {"c2"}:
            two.append(up.dual())
        else:
            plus.append(b)
    c1 = [c for j, c in enumerate(datum.c1) if not graph.degree(("c1", j))]
    c2 = [c for k, c in enumerate(datum.c2) if not graph.degree(("c2", k))]
    return make_increasing(plus, one, c1, two, c2, datum.minus, pairs)


def graphs_stage2(datum: IncreasingDatum, max_graphs: Optional[int] = None) -> List[nx.Graph]:
    """Matchings between c1 and c2 vertices carrying dual tokens."""
    base = _base_graph(datum, ("c1", "c2"))
    out = []

    def step(i: int, current: nx.Graph, used: FrozenSet[int]):
        if i == len(datum.c1):
            out.append(current)
            return
        step(i + 1, current, used)
        for k, c in enumerate(datum.c2):
            if k not in used and c.sigma == datum.c1[i].sigma.dual:
                nxt = current.copy()
                nxt.add_edge(("c1", i), ("c2", k))
                step(i + 1, nxt, used | {k})

    step(0, base, frozenset())
    if max_graphs is not None and len(out) > max_graphs:
        raise LimitExceeded(f"{len(out)} stage-2 graphs exceed the limit {max_graphs}")
    return out


def tuple_of_stage2(datum: IncreasingDatum, graph: nx.Graph) -> IncreasingDatum:
    """Matched cuspidal pairs move to the - zone in c1 order."""
    if not nx.is_matching(graph, set(graph.edges())):
        raise ValidationError("stage-2 graphs are matchings")
    matched = [c for j, c in enumerate(datum.c1) if graph.degree(("c1", j))]
    c1 = [c for j, c in enumerate(datum.c1) if not graph.degree(("c1", j))]
    c2 = [c for k, c in enumerate(datum.c2) if not graph.degree(("c2", k))]
    one = [datum.one[i] for i in datum.unmatched_one()]
    two = [datum.two[j] for j in datum.unmatched_two()]
    return make_increasing(datum.plus, one, c1, two, c2, tuple(datum.minus) + tuple(matched), datum.pairs())


class WeightedIndexSet:
    """Canonical relevant classes with exact rational weights."""

    def __init__(self, weights: Optional[Dict[RelevantDatum, Fraction]] = None):
        self.weights: Dict[RelevantDatum, Fraction] = defaultdict(Fraction)
        for datum, weight in (weights or {}).items():
            self.add(datum, weight)

    def add(self, datum: RelevantDatum, weight: Fraction) -> None:
        if weight <= 0:
            raise ValueError("weights are positive")
        self.weights[datum.canonical()] += weight

    def merge(self, other: "WeightedIndexSet") -> "WeightedIndexSet":
        out = WeightedIndexSet(dict(self.weights))
        for datum, weight in other.weights.items():
            out.add(datum, weight)
        return out

    def items(self) -> List[Tuple[RelevantDatum, Fraction]]:
        return sorted(self.weights.items(), key=lambda item: item[0].sort_key())

    def __len__(self) -> int:
        return len(self.weights)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedIndexSet):
            return NotImplemented
        return dict(self.weights) == dict(other.weights)

    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def by_shape(self) -> Dict[Tuple[int, ...], Fraction]:
        out: Dict[Tuple[int, ...], Fraction] = defaultdict(Fraction)
        for datum, weight in self.weights.items():
            out[datum.I] += weight
        return dict(sorted(out.items()))


def direct_enumeration(n: int, registry: TokenRegistry, max_results: Optional[int] = None) -> WeightedIndexSet:
    out = WeightedIndexSet()
    for datum in enumerate_relevant(n, registry, max_results):
        out.add(datum, class_weight(datum))
    return out


def _run_start(start: StartingDatum, max_graphs: Optional[int]) -> Tuple[WeightedIndexSet, int]:
    out = WeightedIndexSet()
    count = 0
    for g1 in graphs_stage1(start.datum, max_graphs):
        tau = tuple_of_stage1(start.datum, g1)
        for g2 in graphs_stage2(tau, max_graphs):
            delta = tuple_of_stage2(tau, g2)
            out.add(downward_transform(delta).d_down, start.weight)
            count += 1
    return out, count


@dataclass
class PipelineReport:
    n: int
    classes: WeightedIndexSet
    direct: WeightedIndexSet
    graphs: int = 0
    starts: int = 0

    @property
    def matches_direct_enumeration(self) -> bool:
        return self.classes == self.direct


def pipeline(n: int, registry: TokenRegistry, tie_break: str = "id", max_blocks: Optional[int] = None,
             max_graphs: Optional[int] = None, threads: int = 1) -> WeightedIndexSet:
    """Weighted relevant classes produced by the two graph stages and the downward transform.

    Raises:
        LimitExceeded: If a starting datum has more than ``max_blocks`` blocks or
            the graph count exceeds ``max_graphs``
    """
    return run_pipeline(n, registry, tie_break, max_blocks, max_graphs, threads).classes


def run_pipeline(n: int, registry: TokenRegistry, tie_break: str = "id", max_blocks: Optional[int] = None,
                 max_graphs: Optional[int] = None, threads: int = 1) -> PipelineReport:
    starts = starting_data(n, registry, tie_break)
    if max_blocks is not None:
        for start in starts:
            size = len(start.datum.plus) + len(start.datum.c1) + len(start.datum.c2)
            if size > max_blocks:
                raise LimitExceeded(f"starting datum with {size} blocks exceeds the limit {max_blocks}")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda s: _run_start(s, max_graphs), starts))
    else:
        results = [_run_start(s, max_graphs) for s in starts]
    classes, total = WeightedIndexSet(), 0
    for partial, count in results:
        classes = classes.merge(partial)
        total += count
    if max_graphs is not None and total > max_graphs:
        raise LimitExceeded(f"{total} graph pairs exceed the limit {max_graphs}")
    logger.info("pipeline n=%d: %d starts, %d graph pairs, %d classes", n, len(starts), total, len(classes))
    return PipelineReport(n, classes, direct_enumeration(n, registry), total, len(starts))


def levels(datum: IncreasingDatum) -> List[int]:
    """Distinct d values of the + blocks, largest first."""
    return sorted({b.d for b in datum.plus}, reverse=True)


def _level_vertices(datum: IncreasingDatum, d: int) -> List[int]:
    return [i for i, b in enumerate(datum.plus) if b.d == d]


def extend_n(datum: IncreasingDatum, graph: nx.Graph, d: int) -> List[nx.Graph]:
    """G(graph, n, d): add c1 edges at the + vertices of degree d."""
    return _extend_vertices(datum, graph, _level_vertices(datum, d), "1")


def extend_n1(datum: IncreasingDatum, graph: nx.Graph, d: int) -> List[nx.Graph]:
    """G(graph, n+1, d): add c2 edges at the + vertices of degree d."""
    return _extend_vertices(datum, graph, _level_vertices(datum, d), "2")


def extend_level(datum: IncreasingDatum, graph: nx.Graph, d: int) -> List[nx.Graph]:
    """G(graph, d): the n side first, then the n+1 side."""
    return [g2 for g1 in extend_n(datum, graph, d) for g2 in extend_n1(datum, g1, d)]


def stage1_by_levels(datum: IncreasingDatum) -> List[nx.Graph]:
    _check_plus_order(datum)
    graphs = [_base_graph(datum, ("+", "c1", "c2"))]
    for d in levels(datum):
        graphs = [g for base in graphs for g in extend_level(datum, base, d)]
    return graphs


def _touches_below(graph: nx.Graph, datum: IncreasingDatum, d: int) -> bool:
    return any(z == "+" and datum.plus[i].d < d and graph.degree((z, i)) for z, i in graph.nodes)


def level_family(datum: IncreasingDatum, d: int) -> List[nx.Graph]:
    """G(pi, d): stage-1 graphs whose edges only meet + vertices with degree >= d."""
    return [g for g in graphs_stage1(datum) if not _touches_below(g, datum, d)]


def _restrict_above(graph: nx.Graph, datum: IncreasingDatum, d: int) -> EdgeKey:
    return frozenset(e for e in edge_key(graph)
                     if all(not (z == "+" and datum.plus[i].d <= d) for z, i in e))


@dataclass
class FamilyPartition:
    base: nx.Graph
    d: int
    n_side: List[nx.Graph] = field(default_factory=list)
    by_n_side: Dict[EdgeKey, List[nx.Graph]] = field(default_factory=dict)
    full: List[nx.Graph] = field(default_factory=list)

    def disjoint_union_holds(self) -> bool:
        """G(base, d) is the disjoint union of G(g, n+1, d) over g in G(base, n, d)."""
        pieces = [edge_key(g) for part in self.by_n_side.values() for g in part]
        return len(pieces) == len(set(pieces)) and set(pieces) == {edge_key(g) for g in self.full}


def family_partitions(datum: IncreasingDatum, graph: nx.Graph, d: int) -> FamilyPartition:
    """The families G(graph, n, d), G(g', n+1, d) and G(graph, d), the last one by filtering."""
    n_side = extend_n(datum, graph, d)
    by_n_side = {edge_key(g): extend_n1(datum, g, d) for g in n_side}
    key = edge_key(graph)
    full = [g for g in level_family(datum, d) if _restrict_above(g, datum, d) == key]
    return FamilyPartition(graph, d, n_side, by_n_side, full)


def level_partition_holds(datum: IncreasingDatum, d: int) -> bool:
    """G(pi, d) is the disjoint union of G(g, d) over g in G(pi, d+1)."""
    pieces = [edge_key(g) for base in level_family(datum, d + 1) for g in extend_level(datum, base, d)]
    return len(pieces) == len(set(pieces)) and set(pieces) == {edge_key(g) for g in level_family(datum, d)}


@dataclass(frozen=True)
class FiberCount:
    brute_force: int
    formula: int
    stab_ratio: Fraction

    @property
    def consistent(self) -> bool:
        return self.brute_force == self.formula == self.stab_ratio


def _stab(datum: IncreasingDatum) -> int:
    return datum.stab_order()


def _stage1_formula(datum: IncreasingDatum, base: nx.Graph, graph: nx.Graph, d: int) -> int:
    tokens = {datum.plus[i].sigma for i in _level_vertices(datum, d)}
    total = 1
    for sigma in tokens:
        vertices = [i for i in _level_vertices(datum, d) if datum.plus[i].sigma == sigma]
        kinds = Counter()
        for i in vertices:
            kinds[frozenset(z for z, _ in graph.neighbors(("+", i)))] += 1
        k1, k2 = kinds[frozenset({"c1"})], kinds[frozenset({"c2"})]
        k12 = kinds[frozenset({"c1", "c2"})]
        rest = len(vertices) - k1 - k2 - k12
        free1 = sum(1 for j, c in enumerate(datum.c1) if c.sigma == sigma and not base.degree(("c1", j)))
        free2 = sum(1 for k, c in enumerate(datum.c2) if c.sigma == sigma.dual and not base.degree(("c2", k)))
        multinomial = factorial(len(vertices)) // (factorial(k1) * factorial(k2) * factorial(k12) * factorial(rest))
        total *= multinomial
        total *= factorial(free1) // factorial(free1 - k1 - k12)
        total *= factorial(free2) // factorial(free2 - k2 - k12)
    return total


def _stage2_formula(datum: IncreasingDatum, graph: nx.Graph) -> int:
    total = 1
    for sigma in {c.sigma for c in datum.c1}:
        m = sum(1 for (z, j) in graph.nodes if z == "c1" and datum.c1[j].sigma == sigma and graph.degree((z, j)))
        k1 = sum(1 for c in datum.c1 if c.sigma == sigma)
        k2 = sum(1 for c in datum.c2 if c.sigma == sigma.dual)
        total *= comb(k1, m) * comb(k2, m) * factorial(m)
    return total


def fiber_count(datum: IncreasingDatum, graph: nx.Graph, d: Optional[int] = None,
                base: Optional[nx.Graph] = None) -> FiberCount:
    """Size of the fiber of the tuple map through ``graph``, three ways.

    With ``d`` and ``base`` the fiber is taken in the stage-1 family G(base, d);
    otherwise ``graph`` is a stage-2 matching on ``datum``.
    """
    if d is not None:
        if base is None:
            raise ValueError("stage-1 fibers need the base graph")
        image = tuple_of_stage1(datum, graph)
        brute = sum(1 for g in extend_level(datum, base, d) if tuple_of_stage1(datum, g) == image)
        formula = _stage1_formula(datum, base, graph, d)
        ratio = Fraction(_stab(tuple_of_stage1(datum, base)), _stab(image))
    else:
        image = tuple_of_stage2(datum, graph)
        brute = sum(1 for g in graphs_stage2(datum) if tuple_of_stage2(datum, g) == image)
        formula = _stage2_formula(datum, graph)
        ratio = Fraction(_stab(datum), _stab(image))
    return FiberCount(brute, formula, ratio)


@dataclass(frozen=True)
class BijectionWitness:
    start: IncreasingDatum
    tau: IncreasingDatum
    delta: IncreasingDatum

    def verify(self, target: RelevantDatum) -> bool:
        """The witness is reachable through the two stages and lands on ``target``."""
        taus = [tuple_of_stage1(self.start, g) for g in graphs_stage1(self.start)]
        if self.tau not in taus:
            return False
        deltas = [tuple_of_stage2(self.tau, g) for g in graphs_stage2(self.tau)]
        if self.delta not in deltas:
            return False
        return downward_transform(self.delta).d_down.canonical() == target.canonical()


def bijection_inverse(datum: RelevantDatum) -> BijectionWitness:
    """Rebuild (start, tau, delta) whose downward image is the class of ``datum``."""
    one_cusp = [b for b in datum.one if b.d == 1]
    one_res = [b for b in datum.one if b.d >= 2]
    two_cusp = [b for b in datum.two if b.d == 1]
    two_res = [b for b in datum.two if b.d >= 2]
    minus_cusp = [b for b in datum.minus if b.d == 1]
    minus_res = [b for b in datum.minus if b.d >= 2]
    pairs = [(b, b.dual()) for b in minus_res]
    delta = make_increasing(datum.plus, one_res, one_cusp, two_res, two_cusp, minus_cusp, pairs)
    tau = make_increasing(datum.plus, one_res, one_cusp + minus_cusp, two_res,
                          two_cusp + [b.dual() for b in minus_cusp], (), pairs)
    plus = list(datum.plus)
    plus += [SpehBlock(b.sigma, b.d - 1) for b in tau.one]
    plus += [SpehBlock(b.sigma.dual, b.d - 1) for j, b in enumerate(tau.two) if j not in tau.I2]
    c1 = list(tau.c1) + [SpehBlock(b.sigma, 1) for b in tau.one]
    c2 = list(tau.c2) + [SpehBlock(b.sigma, 1) for b in tau.two]
    start = IncreasingDatum(plus=canonical_order(plus), c1=canonical_order(c1), c2=canonical_order(c2))
    if blocks_total(start.plus) + blocks_total(start.c1) != datum.n:
        raise ValidationError("reconstructed starting datum has the wrong size")
    return BijectionWitness(start, tau, delta)
