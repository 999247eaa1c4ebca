"""
Verification suites behind ``rankin verify``.

Each suite returns a list of Check results; a check aggregates many cases
and keeps the first few failing ones for the report.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional

from .divisors import residue_form_families, secondary_agrees_with_alternative
from .errors import BookkeeperError
from .exactlin import permute_sequence
from .relevant import (downward_transform, empty_transform, enumerate_increasing, enumerate_relevant,
                       increasing_construction, rho_pi, rho_pi_up, validate_relevant, weyl_W_pi)
from .resgraph import (bijection_inverse, edge_key, family_partitions, fiber_count, graphs_stage1,
                       graphs_stage2, level_family, level_partition_holds, levels, run_pipeline,
                       stage1_by_levels, starting_data, tuple_of_stage1)
from .rsparab import brute_force_semistandard_rs, enumerate_rs
from .scalarfactor import (cocycle_holds, cuspidal_n_factor, mzeros_regularity, n_factor, nij_expand, nij_total,
                           pair_interleavings)
from .spectra import CuspidalToken, SpehBlock, TokenRegistry
from .zetanum import (TRIVIAL, check_against_mpmath, check_conjugation, check_functional_equation,
                      check_gl1gl2, check_n_at_zero, check_residues)

logger = logging.getLogger(__name__)

RS_COUNTS = {1: 3, 2: 8, 3: 20, 4: 48}
MAX_FAILURES = 5

_CHI = CuspidalToken("chi", 1, "chi")
_ETA = CuspidalToken("eta", 1, "eta")
_SIGMA = CuspidalToken("sigma", 2, "sigma")
_A = CuspidalToken("a", 1, "b")
_B = CuspidalToken("b", 1, "a")

# three-token registries the pipeline is replayed over when none is given
PIPELINE_CORPUS = (
    (_CHI, _ETA, _SIGMA),
    (_A, _B, _CHI),
    (_A, _B, _SIGMA),
)

# weighted classes for n = 1 over a single self-dual character, keyed by zone totals
RANK_ONE_REFERENCE = {
    (0, 1, 2, 0): Fraction(1, 2),
    (0, 0, 1, 1): Fraction(1),
    (1, 0, 1, 0): Fraction(1),
    (0, 0, 2, 0): Fraction(1),
}


@dataclass
class Check:
    suite: str
    name: str
    cases: int = 0
    failures: List[str] = field(default_factory=list)
    detail: str = ""
    extra: Dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def expect(self, condition: bool, case: str) -> None:
        self.cases += 1
        if not condition:
            self.failures.append(case)

    def record(self) -> Dict:
        return {
            "suite": self.suite,
            "check": self.name,
            "cases": self.cases,
            "pass": self.passed,
            "failures": self.failures[:MAX_FAILURES],
            "detail": self.detail,
            **self.extra,
        }


@dataclass
class SuiteOptions:
    n: int = 2
    registry: Optional[TokenRegistry] = None
    max_blocks: Optional[int] = None
    max_graphs: Optional[int] = None
    threads: int = 1

    def tokens(self) -> TokenRegistry:
        if self.registry is None or not len(self.registry):
            return TokenRegistry([TRIVIAL])
        return self.registry


def rs_suite(options: SuiteOptions) -> List[Check]:
    bijection = Check("rs", "RS parabolics match semi-standard brute force")
    counts = Check("rs", "RS parabolic counts 3, 8, 20, 48")
    for n, expected in RS_COUNTS.items():
        listed = enumerate_rs(n)
        blocks = {q.semi_standard_blocks() for q in listed}
        bijection.expect(blocks == brute_force_semistandard_rs(n) and len(blocks) == len(listed), f"n={n}")
        counts.expect(len(listed) == expected, f"n={n}: {len(listed)} != {expected}")
    return [bijection, counts]


def _small_starts(options: SuiteOptions) -> Iterable:
    registry = options.tokens()
    for n in range(1, options.n + 1):
        for start in starting_data(n, registry):
            size = len(start.datum.plus) + len(start.datum.c1) + len(start.datum.c2)
            if options.max_blocks is None or size <= options.max_blocks:
                yield start.datum


def counting_suite(options: SuiteOptions) -> List[Check]:
    stage1 = Check("counting", "stage-1 fiber counts agree")
    stage2 = Check("counting", "stage-2 fiber counts agree")
    unions = Check("counting", "level families are disjoint unions")
    by_levels = Check("counting", "level-by-level construction gives every stage-1 graph")
    for datum in _small_starts(options):
        label = datum.describe()
        graphs = graphs_stage1(datum)
        by_levels.expect({edge_key(g) for g in stage1_by_levels(datum)} == {edge_key(g) for g in graphs}
                         and len(stage1_by_levels(datum)) == len(graphs), label)
        for d in levels(datum):
            unions.expect(level_partition_holds(datum, d), f"{label} d={d}")
            for base in level_family(datum, d + 1):
                partition = family_partitions(datum, base, d)
                unions.expect(partition.disjoint_union_holds(), f"{label} d={d} base={sorted(edge_key(base))}")
                for g in partition.full:
                    stage1.expect(fiber_count(datum, g, d, base).consistent, f"{label} d={d} {sorted(edge_key(g))}")
        for g1 in graphs:
            tau = tuple_of_stage1(datum, g1)
            for g2 in graphs_stage2(tau):
                stage2.expect(fiber_count(tau, g2).consistent, f"{tau.describe()} {sorted(edge_key(g2))}")
    return [stage1, stage2, unions, by_levels]


def _rho_sum(datum):
    return tuple(a + b for a, b in zip(rho_pi(datum), rho_pi_up(datum)))


def affine_suite(options: SuiteOptions) -> List[Check]:
    registry = options.tokens()
    families = Check("affine", "residue families cut out the shifted a_pi*")
    alternative = Check("affine", "alternative secondary forms agree on the primary zero set")
    downward = Check("affine", "downward transform carries a_pi* - rho onto its image")
    empty = Check("affine", "empty transform relation and composition law")
    construction = Check("affine", "increasing constructions are minimal coset representatives")
    closure = Check("affine", "relevant data are closed under W(pi)")
    max_n = min(options.n, 3)
    for n in range(1, max_n + 1):
        for datum in enumerate_relevant(n, registry):
            label = datum.describe()
            result = residue_form_families(datum)
            families.expect(result.matches_target, label)
            alternative.expect(secondary_agrees_with_alternative(datum), label)
            construction.expect(increasing_construction(datum).verify(), label)
            for w in weyl_W_pi(datum):
                moved = validate_relevant(datum.I, None, datum.pi.permuted_by(w))
                closure.expect(bool(moved), f"{label} w={w.one_line()}")
        for datum in enumerate_increasing(n, registry):
            label = datum.describe()
            families.expect(residue_form_families(datum).matches_target, label)
            construction.expect(increasing_construction(datum).verify(), label)
            down = downward_transform(datum)
            downward.expect(down.source_subspace(datum) == down.target_subspace(), label)
            e = empty_transform(datum)
            relation = permute_sequence(e.w_empty.flat(), _rho_sum(datum)) == _rho_sum(e.d_empty)
            down_e = downward_transform(e.d_empty)
            law = (down_e.w_down.compose(e.w_empty) == down.w_down
                   and down_e.d_down.canonical() == down.d_down.canonical())
            empty.expect(relation and law, label)
    return [families, alternative, downward, empty, construction, closure]


def nij_suite(options: SuiteOptions) -> List[Check]:
    variants = Check("nij", "telescoped pair contributions agree in both variants")
    interleavings = Check("nij", "both variants agree on every partial interleaving of two blocks")
    discrete = Check("nij", "discrete and cuspidal expansions of n(w) agree")
    cocycle = Check("nij", "cocycle relation on three blocks")
    regular = Check("nij", "n(w) is regular on lambda_1 = lambda_2")
    for d_i in range(1, 6):
        for d_j in range(1, 6):
            blocks = [SpehBlock(TRIVIAL, d_i), SpehBlock(TRIVIAL, d_j)]
            a, b = nij_total(blocks, (1, 0), "A"), nij_total(blocks, (1, 0), "B")
            variants.expect(a == b and a == cuspidal_n_factor(blocks, (1, 0)), f"d=({d_i},{d_j})")
            discrete.expect(n_factor(blocks, (1, 0)) == cuspidal_n_factor(blocks, (1, 0)), f"d=({d_i},{d_j})")
            for w_sub in pair_interleavings(d_i, d_j):
                same = nij_expand(blocks, w_sub, 0, 1, "A") == nij_expand(blocks, w_sub, 0, 1, "B")
                interleavings.expect(same, f"d=({d_i},{d_j}) w_sub={w_sub}")
    for ds in ((1, 2, 3), (2, 2, 1), (3, 1, 2)):
        blocks = [SpehBlock(TRIVIAL, d) for d in ds]
        for w1, w2 in (((1, 0, 2), (0, 2, 1)), ((0, 2, 1), (1, 0, 2)), ((1, 0, 2), (1, 2, 0))):
            try:
                cocycle.expect(cocycle_holds(blocks, w1, w2), f"d={ds} w1={w1} w2={w2}")
            except ValueError:
                logger.debug("skipping w1=%s w2=%s: lengths do not add", w1, w2)
    for d in range(1, 5):
        report = mzeros_regularity(SpehBlock(TRIVIAL, d))
        regular.expect(report.regular and report.order == 0, f"d={d}: order {report.order}")
    return [variants, interleavings, discrete, cocycle, regular]


def zeta_suite(options: SuiteOptions) -> List[Check]:
    out = []
    for report in (check_functional_equation(), check_conjugation(), check_against_mpmath(), check_residues(),
                   check_n_at_zero(), check_gl1gl2(1), check_gl1gl2(2)):
        check = Check("zeta", report.check, detail=f"max_{report.metric}_error={report.max_error:.3e}",
                      extra={"points": [list(p) for p in report.points],
                             f"max_{report.metric}_error": report.max_error})
        check.expect(report.passed, f"max error {report.max_error:.3e} > {report.tolerance:.0e}")
        check.cases = len(report.points)
        out.append(check)
    return out


def _is_rank_one_self_dual(registry: TokenRegistry) -> bool:
    tokens = registry.tokens
    return len(tokens) == 1 and tokens[0].rank == 1 and tokens[0].self_dual


def pipeline_registries(options: SuiteOptions) -> List[TokenRegistry]:
    """The given registry, or the trivial character followed by the corpus."""
    if options.registry is not None and len(options.registry):
        return [options.registry]
    return [options.tokens()] + [TokenRegistry(tokens) for tokens in PIPELINE_CORPUS]


def _registry_label(registry: TokenRegistry) -> str:
    return "{" + ",".join(t.id for t in registry.tokens) + "}"


def pipeline_suite(options: SuiteOptions) -> List[Check]:
    registries = pipeline_registries(options)
    direct = Check("pipeline", "pipeline equals the direct enumeration")
    ties = Check("pipeline", "tie-break order does not change the aggregate")
    inverse = Check("pipeline", "every class is reached through a reconstructed witness")
    out = [direct, ties, inverse]
    for position, registry in enumerate(registries):
        label = _registry_label(registry)
        for n in range(1, options.n + 1):
            report = run_pipeline(n, registry, "id", options.max_blocks, options.max_graphs, options.threads)
            direct.expect(report.matches_direct_enumeration, f"{label} n={n}")
            reverse = run_pipeline(n, registry, "reverse", options.max_blocks, options.max_graphs, options.threads)
            ties.expect(reverse.classes == report.classes, f"{label} n={n}")
            if position:
                continue
            for datum, _ in report.direct.items():
                try:
                    ok = bijection_inverse(datum).verify(datum)
                except BookkeeperError as e:
                    ok = False
                    logger.debug("no witness for %s: %s", datum.describe(), e)
                inverse.expect(ok, datum.describe())
            if n == 1 and _is_rank_one_self_dual(registry):
                reference = Check("pipeline", "rank-one weighted classes for n=1")
                reference.expect(report.classes.by_shape() == RANK_ONE_REFERENCE, str(report.classes.by_shape()))
                out.append(reference)
    return out


SUITES: Dict[str, Callable[[SuiteOptions], List[Check]]] = {
    "rs": rs_suite,
    "counting": counting_suite,
    "affine": affine_suite,
    "nij": nij_suite,
    "zeta": zeta_suite,
    "pipeline": pipeline_suite,
}


def run_suite(name: str, options: SuiteOptions) -> List[Check]:
    """Run one suite, or every suite for ``all``.

    Raises:
        ValueError: If the suite name is unknown
    """
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise ValueError(f"unknown suite {name!r}")
    checks = []
    for suite in names:
        logger.info("running suite %s", suite)
        checks.extend(SUITES[suite](options))
    return checks
