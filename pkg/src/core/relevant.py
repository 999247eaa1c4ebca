"""
Relevant and increasing inducing data.

A relevant datum is stored by its four zones (+, 1, 2, -) of Speh blocks;
the GL(n) and GL(n+1) block lists, I and P are derived from them. An
increasing datum adds the cuspidal zones c1/c2 and the matched index sets
I1/I2.

Elements of W(pi) permute the full block lists, GL(0) blocks included.
The transforms act on the nonzero blocks of each side, which are also the
coordinates of a_P*.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import factorial
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import LimitExceeded, ValidationError
from .exactlin import (AffineForm, AffineSubspace, Composition, CoordVector, WeylBlockElement, compute_Pw,
                       is_min_coset_rep, permute_sequence)
from .rsparab import RSParabolic, rs_from_pair
from .spectra import (DiscreteRep, SpehBlock, TokenRegistry, blocks_total, canonical_order,
                      multiplicity_factorial, zone_key)

logger = logging.getLogger(__name__)

Label = Tuple[str, int]
QUARTER = Fraction(1, 4)


def _minus_dual(b: SpehBlock) -> SpehBlock:
    return b.derivative().dual()


@dataclass
class ValidationReport:
    """Outcome of a datum validation, with every failing clause."""

    ok: bool
    datum: Optional[object] = None
    clauses: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def raise_for_failure(self) -> None:
        if not self.ok:
            raise ValidationError(self.clauses[0] if self.clauses else "invalid datum",
                                  "; ".join(self.clauses[1:]) or None)


class _SidedDatum:
    """Shared side/coordinate bookkeeping; subclasses provide ``labelled_sides``."""

    def labelled_sides(self) -> Tuple[List[Tuple[Label, SpehBlock]], List[Tuple[Label, SpehBlock]]]:
        raise NotImplementedError

    @property
    def pi(self) -> DiscreteRep:
        side_n, side_n1 = self.labelled_sides()
        return DiscreteRep(tuple(b for _, b in side_n), tuple(b for _, b in side_n1))

    @property
    def P(self) -> Tuple[Composition, Composition]:
        return self.pi.composition()

    @property
    def n(self) -> int:
        return self.pi.sizes[0]

    def nonzero_labelled(self) -> Tuple[List[Tuple[Label, SpehBlock]], List[Tuple[Label, SpehBlock]]]:
        side_n, side_n1 = self.labelled_sides()
        return ([(l, b) for l, b in side_n if not b.degenerate],
                [(l, b) for l, b in side_n1 if not b.degenerate])

    def labels(self) -> Tuple[List[Label], List[Label]]:
        side_n, side_n1 = self.nonzero_labelled()
        return [l for l, _ in side_n], [l for l, _ in side_n1]

    def coordinate_index(self) -> Dict[Tuple[str, Label], int]:
        """Map ("n"|"n1", label) to its coordinate in a_P* (side n first)."""
        labels_n, labels_n1 = self.labels()
        index = {("n", l): k for k, l in enumerate(labels_n)}
        index.update({("n1", l): len(labels_n) + k for k, l in enumerate(labels_n1)})
        return index

    @property
    def ambient_dim(self) -> int:
        labels_n, labels_n1 = self.labels()
        return len(labels_n) + len(labels_n1)

    def chart(self) -> Tuple[str, ...]:
        labels_n, labels_n1 = self.labels()
        return tuple(f"ln[{z}{i + 1}]" for z, i in labels_n) + tuple(f"ln1[{z}{i + 1}]" for z, i in labels_n1)

    def _vector(self, values: Dict[Tuple[str, Label], Fraction]) -> CoordVector:
        out = [Fraction(0)] * self.ambient_dim
        index = self.coordinate_index()
        for key, value in values.items():
            if key in index:
                out[index[key]] = value
        return tuple(out)

    def _subspace(self, pairs: Iterable[Tuple[Label, Label]]) -> AffineSubspace:
        """Anti-diagonal equations x_n(a) + x_n1(b) = 0 over the given label pairs."""
        index = self.coordinate_index()
        rows = []
        for a, b in pairs:
            if ("n", a) in index and ("n1", b) in index:
                row = [0] * (self.ambient_dim + 1)
                row[index[("n", a)]] = 1
                row[index[("n1", b)]] = 1
                rows.append(row)
        return AffineSubspace.from_equations(self.ambient_dim, rows, self.chart())


@dataclass(frozen=True)
class RelevantDatum(_SidedDatum):
    """(I, P, pi) in Pi_H, stored by zones."""

    plus: Tuple[SpehBlock, ...] = ()
    one: Tuple[SpehBlock, ...] = ()
    two: Tuple[SpehBlock, ...] = ()
    minus: Tuple[SpehBlock, ...] = ()

    def __post_init__(self):
        for name in ("plus", "one", "two", "minus"):
            blocks = tuple(getattr(self, name))
            if any(b.degenerate for b in blocks):
                raise ValidationError("zone blocks are non-degenerate", name)
            object.__setattr__(self, name, blocks)

    @property
    def I(self) -> Tuple[int, int, int, int]:
        return tuple(blocks_total(z) for z in (self.plus, self.one, self.two, self.minus))

    @property
    def m(self) -> Tuple[int, int, int, int]:
        return (len(self.plus), len(self.one), len(self.two), len(self.minus))

    def labelled_sides(self):
        side_n = ([(("+", i), b) for i, b in enumerate(self.plus)]
                  + [(("1", i), b) for i, b in enumerate(self.one)]
                  + [(("2p", i), _minus_dual(b)) for i, b in enumerate(self.two)]
                  + [(("-", i), b) for i, b in enumerate(self.minus)])
        side_n1 = ([(("+", i), b.dual()) for i, b in enumerate(self.plus)]
                   + [(("1p", i), _minus_dual(b)) for i, b in enumerate(self.one)]
                   + [(("2", i), b) for i, b in enumerate(self.two)]
                   + [(("-", i), b.dual()) for i, b in enumerate(self.minus)])
        return side_n, side_n1

    def canonical(self) -> "RelevantDatum":
        return RelevantDatum(canonical_order(self.plus), canonical_order(self.one),
                             canonical_order(self.two), canonical_order(self.minus))

    def class_key(self):
        return (self.I, zone_key(self.plus), zone_key(self.one), zone_key(self.two), zone_key(self.minus))

    def sort_key(self):
        return self.class_key()

    def permuted_by(self, w: WeylBlockElement) -> "RelevantDatum":
        """Apply a block-diagonal element of W(pi) (the same permutation on both sides)."""
        perm = w.perms[0]
        m_plus, m1, m2, _ = self.m
        cuts = [0, m_plus, m_plus + m1, m_plus + m1 + m2, sum(self.m)]
        zones = []
        for (lo, hi), zone in zip(zip(cuts, cuts[1:]), (self.plus, self.one, self.two, self.minus)):
            local = [perm[k] - lo for k in range(lo, hi)]
            if sorted(local) != list(range(hi - lo)):
                raise ValidationError("Weyl element is not block diagonal over the zones")
            zones.append(permute_sequence(local, zone))
        return RelevantDatum(*zones)

    def describe(self) -> str:
        def fmt(zone):
            return "[" + ", ".join(b.label() for b in zone) + "]"
        return (f"I={self.I} +={fmt(self.plus)} 1={fmt(self.one)} "
                f"2={fmt(self.two)} -={fmt(self.minus)}")


@dataclass(frozen=True)
class IncreasingDatum(_SidedDatum):
    """(I, P, pi, I1, I2) in Pi_H^up, stored by zones; I1/I2 are 0-based."""

    plus: Tuple[SpehBlock, ...] = ()
    one: Tuple[SpehBlock, ...] = ()
    c1: Tuple[SpehBlock, ...] = ()
    two: Tuple[SpehBlock, ...] = ()
    c2: Tuple[SpehBlock, ...] = ()
    minus: Tuple[SpehBlock, ...] = ()
    I1: Tuple[int, ...] = ()
    I2: Tuple[int, ...] = ()

    def __post_init__(self):
        for name in ("plus", "one", "c1", "two", "c2", "minus", "I1", "I2"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    @property
    def I(self) -> Tuple[int, ...]:
        return tuple(blocks_total(z) for z in (self.plus, self.one, self.c1, self.two, self.c2, self.minus))

    def unmatched_one(self) -> List[int]:
        return [i for i in range(len(self.one)) if i not in self.I1]

    def unmatched_two(self) -> List[int]:
        return [i for i in range(len(self.two)) if i not in self.I2]

    def labelled_sides(self):
        side_n = ([(("+", i), b) for i, b in enumerate(self.plus)]
                  + [(("2p", i), _minus_dual(self.two[i])) for i in self.unmatched_two()]
                  + [(("1", i), b) for i, b in enumerate(self.one)]
                  + [(("c1", i), b) for i, b in enumerate(self.c1)]
                  + [(("-", i), b) for i, b in enumerate(self.minus)])
        side_n1 = ([(("+", i), b.dual()) for i, b in enumerate(self.plus)]
                   + [(("1p", i), _minus_dual(self.one[i])) for i in self.unmatched_one()]
                   + [(("2", i), b) for i, b in enumerate(self.two)]
                   + [(("c2", i), b) for i, b in enumerate(self.c2)]
                   + [(("-", i), b.dual()) for i, b in enumerate(self.minus)])
        return side_n, side_n1

    def pairs(self) -> List[Tuple[SpehBlock, SpehBlock]]:
        return [(self.one[i], self.two[j]) for i, j in zip(self.I1, self.I2)]

    def class_key(self):
        """Key of the datum up to reordering inside each zone, matched pairs kept together."""
        return (zone_key(self.plus), zone_key(self.c1), zone_key(self.c2),
                zone_key(self.one[i] for i in self.unmatched_one()),
                zone_key(self.two[j] for j in self.unmatched_two()),
                tuple(sorted((a.sort_key(), b.sort_key()) for a, b in self.pairs())),
                zone_key(self.minus))

    def stab_order(self) -> int:
        """|Stab|: zone-preserving block permutations fixing the datum."""
        out = 1
        for zone in (self.plus, self.c1, self.c2, self.minus,
                     [self.one[i] for i in self.unmatched_one()],
                     [self.two[j] for j in self.unmatched_two()]):
            out *= multiplicity_factorial(b.sort_key() for b in zone)
        out *= multiplicity_factorial((a.sort_key(), b.sort_key()) for a, b in self.pairs())
        return out

    def describe(self) -> str:
        def fmt(zone):
            return "[" + ", ".join(b.label() for b in zone) + "]"
        return (f"I={self.I} +={fmt(self.plus)} 1={fmt(self.one)} c1={fmt(self.c1)} "
                f"2={fmt(self.two)} c2={fmt(self.c2)} -={fmt(self.minus)} "
                f"I1={list(self.I1)} I2={list(self.I2)}")


def _parse_zones(side_n: Sequence[SpehBlock], side_n1: Sequence[SpehBlock]) -> Iterator[RelevantDatum]:
    """Every zone split of the nonzero blocks of both sides into (+, 1, 2, -)."""

    def step(zone, i, j, zones):
        if zone == 4:
            if i == len(side_n) and j == len(side_n1):
                yield RelevantDatum(*zones)
            return
        yield from step(zone + 1, i, j, zones)
        here = list(zones)
        if zone in (0, 3):
            if i < len(side_n) and j < len(side_n1) and side_n1[j].iso(side_n[i].dual()):
                here[zone] = zones[zone] + (side_n[i],)
                yield from step(zone, i + 1, j + 1, tuple(here))
        elif zone == 1 and i < len(side_n):
            b = side_n[i]
            here[1] = zones[1] + (b,)
            if b.d == 1:
                yield from step(zone, i + 1, j, tuple(here))
            elif j < len(side_n1) and side_n1[j].iso(_minus_dual(b)):
                yield from step(zone, i + 1, j + 1, tuple(here))
        elif zone == 2 and j < len(side_n1):
            b = side_n1[j]
            here[2] = zones[2] + (b,)
            if b.d == 1:
                yield from step(zone, i, j + 1, tuple(here))
            elif i < len(side_n) and side_n[i].iso(_minus_dual(b)):
                yield from step(zone, i + 1, j + 1, tuple(here))

    yield from step(0, 0, 0, ((), (), (), ()))


def validate_relevant(I: Sequence[int], P: Optional[Sequence[Composition]], pi: DiscreteRep) -> ValidationReport:
    """Check (I, P, pi) against the Pi_H constraints and recover its zones.

    GL(0) blocks of pi may be given explicitly or left out.
    """
    n, n1 = pi.sizes
    if n1 != n + 1:
        return ValidationReport(False, None, [f"side sizes ({n}, {n1}) are not (n, n+1)"])
    side_n, side_n1 = pi.nonzero_sides()
    structural = None
    for datum in _parse_zones(side_n, side_n1):
        if tuple(I) != datum.I:
            structural = structural or f"I={tuple(I)} differs from zone totals {datum.I}"
            continue
        if P is not None and tuple(Composition(tuple(p)).nonzero() for p in P) != tuple(
                c.nonzero() for c in datum.P):
            structural = structural or "P does not match the block sizes"
            continue
        return ValidationReport(True, datum, [])
    return ValidationReport(False, None, [structural or "no zone split matches the pi shape"])


def validate_increasing(datum: IncreasingDatum) -> ValidationReport:
    """Check the Pi_H^up constraints of an increasing datum."""
    clauses = []
    for name in ("one", "two"):
        zone = getattr(datum, name)
        if any(b.d < 2 for b in zone):
            clauses.append(f"zone {name} has a block with d < 2")
        if any(zone[k].d < zone[k + 1].d for k in range(len(zone) - 1)):
            clauses.append(f"zone {name} is not ordered by non-increasing d")
    for name in ("c1", "c2"):
        if any(b.d != 1 for b in getattr(datum, name)):
            clauses.append(f"zone {name} is not cuspidal")
    for name in ("plus", "minus"):
        if any(b.degenerate for b in getattr(datum, name)):
            clauses.append(f"zone {name} has a degenerate block")
    if len(datum.I1) != len(datum.I2):
        clauses.append("|I1| != |I2|")
    for name, zone in (("I1", datum.one), ("I2", datum.two)):
        idx = getattr(datum, name)
        if list(idx) != sorted(set(idx)) or any(not 0 <= i < len(zone) for i in idx):
            clauses.append(f"{name} is not an increasing index set")
    if not clauses:
        for a, b in datum.pairs():
            if not a.iso(b.dual()):
                clauses.append(f"matched pair {a.label()} / {b.label()} is not a dual pair")
        n, n1 = datum.pi.sizes
        if n1 != n + 1:
            clauses.append(f"side sizes ({n}, {n1}) are not (n, n+1)")
    return ValidationReport(not clauses, datum if not clauses else None, clauses)


def _multisets(candidates: Sequence[SpehBlock], cost, budget: Tuple[int, int],
               start: int = 0) -> Iterator[Tuple[Tuple[SpehBlock, ...], Tuple[int, int]]]:
    """Multisets from ``candidates`` (non-decreasing index) within a two-sided budget."""
    yield (), (0, 0)
    for k in range(start, len(candidates)):
        c = cost(candidates[k])
        if c[0] > budget[0] or c[1] > budget[1]:
            continue
        rest = (budget[0] - c[0], budget[1] - c[1])
        for tail, used in _multisets(candidates, cost, rest, k):
            yield (candidates[k],) + tail, (used[0] + c[0], used[1] + c[1])


def _zone_costs():
    return {
        "plus": lambda b: (b.size, b.size),
        "one": lambda b: (b.size, b.size - b.sigma.rank),
        "two": lambda b: (b.size - b.sigma.rank, b.size),
        "minus": lambda b: (b.size, b.size),
    }


def enumerate_relevant(n: int, registry: TokenRegistry, max_results: Optional[int] = None) -> List[RelevantDatum]:
    """Canonical representatives of Pi_H / W(pi), sorted canonically."""
    if n < 0:
        raise ValueError("n must be non-negative")
    candidates = registry.blocks(n + 1)
    costs = _zone_costs()
    found = []

    def extend(zones, remaining, order):
        if not order:
            if remaining == (0, 0):
                found.append(RelevantDatum(*zones))
                if max_results is not None and len(found) > max_results:
                    raise LimitExceeded(f"more than {max_results} relevant data")
            return
        name = order[0]
        for chosen, used in _multisets(candidates, costs[name], remaining):
            extend(zones + [chosen], (remaining[0] - used[0], remaining[1] - used[1]), order[1:])

    extend([], (n, n + 1), ["plus", "one", "two", "minus"])
    found.sort(key=RelevantDatum.sort_key)
    logger.info("enumerated %d relevant classes for n=%d over %d tokens", len(found), n, len(registry))
    return found


def _merge_with_pairs(unmatched: Sequence[SpehBlock], matched: Sequence[SpehBlock]):
    """Order blocks by d descending; unmatched first within a d, matched in given order."""
    tagged = [(-b.d, 0, b.sigma.id, k, b) for k, b in enumerate(unmatched)]
    tagged += [(-b.d, 1, "", k, b) for k, b in enumerate(matched)]
    tagged.sort(key=lambda t: t[:4])
    zone = tuple(t[4] for t in tagged)
    positions = tuple(pos for pos, t in enumerate(tagged) if t[1] == 1)
    return zone, positions


def make_increasing(plus=(), one=(), c1=(), two=(), c2=(), minus=(),
                    pairs: Sequence[Tuple[SpehBlock, SpehBlock]] = ()) -> IncreasingDatum:
    """Canonical increasing datum from zone multisets and matched (one, two) pairs."""
    pairs = sorted(pairs, key=lambda p: (-p[0].d, p[0].sigma.id, p[1].sigma.id))
    one_zone, I1 = _merge_with_pairs(canonical_order(one), [p[0] for p in pairs])
    two_zone, I2 = _merge_with_pairs(canonical_order(two), [p[1] for p in pairs])
    return IncreasingDatum(canonical_order(plus), one_zone, canonical_order(c1), two_zone,
                           canonical_order(c2), canonical_order(minus), I1, I2)


def enumerate_increasing(n: int, registry: TokenRegistry, max_results: Optional[int] = None) -> List[IncreasingDatum]:
    """Canonical representatives of the classes of Pi_H^up."""
    blocks = registry.blocks(n + 1)
    residual = [b for b in blocks if b.d >= 2]
    cusp = [b for b in blocks if b.d == 1]
    costs = {
        "plus": lambda b: (b.size, b.size),
        "one": lambda b: (b.size, b.size - b.sigma.rank),
        "two": lambda b: (b.size - b.sigma.rank, b.size),
        "pairs": lambda b: (b.size, b.size),
        "c1": lambda b: (b.size, 0),
        "c2": lambda b: (0, b.size),
        "minus": lambda b: (b.size, b.size),
    }
    pools = {"plus": blocks, "one": residual, "two": residual, "pairs": residual,
             "c1": cusp, "c2": cusp, "minus": blocks}
    found = []

    def extend(chosen, remaining, order):
        if not order:
            if remaining == (0, 0):
                pairs = [(b, b.dual()) for b in chosen["pairs"]]
                found.append(make_increasing(chosen["plus"], chosen["one"], chosen["c1"], chosen["two"],
                                             chosen["c2"], chosen["minus"], pairs))
                if max_results is not None and len(found) > max_results:
                    raise LimitExceeded(f"more than {max_results} increasing data")
            return
        name = order[0]
        for picked, used in _multisets(pools[name], costs[name], remaining):
            extend(dict(chosen, **{name: picked}), (remaining[0] - used[0], remaining[1] - used[1]), order[1:])

    extend({}, (n, n + 1), ["plus", "one", "two", "pairs", "c1", "c2", "minus"])
    found.sort(key=lambda d: (d.I, d.class_key()))
    logger.info("enumerated %d increasing classes for n=%d", len(found), n)
    return found


def class_weight(datum: RelevantDatum) -> Fraction:
    """Weight 1/|Stab(pi)| of a W(pi)-class in the spectral expansion."""
    return Fraction(1, stab_order(datum))


def stab_order(datum: RelevantDatum) -> int:
    out = 1
    for zone in (datum.plus, datum.one, datum.two, datum.minus):
        out *= multiplicity_factorial(b.sort_key() for b in zone)
    return out


def weyl_order(datum: RelevantDatum) -> int:
    out = 1
    for k in datum.m:
        out *= factorial(k)
    return out


def weyl_W_pi(datum: RelevantDatum) -> List[WeylBlockElement]:
    """W(pi): zone-wise permutations, identical on both sides."""
    m_plus, m1, m2, m_minus = datum.m
    offsets = [0, m_plus, m_plus + m1, m_plus + m1 + m2]
    out = []
    for choice in product(*(permutations(range(k)) for k in datum.m)):
        perm = []
        for offset, local in zip(offsets, choice):
            perm.extend(offset + x for x in local)
        out.append(WeylBlockElement((tuple(perm), tuple(perm))))
    return out


def stab_pi(datum: RelevantDatum) -> List[WeylBlockElement]:
    return [w for w in weyl_W_pi(datum) if datum.permuted_by(w) == datum]


def a_pi_subspace(datum) -> AffineSubspace:
    """a_pi* inside a_P* (coordinates: nonzero blocks of side n, then side n+1)."""
    if isinstance(datum, RelevantDatum):
        pairs = [(("+", i), ("+", i)) for i in range(len(datum.plus))]
        pairs += [(("1", i), ("1p", i)) for i in range(len(datum.one))]
        pairs += [(("2p", i), ("2", i)) for i in range(len(datum.two))]
        pairs += [(("-", i), ("-", i)) for i in range(len(datum.minus))]
        return datum._subspace(pairs)
    pairs = [(("+", i), ("+", i)) for i in range(len(datum.plus))]
    pairs += [(("1", i), ("1p", i)) for i in datum.unmatched_one()]
    pairs += [(("2p", j), ("2", j)) for j in datum.unmatched_two()]
    pairs += [(("1", i), ("2", j)) for i, j in zip(datum.I1, datum.I2)]
    pairs += [(("-", i), ("-", i)) for i in range(len(datum.minus))]
    return datum._subspace(pairs)


def chart_point(datum: RelevantDatum, params: Sequence) -> CoordVector:
    """The a_P* vector of the a_pi* chart point (lambda(+), lambda(1), lambda(2), lambda(-))."""
    m_plus, m1, m2, m_minus = datum.m
    if len(params) != sum(datum.m):
        raise ValueError(f"chart has {sum(datum.m)} coordinates")
    params = [Fraction(p) for p in params]
    t_plus, t1 = params[:m_plus], params[m_plus:m_plus + m1]
    t2, t_minus = params[m_plus + m1:m_plus + m1 + m2], params[m_plus + m1 + m2:]
    values = {}
    for i, t in enumerate(t_plus):
        values[("n", ("+", i))], values[("n1", ("+", i))] = t, -t
    for i, t in enumerate(t1):
        values[("n", ("1", i))], values[("n1", ("1p", i))] = t, -t
    for i, t in enumerate(t2):
        values[("n", ("2p", i))], values[("n1", ("2", i))] = -t, t
    for i, t in enumerate(t_minus):
        values[("n", ("-", i))], values[("n1", ("-", i))] = t, -t
    return datum._vector(values)


def rho_pi(datum) -> CoordVector:
    """1/4 on the + zone and -1/4 on the - zone, on both sides."""
    values = {}
    for i in range(len(datum.plus)):
        values[("n", ("+", i))] = values[("n1", ("+", i))] = QUARTER
    for i in range(len(datum.minus)):
        values[("n", ("-", i))] = values[("n1", ("-", i))] = -QUARTER
    return datum._vector(values)


def rho_pi_up(datum: IncreasingDatum) -> CoordVector:
    values = {}
    for j in datum.unmatched_two():
        values[("n", ("2p", j))] = QUARTER
    for i in range(len(datum.one)):
        values[("n", ("1", i))] = -QUARTER
    for i in datum.unmatched_one():
        values[("n1", ("1p", i))] = QUARTER
    for j in range(len(datum.two)):
        values[("n1", ("2", j))] = -QUARTER
    return datum._vector(values)


def _add(u: Sequence[Fraction], v: Sequence[Fraction]) -> CoordVector:
    return tuple(a + b for a, b in zip(u, v))


def _neg(u: Sequence[Fraction]) -> CoordVector:
    return tuple(-a for a in u)


def _label_permutation(source: Sequence[Label], target: Sequence[Label], mapping) -> Tuple[int, ...]:
    position = {label: k for k, label in enumerate(target)}
    perm = tuple(position[mapping(label)] for label in source)
    if sorted(perm) != list(range(len(target))):
        raise ValidationError("label transport is not a bijection")
    return perm


def _transport(source, target, map_n, map_n1) -> WeylBlockElement:
    src_n, src_n1 = source.labels()
    tgt_n, tgt_n1 = target.labels()
    return WeylBlockElement((_label_permutation(src_n, tgt_n, map_n),
                             _label_permutation(src_n1, tgt_n1, map_n1)))


@dataclass(frozen=True)
class DownwardTransform:
    w_down: WeylBlockElement
    d_down: RelevantDatum

    def source_subspace(self, datum: IncreasingDatum) -> AffineSubspace:
        """a_pi* - rho_pi - rho_pi^up moved by w_down."""
        shift = _neg(_add(rho_pi(datum), rho_pi_up(datum)))
        return a_pi_subspace(datum).translate(shift).permuted(self.w_down.flat())

    def target_subspace(self) -> AffineSubspace:
        return a_pi_subspace(self.d_down).translate(_neg(rho_pi(self.d_down)))


def downward_transform(datum: IncreasingDatum) -> DownwardTransform:
    """(w_down, pi_down) sending the increasing datum to a relevant one."""
    free1, free2 = datum.unmatched_one(), datum.unmatched_two()
    d_down = RelevantDatum(
        datum.plus,
        tuple(datum.one[i] for i in free1) + datum.c1,
        tuple(datum.two[j] for j in free2) + datum.c2,
        tuple(datum.one[i] for i in datum.I1) + datum.minus,
    )
    m = len(datum.I1)

    def map_n(label: Label) -> Label:
        zone, i = label
        if zone == "2p":
            return ("2p", free2.index(i))
        if zone == "1":
            return ("1", free1.index(i)) if i in free1 else ("-", datum.I1.index(i))
        if zone == "c1":
            return ("1", len(free1) + i)
        if zone == "-":
            return ("-", m + i)
        return label

    def map_n1(label: Label) -> Label:
        zone, i = label
        if zone == "1p":
            return ("1p", free1.index(i))
        if zone == "2":
            return ("2", free2.index(i)) if i in free2 else ("-", datum.I2.index(i))
        if zone == "c2":
            return ("2", len(free2) + i)
        if zone == "-":
            return ("-", m + i)
        return label

    return DownwardTransform(_transport(datum, d_down, map_n, map_n1), d_down)


@dataclass(frozen=True)
class EmptyTransform:
    w_empty: WeylBlockElement
    d_empty: IncreasingDatum


def empty_transform(datum: IncreasingDatum) -> EmptyTransform:
    """Move the matched pairs into the - zone, leaving I1 = I2 = empty."""
    free1, free2 = datum.unmatched_one(), datum.unmatched_two()
    d_empty = IncreasingDatum(
        datum.plus,
        tuple(datum.one[i] for i in free1),
        datum.c1,
        tuple(datum.two[j] for j in free2),
        datum.c2,
        tuple(datum.one[i] for i in datum.I1) + datum.minus,
    )
    m = len(datum.I1)

    def map_n(label: Label) -> Label:
        zone, i = label
        if zone == "2p":
            return ("2p", free2.index(i))
        if zone == "1":
            return ("1", free1.index(i)) if i in free1 else ("-", datum.I1.index(i))
        if zone == "-":
            return ("-", m + i)
        return label

    def map_n1(label: Label) -> Label:
        zone, i = label
        if zone == "1p":
            return ("1p", free1.index(i))
        if zone == "2":
            return ("2", free2.index(i)) if i in free2 else ("-", datum.I2.index(i))
        if zone == "-":
            return ("-", m + i)
        return label

    return EmptyTransform(_transport(datum, d_empty, map_n, map_n1), d_empty)


@dataclass(frozen=True)
class FineBlock:
    group: str
    size: int


@dataclass(frozen=True)
class IncreasingConstruction:
    coarse: Tuple[Composition, Composition]
    fine: Tuple[Composition, Composition]
    w: Tuple[Tuple[int, ...], Tuple[int, ...]]
    rs: RSParabolic

    def verify(self) -> bool:
        """w is a minimal (RS, coarse) coset representative and P_w is the fine parabolic."""
        standard = (self.rs.p_n, self.rs.p_n1_std)
        for side in range(2):
            if not is_min_coset_rep(self.w[side], self.coarse[side], standard[side]):
                return False
            if compute_Pw(self.w[side], self.coarse[side], standard[side]) != self.fine[side]:
                return False
        return True


def _shuffle(blocks: Sequence[FineBlock], order: Sequence[str]) -> Tuple[int, ...]:
    """Coordinate permutation sending fine blocks to their place in ``order``."""
    rank = {g: k for k, g in enumerate(order)}
    live = [b for b in blocks if b.size]
    target = sorted(range(len(live)), key=lambda k: (rank[live[k].group], k))
    start, acc = {}, 0
    for k in target:
        start[k] = acc
        acc += live[k].size
    w = []
    for k, b in enumerate(live):
        w.extend(start[k] + t for t in range(b.size))
    return tuple(w)


def _group_totals(blocks: Sequence[FineBlock], groups: Sequence[Sequence[str]]) -> Tuple[int, ...]:
    return tuple(sum(b.size for b in blocks if b.group in g) for g in groups)


def _build_construction(coarse, fine_n, fine_n1, order_n, order_n1, std_groups_n1, rs_group) -> IncreasingConstruction:
    totals = _group_totals(fine_n1, std_groups_n1)
    marked = std_groups_n1.index(rs_group)
    kept = [(t, k == marked) for k, t in enumerate(totals) if t or k == marked]
    parts = tuple(t for t, _ in kept)
    i0 = next(k for k, (_, mark) in enumerate(kept) if mark) + 1
    rs = rs_from_pair(Composition(parts), i0)
    fine = (Composition(tuple(b.size for b in fine_n if b.size)),
            Composition(tuple(b.size for b in fine_n1 if b.size)))
    return IncreasingConstruction(coarse, fine, (_shuffle(fine_n, order_n), _shuffle(fine_n1, order_n1)), rs)


def increasing_construction(datum) -> IncreasingConstruction:
    """P_{pi,+}, w_+ and P_+ for a relevant datum; P_pi^up, w^up and P^up for an increasing one."""
    coarse = tuple(c.nonzero() for c in datum.P)
    if isinstance(datum, RelevantDatum):
        fine_n = ([FineBlock("+", b.size) for b in datum.plus]
                  + [x for b in datum.one for x in (FineBlock("1m", b.size - b.sigma.rank), FineBlock("1r", b.sigma.rank))]
                  + [FineBlock("2p", b.size - b.sigma.rank) for b in datum.two]
                  + [FineBlock("-", b.size) for b in datum.minus])
        fine_n1 = ([FineBlock("+", b.size) for b in datum.plus]
                   + [FineBlock("1p", b.size - b.sigma.rank) for b in datum.one]
                   + [x for b in datum.two for x in (FineBlock("2m", b.size - b.sigma.rank), FineBlock("2r", b.sigma.rank))]
                   + [FineBlock("-", b.size) for b in datum.minus])
        return _build_construction(coarse, fine_n, fine_n1,
                                   ["+", "1m", "2p", "1r", "-"], ["+", "1p", "2m", "2r", "-"],
                                   [["+"], ["1p"], ["2m"], ["2r"], ["-"]], ["2r"])
    free1, free2 = datum.unmatched_one(), datum.unmatched_two()
    fine_n = ([FineBlock("+", b.size) for b in datum.plus]
              + [FineBlock("2p", datum.two[j].size - datum.two[j].sigma.rank) for j in free2]
              + [x for i, b in enumerate(datum.one)
                 for x in (FineBlock("1m" if i in free1 else "1mI", b.size - b.sigma.rank),
                           FineBlock("1r", b.sigma.rank))]
              + [FineBlock("c1", b.size) for b in datum.c1]
              + [FineBlock("-", b.size) for b in datum.minus])
    fine_n1 = ([FineBlock("+", b.size) for b in datum.plus]
               + [FineBlock("1p", datum.one[i].size - datum.one[i].sigma.rank) for i in free1]
               + [x for j, b in enumerate(datum.two)
                  for x in (FineBlock("2m" if j in free2 else "2mI", b.size - b.sigma.rank),
                            FineBlock("2r", b.sigma.rank))]
               + [FineBlock("c2", b.size) for b in datum.c2]
               + [FineBlock("-", b.size) for b in datum.minus])
    return _build_construction(coarse, fine_n, fine_n1,
                               ["+", "2p", "1m", "1mI", "1r", "c1", "-"],
                               ["+", "2m", "1p", "2mI", "2r", "c2", "-"],
                               [["+"], ["2m"], ["1p"], ["2mI"], ["2r", "c2"], ["-"]], ["2r", "c2"])


@dataclass(frozen=True)
class ResidueDatum:
    Q: RSParabolic
    w: WeylBlockElement
    sign: int
    linear_forms: Tuple[AffineForm, ...]
    datum: RelevantDatum


def residue_datum(pi: DiscreteRep, plus: Sequence[Tuple[int, int]] = (),
                  minus: Sequence[Tuple[int, int]] = ()) -> ResidueDatum:
    """Residue bookkeeping for a cuspidal datum and matchings (i, j), 0-based.

    ``plus[l] = (i, j)`` records a residue along lambda_{n,i} + lambda_{n+1,j} + 1/2
    and ``minus[l]`` one along lambda_{n,i} + lambda_{n+1,j} - 1/2.

    Raises:
        ValidationError: If pi is not cuspidal or the matchings break the index constraints
    """
    side_n, side_n1 = pi.nonzero_sides()
    if not pi.is_cuspidal():
        raise ValidationError("residue data need a cuspidal datum")
    used_i = [i for i, _ in list(plus) + list(minus)]
    used_j = [j for _, j in list(plus) + list(minus)]
    if len(set(used_i)) != len(used_i) or len(set(used_j)) != len(used_j):
        raise ValidationError("matched indices must be distinct")
    for i, j in list(plus) + list(minus):
        if not (0 <= i < len(side_n) and 0 <= j < len(side_n1)):
            raise ValidationError("matched index out of range", f"({i}, {j})")
        if side_n[i].sigma != side_n1[j].sigma.dual:
            raise ValidationError("matched blocks are not dual", f"({i}, {j})")
    m_plus, m_minus = len(plus), len(minus)
    dim = len(side_n) + len(side_n1)
    forms = []
    for i, j in plus:
        forms.append(AffineForm.combination(dim, [(i, 1), (len(side_n) + j, 1)], Fraction(1, 2)))
    for i, j in minus:
        forms.append(AffineForm.combination(dim, [(i, 1), (len(side_n) + j, 1)], Fraction(-1, 2)))

    def side_perm(count: int, first: Sequence[int], last: Sequence[int]) -> Tuple[int, ...]:
        perm = [None] * count
        for l, k in enumerate(first):
            perm[k] = l
        for l, k in enumerate(last):
            perm[k] = count - l - 1
        middle = iter(range(len(first), count - len(last)))
        for k in range(count):
            if perm[k] is None:
                perm[k] = next(middle)
        return tuple(perm)

    w = WeylBlockElement((side_perm(len(side_n), [i for i, _ in plus], [i for i, _ in minus]),
                          side_perm(len(side_n1), [j for _, j in plus], [j for _, j in minus])))
    n_plus = [side_n[i].size for i, _ in plus]
    n_minus = [side_n[i].size for i, _ in minus]
    middle = pi.sizes[1] - sum(n_plus) - sum(n_minus)
    Q = rs_from_pair(Composition(tuple(n_plus) + (middle,) + tuple(reversed(n_minus))), m_plus + 1)
    matched_i = set(used_i)
    matched_j = set(used_j)
    datum = RelevantDatum(
        tuple(side_n[i] for i, _ in plus),
        tuple(b for k, b in enumerate(side_n) if k not in matched_i),
        tuple(b for k, b in enumerate(side_n1) if k not in matched_j),
        tuple(side_n[i] for i, _ in reversed(list(minus))),
    )
    logger.debug("residue datum with m+=%d, m-=%d: %s", m_plus, m_minus, datum.describe())
    return ResidueDatum(Q, w, (-1) ** m_plus, tuple(forms), datum)
