"""
Singularity divisors as products of affine linear forms.

A DivisorPoly is a finite product of normalized affine forms with integer
exponents; it records a divisor, so nonzero scalar factors are dropped.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import Unsupported, ValidationError
from .exactlin import AffineForm, AffineSubspace, CoordVector, WeylBlockElement, solve_affine
from .relevant import IncreasingDatum, RelevantDatum, a_pi_subspace, rho_pi, rho_pi_up
from .spectra import DiscreteRep, Segment, SpehBlock, block_nu

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class DivisorPoly:
    """Product of affine forms with integer exponents."""

    def __init__(self, factors: Optional[Mapping[AffineForm, int]] = None, chart: Sequence[str] = ()):
        """
        Build a divisor from raw factors.

        Args:
            factors: Forms with exponents; forms are normalized and merged
            chart: Coordinate names used when printing

        Raises:
            ValueError: If a factor is the zero form
        """
        self.chart = tuple(chart)
        self._factors: Dict[AffineForm, int] = {}
        for form, exp in (factors or {}).items():
            self._accumulate(form, exp)

    def _accumulate(self, form: AffineForm, exp: int) -> None:
        if not exp:
            return
        if form.is_constant:
            if not form.constant:
                raise ValueError("the zero form is not a divisor factor")
            return
        key = form.normalized()
        total = self._factors.get(key, 0) + exp
        if total:
            self._factors[key] = total
        else:
            self._factors.pop(key, None)

    @classmethod
    def one(cls, chart: Sequence[str] = ()) -> "DivisorPoly":
        return cls({}, chart)

    @classmethod
    def from_forms(cls, forms: Iterable[AffineForm], chart: Sequence[str] = ()) -> "DivisorPoly":
        out = cls({}, chart)
        for form in forms:
            out._accumulate(form, 1)
        return out

    def items(self) -> List[Tuple[AffineForm, int]]:
        return sorted(self._factors.items(), key=lambda item: item[0].sort_key())

    def __iter__(self) -> Iterator[Tuple[AffineForm, int]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._factors)

    def exponent(self, form: AffineForm) -> int:
        return 0 if form.is_constant else self._factors.get(form.normalized(), 0)

    @property
    def is_one(self) -> bool:
        return not self._factors

    @property
    def degree(self) -> int:
        return sum(self._factors.values())

    def __mul__(self, other: "DivisorPoly") -> "DivisorPoly":
        out = DivisorPoly(self._factors, self.chart or other.chart)
        for form, exp in other._factors.items():
            out._accumulate(form, exp)
        return out

    def __truediv__(self, other: "DivisorPoly") -> "DivisorPoly":
        return self * other.inverse()

    def __pow__(self, k: int) -> "DivisorPoly":
        return DivisorPoly({f: e * k for f, e in self._factors.items()}, self.chart)

    def inverse(self) -> "DivisorPoly":
        return self ** -1

    def __eq__(self, other) -> bool:
        if not isinstance(other, DivisorPoly):
            return NotImplemented
        return self._factors == other._factors

    def __hash__(self) -> int:
        return hash(frozenset(self._factors.items()))

    def divides(self, other: "DivisorPoly") -> bool:
        """True when other / self has no negative exponent."""
        return all(e >= 0 for _, e in (other / self))

    def restrict(self, subspace: AffineSubspace) -> "DivisorPoly":
        """Pull every factor back to the parameters of ``subspace``.

        Raises:
            ValueError: If a factor vanishes identically on the subspace
        """
        out = DivisorPoly({}, ())
        for form, exp in self._factors.items():
            out._accumulate(form.restrict(subspace), exp)
        return out

    def evaluate(self, point: Sequence) -> Fraction:
        value = Fraction(1)
        for form, exp in self._factors.items():
            value *= form.evaluate(point) ** exp
        return value

    def pretty(self) -> str:
        if self.is_one:
            return "1"
        parts = []
        for form, exp in self.items():
            text = f"({form.pretty(self.chart)})"
            parts.append(text if exp == 1 else f"{text}^{exp}")
        return " * ".join(parts)

    def __repr__(self) -> str:
        return f"DivisorPoly({self.pretty()})"


def linked(s: Segment, t: Segment) -> bool:
    """Neither segment contains the other and their union is a segment."""
    a, b = s.as_set(), t.as_set()
    if a <= b or b <= a:
        return False
    union = sorted(a | b)
    return all(y - x == 1 for x, y in zip(union, union[1:]))


def linking_shifts(d_i: int, d_j: int) -> List[Fraction]:
    """Every t with Segment(t, d_i) and Segment(0, d_j) linked, in increasing order."""
    bound = Fraction(d_i + d_j, 2)
    base = Fraction(d_i - d_j, 2)
    k = -(d_i + d_j) - 1
    out = []
    while base + k <= bound:
        t = base + k
        if abs(t) <= bound and linked(Segment(t, d_i), Segment(0, d_j)):
            out.append(t)
        k += 1
    return out


def linking_locus(b_i: SpehBlock, b_j: SpehBlock, i: int = 0, j: int = 1, dim: int = 2,
                  chart: Sequence[str] = ()) -> DivisorPoly:
    """Product of (lambda_i - lambda_j - t) over the linking shifts t."""
    forms = [AffineForm.combination(dim, [(i, 1), (j, -1)], -t) for t in linking_shifts(b_i.d, b_j.d)]
    return DivisorPoly.from_forms(forms, chart)


def _sides(pi) -> Tuple[Tuple[SpehBlock, ...], ...]:
    if isinstance(pi, DiscreteRep):
        return tuple(side for side in pi.nonzero_sides())
    return (tuple(b for b in pi if not b.degenerate),)


def _block_chart(sides) -> Tuple[str, ...]:
    names = ("ln", "ln1")
    return tuple(f"{names[s] if len(sides) > 1 else 'l'}{k + 1}"
                 for s, side in enumerate(sides) for k in range(len(side)))


def _side_pairs(sides):
    """(global i, global j, block_i, block_j) for i < j on the same side."""
    offset = 0
    for side in sides:
        for a in range(len(side)):
            for b in range(a + 1, len(side)):
                yield offset + a, offset + b, side[a], side[b]
        offset += len(side)


def L_pi_E(pi) -> DivisorPoly:
    """Linking divisor of the Eisenstein series, side by side."""
    sides = _sides(pi)
    dim = sum(len(s) for s in sides)
    chart = _block_chart(sides)
    out = DivisorPoly.one(chart)
    for i, j, b_i, b_j in _side_pairs(sides):
        if b_i.sigma == b_j.sigma:
            out = out * linking_locus(b_i, b_j, i, j, dim, chart)
    return out


def L_pi_0(pi) -> DivisorPoly:
    sides = _sides(pi)
    dim = sum(len(s) for s in sides)
    chart = _block_chart(sides)
    forms = [AffineForm.combination(dim, [(i, 1), (j, -1)])
             for i, j, b_i, b_j in _side_pairs(sides) if b_i.iso(b_j)]
    return DivisorPoly.from_forms(forms, chart)


def L_pi_res(pi) -> DivisorPoly:
    """Product of (lambda_k - lambda_{k+1} - 1) inside each block, on the cuspidal-support chart."""
    sides = _sides(pi)
    dim = sum(b.d for side in sides for b in side)
    forms, offset = [], 0
    for side in sides:
        for b in side:
            forms.extend(AffineForm.combination(dim, [(offset + k, 1), (offset + k + 1, -1)], -1)
                         for k in range(b.d - 1))
            offset += b.d
    return DivisorPoly.from_forms(forms, tuple(f"mu{k + 1}" for k in range(dim)))


def L_pi_Z(pi: DiscreteRep) -> DivisorPoly:
    """Dual pairs across the sides give (x_i + y_j +- 1/2); isomorphic pairs within a side divide.

    Raises:
        ValidationError: If pi is not cuspidal
    """
    if not pi.is_cuspidal():
        raise ValidationError("L_pi_Z needs a cuspidal datum")
    side_n, side_n1 = pi.nonzero_sides()
    dim = len(side_n) + len(side_n1)
    chart = _block_chart((side_n, side_n1))
    out = DivisorPoly.one(chart)
    for i, a in enumerate(side_n):
        for j, b in enumerate(side_n1):
            if a.sigma == b.sigma.dual:
                for c in (HALF, -HALF):
                    out._accumulate(AffineForm.combination(dim, [(i, 1), (len(side_n) + j, 1)], c), 1)
    for i, j, b_i, b_j in _side_pairs((side_n, side_n1)):
        if b_i.iso(b_j):
            out._accumulate(AffineForm.combination(dim, [(i, 1), (j, -1)]), -1)
    return out


def _datum_form(datum, terms: Sequence[Tuple[str, Tuple[str, int], int]], constant=0) -> AffineForm:
    index = datum.coordinate_index()
    return AffineForm.combination(datum.ambient_dim, [(index[(side, label)], c) for side, label, c in terms],
                                  constant)


def _lam1(i: int):
    return ("n", ("1", i), 1)


def _lam2(j: int):
    return ("n1", ("2", j), 1)


def _pole_formula(datum, free1: Sequence[int], free2: Sequence[int]) -> DivisorPoly:
    forms = []
    one, two = datum.one, datum.two
    for a in range(len(one)):
        for b in range(a + 1, len(one)):
            if one[a].iso(one[b]):
                forms.append(_datum_form(datum, [_lam1(a), ("n", ("1", b), -1)]))
    for a in range(len(two)):
        for b in range(a + 1, len(two)):
            if two[a].iso(two[b]):
                forms.append(_datum_form(datum, [_lam2(a), ("n1", ("2", b), -1)]))
    for i in free1:
        for j in free2:
            if two[j].d != 2 and one[i].iso(two[j].derivative().dual()):
                forms.append(_datum_form(datum, [_lam1(i), _lam2(j)]))
            if one[i].d != 2 and one[i].derivative().dual().iso(two[j]):
                forms.append(_datum_form(datum, [_lam1(i), _lam2(j)]))
    return DivisorPoly.from_forms(forms, datum.chart())


def L_pi_w(pi, w: Optional[WeylBlockElement] = None) -> DivisorPoly:
    """L_{pi,w} for cuspidal pi and any w, or for a datum with its canonical increasing element.

    Raises:
        Unsupported: For discrete non-cuspidal pi with an explicit w
    """
    if isinstance(pi, RelevantDatum):
        return _pole_formula(pi, range(len(pi.one)), range(len(pi.two)))
    if isinstance(pi, IncreasingDatum):
        return L_pi_w_up(pi)
    sides = _sides(pi)
    if w is None or not all(b.cuspidal for side in sides for b in side):
        raise Unsupported("L_pi_w is explicit only for cuspidal pi or canonical increasing elements")
    sides = sides[:len(w.perms)]
    if tuple(len(s) for s in sides) != w.sizes:
        raise ValidationError("Weyl element does not match the block counts")
    dim = sum(len(s) for s in sides)
    forms, offset = [], 0
    for side, perm in zip(sides, w.perms):
        for a in range(len(side)):
            for b in range(a + 1, len(side)):
                if perm[a] > perm[b] and side[a].iso(side[b]):
                    forms.append(AffineForm.combination(dim, [(offset + a, 1), (offset + b, -1)], -1))
        offset += len(side)
    return DivisorPoly.from_forms(forms, _block_chart(sides))


def L_pi_w_up(datum: IncreasingDatum) -> DivisorPoly:
    return _pole_formula(datum, datum.unmatched_one(), datum.unmatched_two())


def L_pi_P(datum: RelevantDatum) -> DivisorPoly:
    forms = []
    for i, a in enumerate(datum.one):
        for j, b in enumerate(datum.two):
            if a.iso(b.derivative().dual()):
                forms.append(_datum_form(datum, [_lam1(i), _lam2(j)]))
            if a.derivative().dual().iso(b):
                forms.append(_datum_form(datum, [_lam1(i), _lam2(j)]))
    return DivisorPoly.from_forms(forms, datum.chart())


def L_pi_P_up(datum: IncreasingDatum) -> DivisorPoly:
    forms = []
    for i, a in enumerate(datum.c1):
        for j, b in enumerate(datum.c2):
            if a.iso(b.dual()):
                forms.extend(_datum_form(datum, [("n", ("c1", i), 1), ("n1", ("c2", j), 1)], c)
                             for c in (HALF, -HALF))
        for j, b in enumerate(datum.two):
            if a.sigma == b.sigma.dual:
                forms.extend(_datum_form(datum, [("n", ("c1", i), 1), _lam2(j)], Fraction(b.d - 1 + e, 2))
                             for e in (1, -1))
    for j, b in enumerate(datum.c2):
        for i, a in enumerate(datum.one):
            if a.sigma.dual == b.sigma:
                forms.extend(_datum_form(datum, [_lam1(i), ("n1", ("c2", j), 1)], Fraction(a.d - 1 + e, 2))
                             for e in (1, -1))
    for i in datum.unmatched_one():
        for j in datum.unmatched_two():
            a, b = datum.one[i], datum.two[j]
            if a.iso(b.derivative().dual()):
                forms.append(_datum_form(datum, [_lam1(i), _lam2(j)]))
            if a.derivative().dual().iso(b):
                forms.append(_datum_form(datum, [_lam1(i), _lam2(j)]))
    return DivisorPoly.from_forms(forms, datum.chart())


@dataclass(frozen=True)
class SupportChart:
    """Cuspidal-support coordinates of a datum: each nonzero block owns d consecutive slots."""

    slots: Dict[Tuple[str, Tuple[str, int]], Tuple[int, int]]
    dim: int
    names: Tuple[str, ...]

    def coord(self, side: str, label: Tuple[str, int], k: int) -> int:
        """Index of the k-th (1-based) slot of a block."""
        start, d = self.slots[(side, label)]
        if not 1 <= k <= d:
            raise IndexError(f"slot {k} outside a block of length {d}")
        return start + k - 1


def support_chart(datum) -> SupportChart:
    slots, names, offset = {}, [], 0
    side_n, side_n1 = datum.nonzero_labelled()
    for side, letter, blocks in (("n", "x", side_n), ("n1", "y", side_n1)):
        for label, b in blocks:
            slots[(side, label)] = (offset, b.d)
            names.extend(f"{letter}[{label[0]}{label[1] + 1}.{k + 1}]" for k in range(b.d))
            offset += b.d
    return SupportChart(slots, offset, tuple(names))


@dataclass(frozen=True)
class ResidueFamilies:
    primary: Tuple[AffineForm, ...]
    secondary: Tuple[AffineForm, ...]
    inner: Tuple[AffineForm, ...]
    target: AffineSubspace
    solved: AffineSubspace
    chart: SupportChart

    @property
    def matches_target(self) -> bool:
        return self.solved == self.target


def _pair_form(chart: SupportChart, n_label, n1_label, k: int, l: int, constant: Fraction, sign: int = 1) -> AffineForm:
    form = AffineForm.combination(chart.dim, [(chart.coord("n", n_label, k), 1),
                                              (chart.coord("n1", n1_label, l), 1)], constant)
    return form if sign > 0 else -form


def _outer_zone_pairs(datum) -> List[Tuple[str, Tuple[str, int], Tuple[str, int], int]]:
    """(kind, side n label, side n+1 label, d) for the outer and matched pairs."""
    pairs = [("+", ("+", i), ("+", i), b.d) for i, b in enumerate(datum.plus)]
    pairs += [("-", ("-", i), ("-", i), b.d) for i, b in enumerate(datum.minus)]
    if isinstance(datum, IncreasingDatum):
        pairs += [("-", ("1", i), ("2", j), datum.one[i].d) for i, j in zip(datum.I1, datum.I2)]
    return pairs


def _inner_zone_pairs(datum):
    """(kind, side n label, side n+1 label, d) for 1/2 zone blocks with d >= 2."""
    free1 = datum.unmatched_one() if isinstance(datum, IncreasingDatum) else range(len(datum.one))
    free2 = datum.unmatched_two() if isinstance(datum, IncreasingDatum) else range(len(datum.two))
    pairs = [("1", ("1", i), ("1p", i), datum.one[i].d) for i in free1 if datum.one[i].d >= 2]
    pairs += [("2", ("2p", j), ("2", j), datum.two[j].d) for j in free2 if datum.two[j].d >= 2]
    return pairs


def _target(datum, chart: SupportChart) -> AffineSubspace:
    shift = rho_pi(datum)
    if isinstance(datum, IncreasingDatum):
        shift = tuple(a + b for a, b in zip(shift, rho_pi_up(datum)))
    index = datum.coordinate_index()
    offset = [Fraction(0)] * chart.dim
    embed_rows = []
    for key, (start, d) in chart.slots.items():
        for k, nu in enumerate(_block_nu_for(datum, key)):
            offset[start + k] = -nu - shift[index[key]]
    gens = a_pi_subspace(datum).generators()
    for g in gens:
        row = [Fraction(0)] * chart.dim
        for key, (start, d) in chart.slots.items():
            for k in range(d):
                row[start + k] = g[index[key]]
        embed_rows.append(row)
    return AffineSubspace.span(offset, embed_rows, chart.names)


def _block_nu_for(datum, key) -> CoordVector:
    side, label = key
    side_n, side_n1 = datum.nonzero_labelled()
    blocks = dict(side_n if side == "n" else side_n1)
    return block_nu(blocks[label])


def residue_form_families(datum) -> ResidueFamilies:
    """Affine forms whose common zeros cut a_pi* - nu_pi - rho out of the cuspidal-support space."""
    chart = support_chart(datum)
    primary, secondary, inner = [], [], []
    for kind, ln, ln1, d in _outer_zone_pairs(datum):
        if kind == "+":
            primary += [_pair_form(chart, ln, ln1, j, d - j + 1, HALF, -1) for j in range(1, d + 1)]
            secondary += [_pair_form(chart, ln, ln1, j, d - j, -HALF) for j in range(1, d)]
        else:
            primary += [_pair_form(chart, ln, ln1, j, d - j + 1, -HALF) for j in range(1, d + 1)]
            secondary += [_pair_form(chart, ln, ln1, j, d - j + 2, HALF, -1) for j in range(2, d + 1)]
    for kind, ln, ln1, d in _inner_zone_pairs(datum):
        if kind == "1":
            inner += [_pair_form(chart, ln, ln1, d - j + 1, j, HALF, -1) for j in range(1, d)]
            inner += [_pair_form(chart, ln, ln1, d - j, j, -HALF) for j in range(1, d)]
        else:
            inner += [_pair_form(chart, ln, ln1, j, d - j + 1, HALF, -1) for j in range(1, d)]
            inner += [_pair_form(chart, ln, ln1, j, d - j, -HALF) for j in range(1, d)]
    target = _target(datum, chart)
    solved = solve_affine(primary + secondary + inner, chart.dim, chart.names)
    logger.debug("residue families: %d primary, %d secondary, %d inner forms in dim %d",
                 len(primary), len(secondary), len(inner), chart.dim)
    return ResidueFamilies(tuple(primary), tuple(secondary), tuple(inner), target, solved, chart)


def alternative_families(datum) -> Tuple[AffineForm, ...]:
    """Differences of consecutive slots on side n, one per secondary form, in the same order."""
    chart = support_chart(datum)
    out = []
    for kind, ln, _, d in _outer_zone_pairs(datum):
        if kind == "+":
            out += [AffineForm.combination(chart.dim, [(chart.coord("n", ln, j), 1),
                                                       (chart.coord("n", ln, j + 1), -1)], -1)
                    for j in range(1, d)]
        else:
            out += [AffineForm.combination(chart.dim, [(chart.coord("n", ln, j - 1), 1),
                                                       (chart.coord("n", ln, j), -1)], -1)
                    for j in range(2, d + 1)]
    return tuple(out)


def secondary_agrees_with_alternative(datum) -> bool:
    """Secondary forms and their alternatives coincide on the zero set of the primary family."""
    families = residue_form_families(datum)
    alternative = alternative_families(datum)
    base = solve_affine(list(families.primary), families.chart.dim)
    if base.empty:
        return False
    return all(a.restrict(base) == b.restrict(base) for a, b in zip(families.secondary, alternative))
