"""
Exact rational linear algebra for block parabolics of GL(k).

Provides compositions, block Weyl elements, rho vectors, the standard
intersection parabolic P_w, and affine forms/subspaces in reduced
row-echelon form.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import sympy

from .errors import CompositionMismatch, DegenerateBlock, NotStandard, RefinementError

logger = logging.getLogger(__name__)

Rat = Fraction
CoordVector = Tuple[Fraction, ...]


def as_rat(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce an int, "p/q" string or Fraction into a reduced Fraction."""
    return value if isinstance(value, Fraction) else Fraction(value)


def vector(values: Iterable[Union[int, str, Fraction]]) -> CoordVector:
    return tuple(as_rat(v) for v in values)


@dataclass(frozen=True)
class Composition:
    """Ordered block sizes of a standard parabolic; zero blocks are kept."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative block size in {parts}")
        object.__setattr__(self, "parts", parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, index: int) -> int:
        return self.parts[index]

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def degenerate(self) -> bool:
        return any(p == 0 for p in self.parts)

    def nonzero(self) -> "Composition":
        return Composition(tuple(p for p in self.parts if p))

    def intervals(self) -> List[Tuple[int, int]]:
        """Half-open 0-based coordinate ranges of the blocks."""
        out, start = [], 0
        for p in self.parts:
            out.append((start, start + p))
            start += p
        return out

    def cuts(self) -> frozenset:
        """Partial sums strictly between 0 and the total."""
        acc, cuts = 0, set()
        for p in self.parts[:-1]:
            acc += p
            if 0 < acc < self.total:
                cuts.add(acc)
        return frozenset(cuts)

    def refines(self, other: "Composition") -> bool:
        """True when every block of ``other`` is a union of consecutive blocks of self."""
        return self.total == other.total and other.cuts() <= self.cuts()

    def block_of(self, coordinate: int) -> int:
        """Index of the block holding a 0-based coordinate."""
        for index, (start, stop) in enumerate(self.intervals()):
            if start <= coordinate < stop:
                return index
        raise IndexError(f"coordinate {coordinate} outside {self}")


def enumerate_compositions(n: int) -> List[Composition]:
    """All compositions of n with positive parts, fewest blocks first.

    Within a block count the order is descending lexicographic, so 3 gives
    (3), (2,1), (1,2), (1,1,1).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return [Composition(())]
    found = []
    for mask in product((False, True), repeat=n - 1):
        parts, run = [], 1
        for cut in mask:
            if cut:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        found.append(tuple(parts))
    found.sort(key=lambda parts: (len(parts), tuple(-p for p in parts)))
    return [Composition(parts) for parts in found]


def rho_of_parabolic(c: Composition) -> CoordVector:
    """Half-sum of positive roots of P in block coordinates."""
    if c.degenerate:
        raise DegenerateBlock(f"rho is undefined for degenerate composition {c}")
    out = []
    for i in range(len(c)):
        after = sum(c.parts[i + 1:])
        before = sum(c.parts[:i])
        out.append(Fraction(after - before, 2))
    return tuple(out)


def pair_with_coroot(lam: Sequence[Fraction], i: int, j: int) -> Fraction:
    """<lam, alpha_{i,j}^vee> = lam_i - lam_j with 1-based indices."""
    if i == j:
        raise ValueError("coroot indices must differ")
    for index in (i, j):
        if not 1 <= index <= len(lam):
            raise IndexError(f"index {index} out of range for length {len(lam)}")
    return as_rat(lam[i - 1]) - as_rat(lam[j - 1])


def permute_sequence(perm: Sequence[int], values: Sequence):
    """Move entry i to position perm[i]."""
    if sorted(perm) != list(range(len(values))):
        raise CompositionMismatch(f"permutation of length {len(perm)} cannot act on {len(values)} entries")
    out = [None] * len(values)
    for i, value in enumerate(values):
        out[perm[i]] = value
    return tuple(out)


def count_inversions(perm: Sequence[int]) -> int:
    return sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])


@dataclass(frozen=True)
class WeylBlockElement:
    """Block permutations, one per GL factor, in 0-based one-line form.

    ``perms[f][i]`` is the position that block i of factor f is moved to.
    """

    perms: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        perms = tuple(tuple(int(x) for x in p) for p in self.perms)
        for p in perms:
            if sorted(p) != list(range(len(p))):
                raise ValueError(f"{p} is not a permutation")
        object.__setattr__(self, "perms", perms)

    @classmethod
    def identity(cls, *sizes: int) -> "WeylBlockElement":
        return cls(tuple(tuple(range(k)) for k in sizes))

    @classmethod
    def from_cycle(cls, k: int, cycle: Sequence[int]) -> "WeylBlockElement":
        """Single-factor element from 1-based cycle notation (a1 a2 ... ar)."""
        perm = list(range(k))
        for pos, a in enumerate(cycle):
            perm[a - 1] = cycle[(pos + 1) % len(cycle)] - 1
        return cls((tuple(perm),))

    @classmethod
    def from_one_line(cls, *one_line: Sequence[int]) -> "WeylBlockElement":
        """Build from 1-based one-line notation per factor."""
        return cls(tuple(tuple(x - 1 for x in p) for p in one_line))

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(p) for p in self.perms)

    def compose(self, other: "WeylBlockElement") -> "WeylBlockElement":
        """self o other: act by ``other`` first."""
        if self.sizes != other.sizes:
            raise CompositionMismatch("factor sizes differ")
        return WeylBlockElement(tuple(tuple(p[q[i]] for i in range(len(q)))
                                      for p, q in zip(self.perms, other.perms)))

    __mul__ = compose

    def inverse(self) -> "WeylBlockElement":
        out = []
        for p in self.perms:
            inv = [0] * len(p)
            for i, image in enumerate(p):
                inv[image] = i
            out.append(tuple(inv))
        return WeylBlockElement(tuple(out))

    def inversions(self) -> List[List[Tuple[int, int]]]:
        return [[(a, b) for a in range(len(p)) for b in range(a + 1, len(p)) if p[a] > p[b]]
                for p in self.perms]

    def length(self) -> int:
        return sum(count_inversions(p) for p in self.perms)

    def is_identity(self) -> bool:
        return all(p == tuple(range(len(p))) for p in self.perms)

    def flat(self) -> Tuple[int, ...]:
        """The factors glued into one permutation of the concatenated coordinates."""
        out, offset = [], 0
        for p in self.perms:
            out.extend(offset + x for x in p)
            offset += len(p)
        return tuple(out)

    def one_line(self) -> List[List[int]]:
        """1-based one-line notation per factor."""
        return [[x + 1 for x in p] for p in self.perms]


def _act_single(perm: Sequence[int], x):
    if isinstance(x, Composition):
        return Composition(permute_sequence(perm, x.parts))
    return permute_sequence(perm, tuple(x))


def act_weyl(w: WeylBlockElement, x):
    """Permute a composition, coordinate vector or representation by w.

    Objects that know how to be permuted expose ``permuted_by(w)``. Tuples of
    compositions or vectors are acted on factor by factor.
    """
    if hasattr(x, "permuted_by"):
        return x.permuted_by(w)
    if isinstance(x, Composition) or (isinstance(x, (tuple, list)) and
                                      not any(isinstance(e, (Composition, tuple, list)) for e in x)):
        if len(w.perms) != 1:
            raise CompositionMismatch("single-factor input for a multi-factor Weyl element")
        return _act_single(w.perms[0], x)
    if len(x) != len(w.perms):
        raise CompositionMismatch(f"{len(w.perms)} factors cannot act on {len(x)} components")
    return tuple(_act_single(p, part) for p, part in zip(w.perms, x))


def expand_to_coordinates(perm: Sequence[int], c: Composition) -> Tuple[int, ...]:
    """Coordinate permutation of GL(k) induced by a block permutation of c."""
    moved = permute_sequence(perm, c.parts)
    new_start, acc = [], 0
    for size in moved:
        new_start.append(acc)
        acc += size
    out = []
    for i, (start, stop) in enumerate(c.intervals()):
        base = new_start[perm[i]]
        out.extend(base + k for k in range(stop - start))
    return tuple(out)


def compute_Pw(w: Sequence[int], P: Composition, Q: Composition) -> Composition:
    """Composition of P_w = (M_P cap w^-1 Q w) N_P.

    ``w`` is a 0-based one-line permutation of the coordinates. Along each
    block of P the Q-blocks of the images must be non-decreasing; their runs
    are the blocks of P_w.
    """
    if P.total != Q.total or len(w) != P.total:
        raise CompositionMismatch(f"w of length {len(w)} against P={P}, Q={Q}")
    parts = []
    for start, stop in P.intervals():
        labels = [Q.block_of(w[p]) for p in range(start, stop)]
        run = 0
        for pos, label in enumerate(labels):
            if pos and label < labels[pos - 1]:
                raise NotStandard(f"P_w is not standard for w={list(w)}, P={P}, Q={Q}")
            if pos and label != labels[pos - 1]:
                parts.append(run)
                run = 0
            run += 1
        if labels:
            parts.append(run)
    return Composition(tuple(parts))


def is_min_coset_rep(w: Sequence[int], P: Composition, Q: Composition) -> bool:
    """w increasing on the blocks of P and w^-1 increasing on the blocks of Q."""
    inv = [0] * len(w)
    for i, image in enumerate(w):
        inv[image] = i
    for start, stop in P.intervals():
        if any(w[p] > w[p + 1] for p in range(start, stop - 1)):
            return False
    for start, stop in Q.intervals():
        if any(inv[q] > inv[q + 1] for q in range(start, stop - 1)):
            return False
    return True


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class AffineForm:
    """The function x -> sum(coeffs[i] * x[i]) + constant."""

    coeffs: Tuple[Fraction, ...]
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", vector(self.coeffs))
        object.__setattr__(self, "constant", as_rat(self.constant))

    @classmethod
    def combination(cls, dim: int, terms: Iterable[Tuple[int, Union[int, Fraction]]],
                    constant=0) -> "AffineForm":
        """Form with coefficient c at index i for every (i, c) in terms."""
        coeffs = [Fraction(0)] * dim
        for index, c in terms:
            coeffs[index] += as_rat(c)
        return cls(tuple(coeffs), constant)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def is_constant(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                          self.constant + other.constant)

    def __neg__(self) -> "AffineForm":
        return AffineForm(tuple(-a for a in self.coeffs), -self.constant)

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return self + (-other)

    def scale(self, factor) -> "AffineForm":
        factor = as_rat(factor)
        return AffineForm(tuple(a * factor for a in self.coeffs), self.constant * factor)

    def shift(self, amount) -> "AffineForm":
        return AffineForm(self.coeffs, self.constant + as_rat(amount))

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.dim:
            raise ValueError(f"point of length {len(point)} for a form in {self.dim} variables")
        return sum((a * as_rat(x) for a, x in zip(self.coeffs, point)), Fraction(0)) + self.constant

    def pullback(self, perm: Sequence[int]) -> "AffineForm":
        """Rewrite a form in permuted coordinates y (y[perm[i]] = x[i]) as a form in x."""
        return AffineForm(tuple(self.coeffs[perm[i]] for i in range(self.dim)), self.constant)

    def normalized(self) -> "AffineForm":
        """Canonical representative of the hyperplane: coprime integer coefficients,
        first nonzero coefficient positive."""
        if self.is_constant:
            return AffineForm(self.coeffs, Fraction(1) if self.constant else Fraction(0))
        denom = 1
        for a in self.coeffs:
            denom = _lcm(denom, a.denominator)
        ints = [int(a * denom) for a in self.coeffs]
        g = 0
        for a in ints:
            g = gcd(g, abs(a))
        factor = Fraction(denom, g)
        lead = next(a for a in self.coeffs if a)
        if lead < 0:
            factor = -factor
        return self.scale(factor)

    def restrict(self, subspace: "AffineSubspace") -> "AffineForm":
        """The form in the parameters of ``subspace`` (offset + sum t_k g_k)."""
        if subspace.empty:
            raise ValueError("cannot restrict to the empty subspace")
        gens = subspace.generators()
        coeffs = tuple(sum((a * g for a, g in zip(self.coeffs, gen)), Fraction(0)) for gen in gens)
        return AffineForm(coeffs, self.evaluate(subspace.offset()))

    def sort_key(self):
        return (self.coeffs, self.constant)

    def pretty(self, chart: Sequence[str] = ()) -> str:
        names = list(chart) or [f"x{k + 1}" for k in range(self.dim)]
        text = ""
        for a, name in zip(self.coeffs, names):
            if not a:
                continue
            term = name if abs(a) == 1 else f"{abs(a)}*{name}"
            text += (" - " if a < 0 else " + ") + term
        if self.constant or not text:
            text += (" - " if self.constant < 0 else " + ") + str(abs(self.constant))
        return text[3:] if text.startswith(" + ") else "-" + text[3:]


def _to_sympy(rows: Sequence[Sequence[Fraction]]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(e.numerator, e.denominator) for e in row] for row in rows])


def _from_sympy(entry) -> Fraction:
    entry = sympy.Rational(entry)
    return Fraction(int(entry.p), int(entry.q))


def _rref(rows: Sequence[Sequence[Fraction]], width: int) -> Tuple[Tuple[Fraction, ...], ...]:
    if not rows:
        return ()
    reduced, _ = _to_sympy(rows).rref()
    out = []
    for r in range(reduced.rows):
        row = tuple(_from_sympy(reduced[r, c]) for c in range(width))
        if any(row):
            out.append(row)
    return tuple(out)


@dataclass(frozen=True)
class AffineSubspace:
    """Solutions of A x = b stored as the RREF rows of [A | b]."""

    ambient_dim: int
    rows: Tuple[Tuple[Fraction, ...], ...] = ()
    empty: bool = False
    chart: Tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def full(cls, dim: int, chart: Sequence[str] = ()) -> "AffineSubspace":
        return cls(dim, (), False, tuple(chart))

    @classmethod
    def from_equations(cls, dim: int, rows: Iterable[Sequence], chart: Sequence[str] = ()) -> "AffineSubspace":
        """Rows are [a_1, ..., a_dim, b] meaning sum a_i x_i = b."""
        rows = [tuple(as_rat(e) for e in row) for row in rows]
        for row in rows:
            if len(row) != dim + 1:
                raise ValueError(f"equation of width {len(row)} in dimension {dim}")
        reduced = _rref(rows, dim + 1)
        for row in reduced:
            if not any(row[:dim]) and row[dim]:
                return cls(dim, (), True, tuple(chart))
        return cls(dim, reduced, False, tuple(chart))

    @classmethod
    def span(cls, offset: Sequence, generators: Sequence[Sequence], chart: Sequence[str] = ()) -> "AffineSubspace":
        """offset + span(generators) as an equation system."""
        dim = len(offset)
        offset = vector(offset)
        gens = [vector(g) for g in generators if any(as_rat(e) for e in g)]
        if not gens:
            rows = [tuple(Fraction(int(k == i)) for k in range(dim)) + (offset[i],) for i in range(dim)]
            return cls.from_equations(dim, rows, chart)
        normals = _to_sympy(gens).nullspace()
        rows = []
        for normal in normals:
            a = [_from_sympy(e) for e in normal]
            rows.append(tuple(a) + (sum((x * o for x, o in zip(a, offset)), Fraction(0)),))
        return cls.from_equations(dim, rows, chart)

    @property
    def dimension(self) -> int:
        return -1 if self.empty else self.ambient_dim - len(self.rows)

    def pivots(self) -> List[int]:
        return [next(c for c, e in enumerate(row[:self.ambient_dim]) if e) for row in self.rows]

    def offset(self) -> CoordVector:
        """The point with every free coordinate set to zero."""
        if self.empty:
            raise ValueError("empty subspace has no points")
        point = [Fraction(0)] * self.ambient_dim
        for row, pivot in zip(self.rows, self.pivots()):
            point[pivot] = row[self.ambient_dim]
        return tuple(point)

    def generators(self) -> List[CoordVector]:
        """Nullspace basis, one vector per free coordinate."""
        pivots = self.pivots()
        gens = []
        for free in range(self.ambient_dim):
            if free in pivots:
                continue
            g = [Fraction(0)] * self.ambient_dim
            g[free] = Fraction(1)
            for row, pivot in zip(self.rows, pivots):
                g[pivot] = -row[free]
            gens.append(tuple(g))
        return gens

    def contains(self, point: Sequence) -> bool:
        if self.empty:
            return False
        point = vector(point)
        return all(sum((a * x for a, x in zip(row, point)), Fraction(0)) == row[self.ambient_dim]
                   for row in self.rows)

    def equations(self) -> List[AffineForm]:
        return [AffineForm(row[:self.ambient_dim], -row[self.ambient_dim]) for row in self.rows]

    def intersect(self, other: "AffineSubspace") -> "AffineSubspace":
        if self.ambient_dim != other.ambient_dim:
            raise CompositionMismatch("ambient dimensions differ")
        if self.empty or other.empty:
            return AffineSubspace(self.ambient_dim, (), True, self.chart)
        return AffineSubspace.from_equations(self.ambient_dim, self.rows + other.rows, self.chart)

    def permuted(self, perm: Sequence[int]) -> "AffineSubspace":
        """Image under the coordinate move x -> y with y[perm[i]] = x[i]."""
        if len(perm) != self.ambient_dim:
            raise CompositionMismatch(f"permutation of length {len(perm)} in dimension {self.ambient_dim}")
        if self.empty:
            return self
        rows = []
        for row in self.rows:
            new = [Fraction(0)] * self.ambient_dim
            for i in range(self.ambient_dim):
                new[perm[i]] = row[i]
            rows.append(tuple(new) + (row[self.ambient_dim],))
        chart = permute_sequence(perm, self.chart) if self.chart else ()
        return AffineSubspace.from_equations(self.ambient_dim, rows, chart)

    def translate(self, shift: Sequence) -> "AffineSubspace":
        """The subspace moved by +shift."""
        if self.empty:
            return self
        shift = vector(shift)
        rows = []
        for row in self.rows:
            moved = row[self.ambient_dim] + sum((a * s for a, s in zip(row, shift)), Fraction(0))
            rows.append(row[:self.ambient_dim] + (moved,))
        return AffineSubspace(self.ambient_dim, _rref(rows, self.ambient_dim + 1), False, self.chart)


def solve_affine(forms: Sequence[AffineForm], ambient_dim: Optional[int] = None,
                 chart: Sequence[str] = ()) -> AffineSubspace:
    """Common zero set of affine forms in canonical echelon form."""
    if ambient_dim is None:
        if not forms:
            raise ValueError("ambient dimension is required for an empty family")
        ambient_dim = forms[0].dim
    rows = []
    for form in forms:
        if form.dim != ambient_dim:
            raise CompositionMismatch(f"form in {form.dim} variables, ambient {ambient_dim}")
        rows.append(form.coeffs + (-form.constant,))
    result = AffineSubspace.from_equations(ambient_dim, rows, chart)
    logger.debug("solved %d forms in dimension %d: dim %d", len(forms), ambient_dim, result.dimension)
    return result


def check_refinement(fine: Composition, coarse: Composition) -> None:
    if not fine.nonzero().refines(coarse.nonzero()):
        raise RefinementError(f"{fine} does not refine {coarse}")
