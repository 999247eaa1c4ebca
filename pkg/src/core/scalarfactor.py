"""
Formal scalar factors of intertwining operators.

A scalar factor is a finite product of completed Rankin-Selberg L-functions
L(arg, sigma_left x sigma_right^vee) with integer exponents. Only the poles
at arg = 0 and arg = 1 (present exactly when left == right) are modeled;
epsilon factors are entire units and are not tracked.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .exactlin import AffineForm, Composition, WeylBlockElement, expand_to_coordinates, permute_sequence
from .spectra import CuspidalToken, SpehBlock, discrete_L_expand

logger = logging.getLogger(__name__)

POLES = (Fraction(0), Fraction(1))


@dataclass(frozen=True)
class LToken:
    left: CuspidalToken
    right: CuspidalToken
    arg: AffineForm

    def has_poles(self) -> bool:
        return self.left == self.right

    def sort_key(self):
        return (self.left.id, self.right.id, self.arg.sort_key())

    def pretty(self, chart: Sequence[str] = ()) -> str:
        return f"L({self.arg.pretty(chart)}, {self.left} x {self.right}^v)"


class LTermProduct:
    """Multiplicative group of L-token monomials."""

    def __init__(self, terms: Optional[Mapping[LToken, int]] = None):
        self._terms: Dict[LToken, int] = {}
        for token, exp in (terms or {}).items():
            self._add(token, exp)

    def _add(self, token: LToken, exp: int) -> None:
        total = self._terms.get(token, 0) + exp
        if total:
            self._terms[token] = total
        else:
            self._terms.pop(token, None)

    @classmethod
    def ratio(cls, left: CuspidalToken, right: CuspidalToken, numerator: AffineForm,
              denominator: AffineForm) -> "LTermProduct":
        out = cls()
        out._add(LToken(left, right, numerator), 1)
        out._add(LToken(left, right, denominator), -1)
        return out

    def items(self) -> List[Tuple[LToken, int]]:
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key())

    def __iter__(self) -> Iterator[Tuple[LToken, int]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_one(self) -> bool:
        return not self._terms

    def __mul__(self, other: "LTermProduct") -> "LTermProduct":
        out = LTermProduct(self._terms)
        for token, exp in other._terms.items():
            out._add(token, exp)
        return out

    def __truediv__(self, other: "LTermProduct") -> "LTermProduct":
        return self * other.inverse()

    def inverse(self) -> "LTermProduct":
        return LTermProduct({t: -e for t, e in self._terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, LTermProduct):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def pullback(self, perm: Sequence[int]) -> "LTermProduct":
        """Rewrite arguments given in permuted coordinates y (y[perm[i]] = x[i]) in x."""
        return LTermProduct({LToken(t.left, t.right, t.arg.pullback(perm)): e for t, e in self._terms.items()})

    def counts(self) -> Dict[str, int]:
        numerator = sum(e for e in self._terms.values() if e > 0)
        return {"tokens": len(self._terms), "numerator": numerator, "denominator": numerator - self.degree}

    @property
    def degree(self) -> int:
        return sum(self._terms.values())

    def pretty(self, chart: Sequence[str] = ()) -> str:
        if self.is_one:
            return "1"
        return " * ".join(t.pretty(chart) + ("" if e == 1 else f"^{e}") for t, e in self.items())

    def __repr__(self) -> str:
        return f"LTermProduct({self.pretty()})"


def _perm(w) -> Tuple[int, ...]:
    return w.perms[0] if isinstance(w, WeylBlockElement) else tuple(w)


def _difference(dim: int, i: int, j: int, constant=0) -> AffineForm:
    return AffineForm.combination(dim, [(i, 1), (j, -1)], constant)


def n_factor(blocks: Sequence[SpehBlock], w) -> LTermProduct:
    """Scalar factor n_pi(w, lambda) over the inverted block pairs of w.

    Each inverted pair (i, j) contributes L(s + t)/L(1 + s + t) for the
    cuspidal shifts t of L(s, pi_i x pi_j^vee), with s = lambda_i - lambda_j.
    """
    perm = _perm(w)
    if len(perm) != len(blocks):
        raise ValueError(f"Weyl element on {len(perm)} blocks applied to {len(blocks)}")
    dim = len(blocks)
    out = LTermProduct()
    for i in range(dim):
        for j in range(i + 1, dim):
            if perm[i] < perm[j]:
                continue
            for (left, right), shift in discrete_L_expand(blocks[i], blocks[j]):
                out = out * LTermProduct.ratio(left, right, _difference(dim, i, j, shift),
                                               _difference(dim, i, j, shift + 1))
    return out


def cuspidal_n_factor(blocks: Sequence[SpehBlock], w) -> LTermProduct:
    """The same factor computed on the cuspidal support, with nu-shifts folded into the arguments."""
    perm = _perm(w)
    degrees = Composition(tuple(b.d for b in blocks))
    expanded = expand_to_coordinates(perm, degrees)
    owner = [(i, a) for i, b in enumerate(blocks) for a in range(1, b.d + 1)]
    dim = len(blocks)
    out = LTermProduct()
    for p in range(len(owner)):
        for q in range(p + 1, len(owner)):
            (i, a), (j, b) = owner[p], owner[q]
            if i == j or expanded[p] < expanded[q]:
                continue
            shift = a - b + Fraction(blocks[j].d - blocks[i].d, 2)
            out = out * LTermProduct.ratio(blocks[i].sigma, blocks[j].sigma, _difference(dim, i, j, shift),
                                           _difference(dim, i, j, shift + 1))
    return out


def nij_expand(blocks: Sequence[SpehBlock], w_sub: Sequence[int], i: int, j: int, variant: str = "A") -> LTermProduct:
    """Telescoped contribution of blocks i < j (0-based) to n_pi(w).

    ``w_sub`` is the 0-based one-line permutation of the cuspidal-support
    coordinates; it must be increasing inside every block.

    Raises:
        ValueError: If i >= j, the variant is unknown, or w_sub is not increasing on the blocks
    """
    if not i < j:
        raise ValueError("nij_expand needs i < j")
    if variant not in ("A", "B"):
        raise ValueError(f"unknown variant {variant!r}")
    degrees = [b.d for b in blocks]
    starts = [sum(degrees[:k]) for k in range(len(degrees))]
    if len(w_sub) != sum(degrees):
        raise ValueError("w_sub does not act on the cuspidal support")
    for k, d in enumerate(degrees):
        if any(w_sub[starts[k] + t] > w_sub[starts[k] + t + 1] for t in range(d - 1)):
            raise ValueError(f"w_sub is not increasing on block {k}")
    d_i, d_j = degrees[i], degrees[j]
    delta = Fraction(d_j - d_i, 2)
    dim = len(blocks)
    left, right = blocks[i].sigma, blocks[j].sigma

    def image(block: int, k: int) -> int:
        return w_sub[starts[block] + k - 1]

    out = LTermProduct()
    if variant == "A":
        for a in range(1, d_i + 1):
            below = [b for b in range(1, d_j + 1) if image(j, b) < image(i, a)]
            if not below:
                continue
            b_a = max(below)
            out = out * LTermProduct.ratio(left, right, _difference(dim, i, j, a - b_a + delta),
                                           _difference(dim, i, j, a + delta))
    else:
        for b in range(1, d_j + 1):
            above = [a for a in range(1, d_i + 1) if image(j, b) < image(i, a)]
            a_b = min(above) if above else d_i + 1
            out = out * LTermProduct.ratio(left, right, _difference(dim, i, j, a_b - b + delta),
                                           _difference(dim, i, j, 1 - b + Fraction(d_i + d_j, 2)))
    return out


def pair_interleavings(d_i: int, d_j: int) -> Iterator[Tuple[int, ...]]:
    """Every w_sub on two blocks of degrees d_i, d_j that is increasing inside each block."""
    total = d_i + d_j
    for chosen in combinations(range(total), d_i):
        rest = tuple(k for k in range(total) if k not in chosen)
        yield chosen + rest


def nij_total(blocks: Sequence[SpehBlock], w, variant: str = "A") -> LTermProduct:
    """Product of nij_expand over all block pairs for a block permutation w."""
    perm = _perm(w)
    w_sub = expand_to_coordinates(perm, Composition(tuple(b.d for b in blocks)))
    out = LTermProduct()
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            out = out * nij_expand(blocks, w_sub, i, j, variant)
    return out


def cocycle_holds(blocks: Sequence[SpehBlock], w1, w2) -> bool:
    """n(w2 w1, lambda) = n(w2, w1 lambda) n(w1, lambda) when lengths add.

    Raises:
        ValueError: If l(w2 w1) != l(w2) + l(w1)
    """
    p1, p2 = _perm(w1), _perm(w2)
    e1, e2 = WeylBlockElement((p1,)), WeylBlockElement((p2,))
    product = e2.compose(e1)
    if product.length() != e1.length() + e2.length():
        raise ValueError("lengths do not add")
    moved = permute_sequence(p1, blocks)
    rhs = n_factor(moved, p2).pullback(p1) * n_factor(blocks, p1)
    return n_factor(blocks, product.perms[0]) == rhs


def pole_order_at(p: LTermProduct, point: Sequence) -> int:
    """Order of vanishing at ``point`` contributed by the declared poles alone.

    Zeros of L-functions are not modeled, so the value is a lower bound on
    the true order only through the pole bookkeeping.
    """
    order = 0
    for token, exp in p:
        if token.has_poles() and token.arg.evaluate(point) in POLES:
            order -= exp
    return order


@dataclass(frozen=True)
class RegularityReport:
    block: SpehBlock
    order: int
    product: LTermProduct

    @property
    def regular(self) -> bool:
        return self.order >= 0


def mzeros_regularity(block: SpehBlock) -> RegularityReport:
    """Pole order of n_pi(w, lambda) on lambda_1 = lambda_2 for pi = block x block, w the swap."""
    product = n_factor([block, block], (1, 0))
    order = pole_order_at(product, (0, 0))
    logger.debug("regularity of %s x %s on the diagonal: order %d", block, block, order)
    return RegularityReport(block, order, product)
