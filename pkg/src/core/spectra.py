"""
Formal cuspidal tokens, Speh blocks and discrete representations of Levis.

Cuspidal representations are opaque tokens with a rank and a dual; two
tokens are isomorphic exactly when they are equal.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from .errors import ConfigError, DegenerateBlock, RefinementError
from .exactlin import Composition, CoordVector, WeylBlockElement, as_rat, permute_sequence, rho_of_parabolic

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CuspidalToken:
    id: str
    rank: int
    dual_id: str

    @property
    def dual(self) -> "CuspidalToken":
        return CuspidalToken(self.dual_id, self.rank, self.id)

    @property
    def self_dual(self) -> bool:
        return self.id == self.dual_id

    def __str__(self) -> str:
        return self.id


class TokenRegistry:
    """A finite universe of cuspidal tokens closed under duality."""

    def __init__(self, tokens: Iterable[CuspidalToken]):
        """
        Initialize the registry and check the dual pairing.

        Args:
            tokens: Cuspidal tokens; every dual must also be present

        Raises:
            ConfigError: On duplicate ids, a missing dual, or a rank mismatch
        """
        self._tokens: Dict[str, CuspidalToken] = {}
        for token in tokens:
            if token.id in self._tokens:
                raise ConfigError(f"duplicate token id {token.id!r}")
            if token.rank < 1:
                raise ConfigError(f"token {token.id!r} has non-positive rank")
            self._tokens[token.id] = token
        for token in self._tokens.values():
            partner = self._tokens.get(token.dual_id)
            if partner is None:
                raise ConfigError(f"dual {token.dual_id!r} of {token.id!r} is not registered")
            if partner.dual_id != token.id:
                raise ConfigError(f"dual pairing is not an involution at {token.id!r}")
            if partner.rank != token.rank:
                raise ConfigError(f"{token.id!r} and its dual have different ranks")
        logger.debug("registry with tokens %s", sorted(self._tokens))

    @classmethod
    def from_records(cls, records: Sequence[Dict[str, Any]]) -> "TokenRegistry":
        """Build from [{"id": str, "rank": int, "dual": str}, ...]."""
        try:
            return cls(CuspidalToken(str(r["id"]), int(r["rank"]), str(r.get("dual", r["id"])))
                       for r in records)
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"malformed registry record: {e}") from e

    def to_records(self) -> List[Dict[str, Any]]:
        return [{"id": t.id, "rank": t.rank, "dual": t.dual_id} for t in self.tokens]

    @property
    def tokens(self) -> List[CuspidalToken]:
        return sorted(self._tokens.values(), key=lambda t: t.id)

    def __iter__(self):
        return iter(self.tokens)

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token_id: str) -> bool:
        return token_id in self._tokens

    def get(self, token_id: str) -> CuspidalToken:
        try:
            return self._tokens[token_id]
        except KeyError:
            raise ConfigError(f"unknown token {token_id!r}") from None

    def blocks(self, max_size: int) -> List["SpehBlock"]:
        """All Speh blocks of size at most ``max_size``, in canonical order."""
        out = [SpehBlock(t, d) for t in self.tokens for d in range(1, max_size // t.rank + 1)]
        return sorted(out, key=SpehBlock.sort_key)

    def cuspidal_blocks(self, max_size: int) -> List["SpehBlock"]:
        return [b for b in self.blocks(max_size) if b.d == 1]


@dataclass(frozen=True)
class SpehBlock:
    """Speh(sigma, d); d = 0 is the trivial representation of GL(0)."""

    sigma: CuspidalToken
    d: int

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("Speh block with negative d")

    @property
    def size(self) -> int:
        return self.sigma.rank * self.d

    @property
    def degenerate(self) -> bool:
        return self.d == 0

    @property
    def cuspidal(self) -> bool:
        return self.d == 1

    def derivative(self) -> "SpehBlock":
        if self.d == 0:
            raise DegenerateBlock("the GL(0) block has no derivative")
        return SpehBlock(self.sigma, self.d - 1)

    def dual(self) -> "SpehBlock":
        return SpehBlock(self.sigma.dual, self.d)

    def iso(self, other: "SpehBlock") -> bool:
        """Isomorphism of the underlying representations."""
        if self.degenerate or other.degenerate:
            return self.degenerate and other.degenerate
        return self.sigma == other.sigma and self.d == other.d

    def sort_key(self) -> Tuple[int, str]:
        return (-self.d, self.sigma.id)

    def label(self) -> str:
        if self.degenerate:
            return "1_GL0"
        return self.sigma.id if self.d == 1 else f"Speh({self.sigma.id},{self.d})"

    def __str__(self) -> str:
        return self.label()


def canonical_order(blocks: Iterable[SpehBlock]) -> Tuple[SpehBlock, ...]:
    """Blocks sorted by d descending, then token id."""
    return tuple(sorted(blocks, key=SpehBlock.sort_key))


def multiplicity_factorial(items: Iterable) -> int:
    """Product of factorials of the multiplicities of ``items``."""
    out = 1
    for count in Counter(items).values():
        out *= factorial(count)
    return out


@dataclass(frozen=True)
class DiscreteRep:
    """Ordered Speh blocks on the GL(n) side and on the GL(n+1) side."""

    side_n: Tuple[SpehBlock, ...]
    side_n1: Tuple[SpehBlock, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "side_n", tuple(self.side_n))
        object.__setattr__(self, "side_n1", tuple(self.side_n1))

    @property
    def sides(self) -> Tuple[Tuple[SpehBlock, ...], Tuple[SpehBlock, ...]]:
        return (self.side_n, self.side_n1)

    @property
    def sizes(self) -> Tuple[int, int]:
        return (sum(b.size for b in self.side_n), sum(b.size for b in self.side_n1))

    def composition(self) -> Tuple[Composition, Composition]:
        return tuple(Composition(tuple(b.size for b in side)) for side in self.sides)

    def nonzero_sides(self) -> Tuple[Tuple[SpehBlock, ...], Tuple[SpehBlock, ...]]:
        return tuple(tuple(b for b in side if not b.degenerate) for side in self.sides)

    def is_cuspidal(self) -> bool:
        return all(b.d == 1 for side in self.nonzero_sides() for b in side)

    def permuted_by(self, w: WeylBlockElement) -> "DiscreteRep":
        if len(w.perms) == 1:
            return DiscreteRep(permute_sequence(w.perms[0], self.side_n), self.side_n1)
        return DiscreteRep(permute_sequence(w.perms[0], self.side_n),
                           permute_sequence(w.perms[1], self.side_n1))

    def dual(self) -> "DiscreteRep":
        return DiscreteRep(tuple(b.dual() for b in self.side_n), tuple(b.dual() for b in self.side_n1))


def block_nu(b: SpehBlock) -> CoordVector:
    """Exponents (2j-1-d)/2, j = 1..d, of the cuspidal support of a block."""
    return tuple(Fraction(2 * j - 1 - b.d, 2) for j in range(1, b.d + 1))


@dataclass(frozen=True)
class CuspidalSupport:
    P_pi: Tuple[Composition, ...]
    sigma: Tuple[Tuple[CuspidalToken, ...], ...]
    nu: Tuple[CoordVector, ...]


def _side_support(blocks: Sequence[SpehBlock]) -> Tuple[Composition, Tuple[CuspidalToken, ...], CoordVector]:
    parts, tokens, nu = [], [], []
    for b in blocks:
        if b.degenerate:
            continue
        parts.extend([b.sigma.rank] * b.d)
        tokens.extend([b.sigma] * b.d)
        nu.extend(block_nu(b))
    return Composition(tuple(parts)), tuple(tokens), tuple(nu)


def cuspidal_support(pi) -> CuspidalSupport:
    """(P_pi, sigma_pi, nu_pi) per side; GL(0) blocks are dropped.

    Accepts a DiscreteRep or a single sequence of blocks.
    """
    sides = pi.sides if isinstance(pi, DiscreteRep) else (tuple(pi),)
    support = [_side_support(side) for side in sides]
    return CuspidalSupport(tuple(s[0] for s in support), tuple(s[1] for s in support),
                           tuple(s[2] for s in support))


def nu_relative(blocks: Sequence[SpehBlock], Q: Composition) -> CoordVector:
    """nu_{Q,pi}: each block of P receives -rho_{Q_i}/r_i over its Q-blocks.

    Raises:
        RefinementError: Unless P_pi refines Q and Q refines P
    """
    blocks = [b for b in blocks if not b.degenerate]
    P = Composition(tuple(b.size for b in blocks))
    P_pi, _, _ = _side_support(blocks)
    Q = Q.nonzero()
    if not (Q.refines(P) and P_pi.refines(Q)):
        raise RefinementError(f"need P_pi={P_pi} <= Q={Q} <= P={P}")
    out, cursor = [], 0
    for b in blocks:
        local, filled = [], 0
        while filled < b.size:
            local.append(Q[cursor])
            filled += Q[cursor]
            cursor += 1
        out.extend(-x / b.sigma.rank for x in rho_of_parabolic(Composition(tuple(local))))
    return tuple(out)


@dataclass(frozen=True)
class Segment:
    center: Fraction
    length: int

    def __post_init__(self):
        object.__setattr__(self, "center", as_rat(self.center))
        if self.length < 1:
            raise ValueError("segments have positive length")

    def elements(self) -> Tuple[Fraction, ...]:
        return tuple(self.center + Fraction(2 * j - 1 - self.length, 2) for j in range(1, self.length + 1))

    def as_set(self) -> frozenset:
        return frozenset(self.elements())


def segment_of(b: SpehBlock, shift=0) -> Segment:
    if b.degenerate:
        raise DegenerateBlock("GL(0) blocks have no segment")
    return Segment(as_rat(shift), b.d)


def discrete_L_expand(b: SpehBlock, b2: SpehBlock) -> List[Tuple[Tuple[CuspidalToken, CuspidalToken], Fraction]]:
    """L(s, b x b2) as a product of L(s + shift, sigma x sigma2) terms."""
    terms = []
    for i in range(1, b.d + 1):
        for j in range(1, b2.d + 1):
            shift = Fraction(b.d - 2 * i + 1, 2) + Fraction(b2.d - 2 * j + 1, 2)
            terms.append(((b.sigma, b2.sigma), shift))
    return terms


def blocks_total(blocks: Iterable[SpehBlock]) -> int:
    return sum(b.size for b in blocks)


def zone_key(blocks: Iterable[SpehBlock]) -> Tuple[Tuple[int, str], ...]:
    """Order-free key of a multiset of blocks."""
    return tuple(sorted(b.sort_key() for b in blocks))
