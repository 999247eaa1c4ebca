"""
Rankin-Selberg parabolics of GL(n) x GL(n+1).

A Rankin-Selberg parabolic is parametrized by a standard composition of
n+1 and a marked block; the marked block either gave up one coordinate to
GL(n) or was a singleton that disappears on the GL(n) side.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .exactlin import Composition, enumerate_compositions

logger = logging.getLogger(__name__)

OrderedPartition = Tuple[FrozenSet[int], ...]


@dataclass(frozen=True)
class RSParabolic:
    p_n1_std: Composition
    i0: int
    p_n: Composition
    w_std: Tuple[int, ...]
    case: int
    N: int

    @property
    def n(self) -> int:
        return self.p_n1_std.total - 1

    def semi_standard_blocks(self) -> OrderedPartition:
        """Ordered blocks w_std^-1(B_j) of the semi-standard GL(n+1) parabolic, 1-based."""
        blocks = []
        for start, stop in self.p_n1_std.intervals():
            target = set(range(start, stop))
            blocks.append(frozenset(c + 1 for c, image in enumerate(self.w_std) if image in target))
        return tuple(blocks)

    def one_line(self) -> List[int]:
        return [x + 1 for x in self.w_std]


@dataclass(frozen=True)
class RSLeviDecomposition:
    M_plus: Composition
    M_minus: Composition
    cM: Tuple[int, int]

    def reassemble(self) -> Tuple[Composition, Composition]:
        """(M_P^std on GL(n), M_P^std on GL(n+1))."""
        middle_n = (self.cM[0],) if self.cM[0] else ()
        side_n = Composition(self.M_plus.parts + middle_n + self.M_minus.parts)
        side_n1 = Composition(self.M_plus.parts + (self.cM[1],) + self.M_minus.parts)
        return side_n, side_n1


def _cycle(n: int, N: int) -> Tuple[int, ...]:
    """0-based one-line form of N+1 -> N+2 -> ... -> n+1 -> N+1 (1-based labels)."""
    w = list(range(n + 1))
    if N == n:
        return tuple(w)
    w[N] = N + 1
    for j in range(N + 1, n):
        w[j] = j + 1
    w[n] = N
    return tuple(w)


def rs_from_pair(p: Composition, i0: int) -> RSParabolic:
    """The Rankin-Selberg parabolic attached to (p, i0), i0 1-based.

    Raises:
        IndexError: If i0 is not a block index of p
    """
    p = Composition(tuple(p))
    if p.degenerate:
        raise ValueError(f"standard composition expected, got {p}")
    if not 1 <= i0 <= len(p):
        raise IndexError(f"i0={i0} out of range for {p}")
    n = p.total - 1
    parts = list(p.parts)
    if parts[i0 - 1] >= 2:
        case = 1
        N = sum(parts[:i0]) - 1
        parts[i0 - 1] -= 1
    else:
        case = 2
        N = sum(parts[:i0 - 1])
        del parts[i0 - 1]
    return RSParabolic(p, i0, Composition(tuple(parts)), _cycle(n, N), case, N)


def enumerate_rs(n: int) -> List[RSParabolic]:
    if n < 1:
        raise ValueError("n must be at least 1")
    out = [rs_from_pair(p, i0) for p in enumerate_compositions(n + 1) for i0 in range(1, len(p) + 1)]
    logger.debug("enumerated %d Rankin-Selberg parabolics for n=%d", len(out), n)
    return out


def _ordered_set_partitions(elements: List[int]):
    if not elements:
        yield ()
        return
    k = len(elements)
    for labels in product(range(k), repeat=k):
        used = sorted(set(labels))
        if used != list(range(len(used))):
            continue
        yield tuple(frozenset(e for e, label in zip(elements, labels) if label == b) for b in used)


def _trace_is_standard(partition: OrderedPartition, n: int) -> bool:
    expected = 1
    for block in partition:
        trace = sorted(c for c in block if c <= n)
        if not trace:
            continue
        if trace != list(range(expected, expected + len(trace))):
            return False
        expected += len(trace)
    return expected == n + 1


def brute_force_semistandard_rs(n: int) -> Set[OrderedPartition]:
    """Ordered set partitions of {1..n+1} whose trace on {1..n} is standard."""
    if n > 4:
        raise ValueError("brute force is limited to n <= 4")
    found = {part for part in _ordered_set_partitions(list(range(1, n + 2))) if _trace_is_standard(part, n)}
    logger.debug("brute force found %d semi-standard parabolics for n=%d", len(found), n)
    return found


def standardize(q: RSParabolic) -> RSLeviDecomposition:
    parts = q.p_n1_std.parts
    k = q.i0 - 1
    return RSLeviDecomposition(Composition(parts[:k]), Composition(parts[k + 1:]), (parts[k] - 1, parts[k]))


def rho_underline(q: RSParabolic) -> Tuple[Optional[Fraction], ...]:
    """1/2 before the marked block, -1/2 after it, unset at the marked block."""
    out: List[Optional[Fraction]] = []
    for i in range(1, len(q.p_n1_std) + 1):
        if i < q.i0:
            out.append(Fraction(1, 2))
        elif i == q.i0:
            out.append(None)
        else:
            out.append(Fraction(-1, 2))
    return tuple(out)


def levi_trace(q: RSParabolic) -> Composition:
    """Sizes of the GL(n) traces of the semi-standard blocks, empty ones dropped."""
    sizes = [len([c for c in block if c <= q.n]) for block in q.semi_standard_blocks()]
    return Composition(tuple(s for s in sizes if s))


def rs_counts(max_n: int) -> Dict[int, int]:
    return {n: len(enumerate_rs(n)) for n in range(1, max_n + 1)}
