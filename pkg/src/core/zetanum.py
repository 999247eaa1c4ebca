"""
Numeric completed Riemann zeta and the GL(1) x GL(2) residue checks.

xi(s) = pi^(-s/2) Gamma(s/2) zeta(s) is evaluated in double precision with
an Euler-Maclaurin zeta and a Lanczos gamma; mpmath provides an independent
high-precision reference.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

import mpmath

from .errors import LimitInstability, PoleAt, Unsupported
from .scalarfactor import LTermProduct, n_factor
from .spectra import CuspidalToken, SpehBlock

logger = logging.getLogger(__name__)

LANCZOS_G = 7
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
# B_2, B_4, ..., B_12
BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)

TRIVIAL = CuspidalToken("1", 1, "1")

SAMPLE_POINTS = (
    (Fraction(1, 10), Fraction(1, 5)),
    (Fraction(0), Fraction(0)),
    (Fraction(1, 3), Fraction(-1, 4)),
    (Fraction(-1, 5), Fraction(1, 7)),
    (Fraction(1, 4), Fraction(1, 2)),
)


def gamma(z: complex) -> complex:
    """Lanczos approximation, with reflection for Re z < 1/2."""
    z = complex(z)
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma(1 - z))
    z -= 1
    x = LANCZOS_COEFFS[0]
    for i in range(1, LANCZOS_G + 2):
        x += LANCZOS_COEFFS[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


@dataclass(frozen=True)
class XiEvaluator:
    """Double-precision xi with Euler-Maclaurin zeta.

    At least ``terms`` initial terms are summed; the cutoff grows with |Im s|.
    """

    terms: int = 50
    pole_tolerance: float = 1e-13

    def cutoff(self, s: complex) -> int:
        return max(self.terms, int(abs(s.imag)) + 30)

    def zeta(self, s: complex) -> complex:
        s = complex(s)
        if abs(s - 1) < self.pole_tolerance:
            raise PoleAt(Fraction(1))
        N = self.cutoff(s)
        total = sum(n ** -s for n in range(1, N))
        total += N ** (1 - s) / (s - 1) + 0.5 * N ** -s
        rising = s
        power = N ** (-s - 1)
        factorial = 2.0
        for k, b in enumerate(BERNOULLI, start=1):
            total += b / factorial * rising * power
            rising *= (s + 2 * k - 1) * (s + 2 * k)
            power /= N * N
            factorial *= (2 * k + 1) * (2 * k + 2)
        return total

    def xi(self, s: complex) -> complex:
        """
        Completed zeta.

        Args:
            s: Complex argument away from 0 and 1

        Returns:
            xi(s), through xi(1 - s) when Re s < -1/2

        Raises:
            PoleAt: If s is within ``pole_tolerance`` of 0 or 1
        """
        s = complex(s)
        for pole in (0, 1):
            if abs(s - pole) < self.pole_tolerance:
                raise PoleAt(Fraction(pole))
        if s.real < -0.5:
            return self.xi(1 - s)
        return math.pi ** (-s / 2) * gamma(s / 2) * self.zeta(s)


DEFAULT = XiEvaluator()


def xi(s: complex) -> complex:
    return DEFAULT.xi(s)


def xi_mpmath(s: complex, dps: int = 30) -> complex:
    with mpmath.workdps(dps):
        z = mpmath.mpc(s)
        return complex(mpmath.pi ** (-z / 2) * mpmath.gamma(z / 2) * mpmath.zeta(z))


def relative_error(value: complex, reference: complex) -> float:
    return abs(value - reference) / abs(reference)


def _richardson(sample: Callable[[float], complex], h: float, tolerance: float) -> complex:
    """Extrapolate sample(h) = value + c2 h^2 + c4 h^4 + ... to h = 0."""
    r = [sample(h / 2 ** k) for k in range(3)]
    first = [(4 * r[k + 1] - r[k]) / 3 for k in range(2)]
    value = (16 * first[1] - first[0]) / 15
    if abs(value - first[1]) > tolerance:
        raise LimitInstability(f"extrapolation moved by {abs(value - first[1]):.3e}")
    return value


def numeric_residue(f: Callable[[complex], complex], s0: complex, h: float = 1e-2,
                    tolerance: float = 1e-6) -> complex:
    """Residue of f at a simple pole s0 from symmetric samples h (f(s0+h) - f(s0-h)) / 2."""
    return _richardson(lambda t: t * (f(s0 + t) - f(s0 - t)) / 2, h, tolerance)


def residue_of_xi(pole: int) -> complex:
    if pole not in (0, 1):
        raise ValueError("xi has poles at 0 and 1 only")
    return numeric_residue(xi, complex(pole))


def _numeric_arg(form, point: Sequence[complex]) -> complex:
    return sum(float(c) * x for c, x in zip(form.coeffs, point)) + float(form.constant)


def evaluate_product(product: LTermProduct, point: Sequence[complex], evaluator: XiEvaluator = DEFAULT) -> complex:
    """Evaluate a token product for the trivial character with L replaced by xi.

    Raises:
        Unsupported: If a token involves a non-trivial character
    """
    value = complex(1)
    for token, exp in product:
        if token.left != TRIVIAL or token.right != TRIVIAL:
            raise Unsupported("numeric evaluation covers the trivial character only")
        value *= evaluator.xi(_numeric_arg(token.arg, point)) ** exp
    return value


def numeric_n_at_zero(d: int, h: float = 1e-3) -> complex:
    """Regularized value at lambda_1 = lambda_2 of n(w, lambda) for Speh(1, d) x Speh(1, d)."""
    if d < 1:
        raise ValueError("d must be positive")
    block = SpehBlock(TRIVIAL, d)
    product = n_factor([block, block], (1, 0))

    def sample(t: float) -> complex:
        return (evaluate_product(product, (t, 0.0)) + evaluate_product(product, (-t, 0.0))) / 2

    value = _richardson(sample, h, 1e-6)
    logger.debug("n(w, 0) for d=%d: %s", d, value)
    return value


@dataclass(frozen=True)
class ResidueComparison:
    lam1: Fraction
    lam2: Fraction
    mode: int
    lhs: complex
    rhs: complex

    @property
    def abs_error(self) -> float:
        return abs(self.lhs - self.rhs)


def gl1gl2_residue_check(lam1, lam2, mode: int = 1) -> ResidueComparison:
    """Residue of the GL(1) x GL(2) zeta quotient across a singular hyperplane.

    Mode 1 crosses lambda_1 + lambda_2^1 = 1/2 and ``lam2`` is lambda_2^2;
    the residue must equal xi(s)/xi(1+s), s = lambda_2^1 - lambda_2^2.
    Mode 2 crosses lambda_1 + lambda_2^2 = 1/2 and ``lam2`` is lambda_2^1;
    the residue is 1 and must equal n(w) xi(-s)/xi(1-s).
    """
    l1, l2 = float(lam1), float(lam2)
    if mode == 1:
        def quotient(u: complex) -> complex:
            return xi(0.5 + u) * xi(0.5 + l1 + l2) / xi(1 + u - l1 - l2)

        lhs = numeric_residue(quotient, 0.5)
        s = 0.5 - l1 - l2
        rhs = xi(s) / xi(1 + s)
    elif mode == 2:
        def quotient(v: complex) -> complex:
            return xi(0.5 + l1 + l2) * xi(0.5 + v) / xi(1 + l2 - v + l1)

        lhs = numeric_residue(quotient, 0.5)
        s = l2 - (0.5 - l1)
        rhs = xi(s) / xi(1 + s) * xi(-s) / xi(1 - s)
    else:
        raise ValueError(f"unknown residue mode {mode}")
    return ResidueComparison(Fraction(lam1), Fraction(lam2), mode, lhs, rhs)


@dataclass
class NumericReport:
    check: str
    points: List[Tuple] = field(default_factory=list)
    max_error: float = 0.0
    tolerance: float = 1e-10
    metric: str = "abs"

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance

    def record(self, point: Tuple, error: float) -> None:
        self.points.append(point)
        self.max_error = max(self.max_error, error)


def functional_equation_grid() -> List[complex]:
    sigmas = (-0.4, -0.2, 0.1, 0.3, 0.45, 0.55, 0.7, 0.9, 1.2, 1.4)
    heights = (0.5, 1, 2, 5, 10, 15, 20, 30, 40, 50)
    return [complex(x, t) for x in sigmas for t in heights]


def check_functional_equation() -> NumericReport:
    report = NumericReport("xi functional equation", tolerance=1e-10)
    for s in functional_equation_grid():
        report.record((s.real, s.imag), abs(xi(s) - xi(1 - s)))
    return report


def check_conjugation() -> NumericReport:
    report = NumericReport("xi conjugation symmetry", tolerance=1e-10)
    for s in functional_equation_grid():
        report.record((s.real, s.imag), abs(xi(s.conjugate()) - xi(s).conjugate()))
    return report


def check_against_mpmath() -> NumericReport:
    report = NumericReport("xi against mpmath", tolerance=1e-12, metric="rel")
    for s in functional_equation_grid():
        report.record((s.real, s.imag), relative_error(xi(s), xi_mpmath(s)))
    return report


def check_residues() -> NumericReport:
    report = NumericReport("xi residues at 0 and 1", tolerance=1e-9)
    report.record((1,), abs(residue_of_xi(1) - 1))
    report.record((0,), abs(residue_of_xi(0) + 1))
    return report


def check_n_at_zero(max_d: int = 4) -> NumericReport:
    report = NumericReport("n(w, 0) = -1", tolerance=1e-9)
    for d in range(1, max_d + 1):
        report.record((d,), abs(numeric_n_at_zero(d) + 1))
    return report


def check_gl1gl2(mode: int = 1) -> NumericReport:
    report = NumericReport(f"GL(1) x GL(2) residue, mode {mode}", tolerance=1e-8)
    for lam1, lam2 in SAMPLE_POINTS:
        comparison = gl1gl2_residue_check(lam1, lam2, mode)
        report.record((str(lam1), str(lam2)), comparison.abs_error)
    logger.info("%s: max error %.3e", report.check, report.max_error)
    return report
