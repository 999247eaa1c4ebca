"""
rankin-bookkeeper: exact bookkeeping for the Rankin-Selberg period on GL(n) x GL(n+1).

Enumerates relevant and increasing inducing data, computes singularity divisors
and scalar factors with exact rationals, replays the residue-graph pipeline and
checks the completed zeta function numerically.
"""

__version__ = "0.1.0"

from .core.relevant import IncreasingDatum, RelevantDatum, enumerate_relevant
from .core.report import ReportGenerator
from .core.resgraph import pipeline
from .core.spectra import CuspidalToken, SpehBlock, TokenRegistry

# Expose main components
__all__ = [
    "CuspidalToken",
    "SpehBlock",
    "TokenRegistry",
    "RelevantDatum",
    "IncreasingDatum",
    "enumerate_relevant",
    "pipeline",
    "ReportGenerator",
]
