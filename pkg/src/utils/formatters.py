"""Formatting utilities for rationals, data and markdown tables."""
from fractions import Fraction
from typing import Any, Dict, Sequence

def format_rational(x) -> str:
    """Format a rational as p/q, or as an integer when q = 1."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

def format_shape(shape: Sequence[int]) -> str:
    return "(" + ",".join(str(k) for k in shape) + ")"

def dict_to_md_table(d: Dict[str, Any], key_header: str = "Shape", value_header: str = "Count") -> str:
    """Convert a dictionary to a markdown table."""
    if not d:
        return 'None'
    header = f'| {key_header} | {value_header} |\n|---|---|'
    rows = [f"| {k} | {v} |" for k, v in d.items()]
    return '\n'.join([header] + rows)

def status_mark(passed: bool) -> str:
    return "✓" if passed else "✗"
