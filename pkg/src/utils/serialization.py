"""JSON encoders and decoders for registries, data, forms and reports."""
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from ..core.divisors import DivisorPoly
from ..core.errors import ConfigError
from ..core.exactlin import AffineForm, Composition, WeylBlockElement
from ..core.relevant import IncreasingDatum, RelevantDatum, validate_increasing, validate_relevant
from ..core.rsparab import RSParabolic
from ..core.spectra import DiscreteRep, SpehBlock, TokenRegistry
from .formatters import format_rational

ZONES = ("plus", "one", "two", "minus")
INCREASING_ZONES = ("plus", "one", "c1", "two", "c2", "minus")


def rat_to_json(x: Union[int, Fraction]) -> str:
    return format_rational(x)


def rat_from_json(value: Union[int, str]) -> Fraction:
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"not a rational: {value!r}") from e


def vector_to_json(v: Sequence) -> List[str]:
    return [rat_to_json(x) for x in v]


def form_to_json(form: AffineForm) -> Dict[str, Any]:
    return {"coeffs": vector_to_json(form.coeffs), "const": rat_to_json(form.constant)}


def form_from_json(data: Dict[str, Any]) -> AffineForm:
    return AffineForm(tuple(rat_from_json(c) for c in data["coeffs"]), rat_from_json(data.get("const", 0)))


def divisor_to_json(divisor: DivisorPoly) -> List[Dict[str, Any]]:
    return [{"form": form_to_json(form), "exp": exp} for form, exp in divisor.items()]


def divisor_from_json(data: Sequence[Dict[str, Any]]) -> DivisorPoly:
    return DivisorPoly({form_from_json(item["form"]): int(item["exp"]) for item in data})


def block_to_json(b: SpehBlock) -> Dict[str, Any]:
    return {"sigma": b.sigma.id, "d": b.d}


def block_from_json(data: Dict[str, Any], registry: TokenRegistry) -> SpehBlock:
    try:
        return SpehBlock(registry.get(str(data["sigma"])), int(data.get("d", 1)))
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"malformed block {data!r}: {e}") from e


def blocks_from_json(data: Sequence[Dict[str, Any]], registry: TokenRegistry) -> tuple:
    return tuple(block_from_json(item, registry) for item in data)


def rep_to_json(pi: DiscreteRep) -> Dict[str, Any]:
    return {"n": [block_to_json(b) for b in pi.side_n], "n1": [block_to_json(b) for b in pi.side_n1]}


def rep_from_json(data: Dict[str, Any], registry: TokenRegistry) -> DiscreteRep:
    return DiscreteRep(blocks_from_json(data.get("n", ()), registry), blocks_from_json(data.get("n1", ()), registry))


def rs_to_json(q: RSParabolic) -> Dict[str, Any]:
    return {"p_n1": list(q.p_n1_std.parts), "i0": q.i0, "w": q.one_line()}


def weyl_from_json(data: Sequence[Sequence[int]]) -> WeylBlockElement:
    try:
        return WeylBlockElement.from_one_line(*data)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"malformed Weyl element {data!r}: {e}") from e


def datum_to_json(datum: Union[RelevantDatum, IncreasingDatum]) -> Dict[str, Any]:
    """{"I", "P", "pi", "I1", "I2"} plus the zones the datum is stored by."""
    P = datum.P
    zones = ZONES if isinstance(datum, RelevantDatum) else INCREASING_ZONES
    return {
        "I": list(datum.I),
        "P": {"n": list(P[0].parts), "n1": list(P[1].parts)},
        "pi": rep_to_json(datum.pi),
        "I1": list(getattr(datum, "I1", ())),
        "I2": list(getattr(datum, "I2", ())),
        "zones": {z: [block_to_json(b) for b in getattr(datum, z)] for z in zones},
    }


def datum_from_json(data: Dict[str, Any], registry: TokenRegistry) -> Union[RelevantDatum, IncreasingDatum]:
    """Read a datum from its zones, or a relevant datum from (I, P, pi).

    Raises:
        ConfigError: If the record is incomplete
        ValidationError: If the datum breaks a defining constraint
    """
    zones = data.get("zones")
    if zones is not None:
        parsed = {z: blocks_from_json(zones.get(z, ()), registry) for z in INCREASING_ZONES}
        if any(zones.get(z) for z in ("c1", "c2")) or data.get("I1") or len(data.get("I", ())) == 6:
            datum = IncreasingDatum(I1=tuple(data.get("I1", ())), I2=tuple(data.get("I2", ())), **parsed)
            validate_increasing(datum).raise_for_failure()
            return datum
        return RelevantDatum(*(parsed[z] for z in ZONES))
    if "I" not in data or "pi" not in data:
        raise ConfigError("a datum needs either zones or I and pi")
    if len(data["I"]) != 4:
        raise ConfigError("increasing data must be given by zones")
    P = data.get("P")
    comps = None if P is None else (Composition(tuple(P["n"])), Composition(tuple(P["n1"])))
    report = validate_relevant(tuple(data["I"]), comps, rep_from_json(data["pi"], registry))
    report.raise_for_failure()
    return report.datum


def registry_from_json(data: Sequence[Dict[str, Any]]) -> TokenRegistry:
    if not isinstance(data, list):
        raise ConfigError("a registry file holds a JSON array of tokens")
    return TokenRegistry.from_records(data)


def load_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}") from e


def load_registry(path: Optional[Union[str, Path]]) -> TokenRegistry:
    if path is None:
        return TokenRegistry([])
    return registry_from_json(load_json(path))


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=False, indent=2, ensure_ascii=False)


def write_json(payload: Any, path: Optional[Union[str, Path]]) -> str:
    """Write to ``path`` (parents created) when given; always return the text."""
    text = dumps(payload) + "\n"
    if path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return text


def weighted_classes_to_json(classes) -> List[Dict[str, Any]]:
    return [{"datum": datum_to_json(datum), "weight": rat_to_json(weight)} for datum, weight in classes.items()]


def pipeline_report_to_json(report, registry: TokenRegistry) -> Dict[str, Any]:
    return {
        "n": report.n,
        "registry": registry.to_records(),
        "classes": weighted_classes_to_json(report.classes),
        "matches_direct_enumeration": report.matches_direct_enumeration,
    }
