"""Run configuration: environment defaults overridden by command-line flags."""
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from ..core.errors import ConfigError
from ..core.spectra import TokenRegistry
from .serialization import load_registry

ENV_THREADS = "RANKIN_BOOKKEEPER_THREADS"
ENV_MAX_BLOCKS = "RANKIN_BOOKKEEPER_MAX_BLOCKS"
ENV_MAX_GRAPHS = "RANKIN_BOOKKEEPER_MAX_GRAPHS"


def _positive(name: str, value) -> Optional[int]:
    if value is None or value == "":
        return None
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer, got {value!r}") from None
    if number < 1:
        raise ConfigError(f"{name} must be positive, got {number}")
    return number


@dataclass
class RunConfig:
    """Settings shared by every command."""

    n: int = 1
    registry_path: Optional[Path] = None
    out: Optional[Path] = None
    max_blocks: Optional[int] = None
    max_graphs: Optional[int] = None
    threads: int = 1
    json: bool = False
    registry: TokenRegistry = field(default_factory=lambda: TokenRegistry([]), repr=False)

    @classmethod
    def from_options(cls, env: Optional[Mapping[str, str]] = None, **options) -> "RunConfig":
        """
        Build a configuration from CLI options with environment fallbacks.

        Args:
            env: Environment mapping (os.environ when None)
            **options: n, registry, out, max_blocks, max_graphs, threads, json

        Returns:
            A validated RunConfig with its registry loaded

        Raises:
            ConfigError: On a negative n, a non-positive limit or an unreadable registry
        """
        env = os.environ if env is None else env
        n = options.get("n")
        n = 1 if n is None else n
        if n < 0:
            raise ConfigError(f"n must be non-negative, got {n}")
        max_blocks = options.get("max_blocks")
        max_graphs = options.get("max_graphs")
        threads = options.get("threads")
        registry_path = options.get("registry")
        out = options.get("out")
        config = cls(
            n=n,
            registry_path=Path(registry_path) if registry_path else None,
            out=Path(out) if out else None,
            max_blocks=_positive("max blocks", max_blocks if max_blocks is not None else env.get(ENV_MAX_BLOCKS)),
            max_graphs=_positive("max graphs", max_graphs if max_graphs is not None else env.get(ENV_MAX_GRAPHS)),
            threads=_positive("threads", threads if threads is not None else env.get(ENV_THREADS)) or 1,
            json=bool(options.get("json", False)),
        )
        config.registry = load_registry(config.registry_path)
        return config
