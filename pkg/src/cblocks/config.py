"""Run configuration: defaults, a key-value config file, then CLI flags."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .enumeration import CACHE_ENV, DEFAULT_BUDGET
from .errors import StructuralError


@dataclass
class RunConfig:
    graph: str | None = None
    level: int | None = None
    lmax: int = 4
    dmax: int = 6
    move_bound: int = 4
    max_degree: int = 2
    budget: int = DEFAULT_BUDGET
    search_budget: int = 10**7
    cache_dir: str | None = None
    out: str | None = None
    jobs: int = 1
    # only ever seeds worker scheduling; results never depend on it
    seed: int = 0
    format: str = "json"

    def validate(self) -> None:
        for name in ("lmax", "dmax", "move_bound", "max_degree", "budget", "search_budget", "jobs"):
            if getattr(self, name) <= 0:
                raise StructuralError(f"{name} must be positive")
        if self.level is not None and self.level < 0:
            raise StructuralError("level must be non-negative")
        if self.format not in ("json", "csv"):
            raise StructuralError("format must be json or csv")

    def as_dict(self) -> dict:
        return asdict(self)


def read_config_file(path: str | os.PathLike) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise StructuralError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def resolve(flags: dict, config_path: str | None = None, defaults: dict | None = None) -> RunConfig:
    """Merge defaults < config file < flags (``None`` flags are ignored).

    ``defaults`` holds per-command defaults that differ from ``RunConfig``'s.
    The cache directory may also come from ``$CBLOCKS_CACHE``, below the
    config file and flags.
    """
    cfg = RunConfig()
    types = {f.name: f.type for f in fields(RunConfig)}
    layers: list[dict] = [dict(defaults or {})]
    env_cache = os.environ.get(CACHE_ENV)
    if env_cache:
        layers.append({"cache_dir": env_cache})
    if config_path:
        layers.append(read_config_file(config_path))
    layers.append({k: v for k, v in flags.items() if v is not None})
    for layer in layers:
        for key, value in layer.items():
            if key not in types:
                continue
            if isinstance(value, str) and "int" in str(types[key]):
                try:
                    value = int(value)
                except ValueError as exc:
                    raise StructuralError(f"{key} must be an integer, got {value!r}") from exc
            setattr(cfg, key, value)
    cfg.validate()
    return cfg
