"""Run configuration: flat key=value files plus flag overrides (flags win)."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError

ENV_SEED = "CRAMER_CLT_SEED"


@dataclass
class RunConfig:
    modulus: int = 1
    character: str = ""          # canonical index, builtin name, or file path
    n_terms: int = 5000
    t: float = 0.0
    t_im: float = 0.0            # imaginary part of s for euler L mode
    states: int = 10000
    seed: int = 1
    bins: int = 50
    out_dir: str = "out"
    threads: int = 0             # 0 = one worker per CPU
    svg: bool = True
    gs_window: int = 0
    c_mult: float = 1.0
    sigma: float = 0.6
    t_grid: str = "20,50,100"
    mode: str = "zeta"           # euler subcommand: zeta | l
    n_factors: int = 1_000_000


_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _coerce(name: str, kind: type, raw: str):
    raw = raw.strip()
    try:
        if kind is bool:
            low = raw.lower()
            if low in _BOOL_TRUE:
                return True
            if low in _BOOL_FALSE:
                return False
            raise ValueError(raw)
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"config key {name}: cannot parse {raw!r} as {kind.__name__}") from exc


def parse_config_file(path) -> dict:
    """Parse a key=value file; blank lines and # comments ignored."""
    out: dict = {}
    text = Path(path).read_text(encoding="utf-8")
    types = {f.name: f.type for f in fields(RunConfig)}
    pytypes = {"int": int, "float": float, "str": str, "bool": bool}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in types:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(key, pytypes[str(types[key])], value)
    return out


def build_config(cli_overrides: dict, config_path=None) -> RunConfig:
    """Merge precedence: defaults < environment seed < config file < flags."""
    cfg = RunConfig()
    env_seed = os.environ.get(ENV_SEED)
    if env_seed is not None:
        try:
            cfg.seed = int(env_seed)
        except ValueError as exc:
            raise ConfigError(f"{ENV_SEED}={env_seed!r} is not an integer") from exc
    if config_path is not None:
        for key, value in parse_config_file(config_path).items():
            setattr(cfg, key, value)
    for key, value in cli_overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    if cfg.states < 1:
        raise ConfigError(f"states must be >= 1, got {cfg.states}")
    if cfg.n_terms < 3:
        raise ConfigError(f"n_terms must be >= 3, got {cfg.n_terms}")
    if cfg.bins < 1:
        raise ConfigError(f"bins must be >= 1, got {cfg.bins}")
    if cfg.threads < 0:
        raise ConfigError(f"threads must be >= 0, got {cfg.threads}")
    return cfg
