"""
Run configuration files.

A configuration is a flat TOML document: one ``key = value`` per line with
integer, float, string or list values and no tables. Example::

    experiment = "exp1"
    N = 32
    epsilon = 1e-2
    dt = 1e-5
    t_final = 0.01

Missing keys take the defaults of :class:`RunConfig`; ``t_final`` defaults to
the final time of the chosen experiment. Sweeps additionally set
``N_list``, ``epsilon_list``, ``N_ref`` and ``epsilon_ref``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import tomli
import tomli_w

from nsfpen.scenarios import SCENARIOS


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    N: int
    epsilon: float
    dt: float = 1.0e-6
    t_final: Optional[float] = None
    alpha: float = 0.6
    gamma: float = 1.4
    mu: float = 0.001
    lam: float = 0.001
    kappa: float = 0.001
    k: int = 6
    output_dir: str = "output"
    dump_every: int = 0
    diag_every: int = 100
    workers: int = 1
    N_list: Optional[list[int]] = None
    epsilon_list: Optional[list[float]] = None
    N_ref: Optional[int] = None
    epsilon_ref: Optional[float] = None

    @property
    def has_sweep(self) -> bool:
        return self.N_list is not None


# file key -> attribute name
_RENAMED = {"lambda": "lam"}
_ATTR_TO_KEY = {v: k for k, v in _RENAMED.items()}

_INT_KEYS = {"N", "k", "dump_every", "diag_every", "workers", "N_ref"}
_FLOAT_KEYS = {"epsilon", "dt", "t_final", "alpha", "gamma", "mu", "lam", "kappa",
               "epsilon_ref"}
_REQUIRED = ("experiment", "N", "epsilon")


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_number(v) -> bool:
    return (isinstance(v, (int, float))) and not isinstance(v, bool)


def _coerce(name: str, value):
    if name in _INT_KEYS:
        if not _is_int(value):
            raise ConfigError(f"{_ATTR_TO_KEY.get(name, name)}: expected an integer, got {value!r}")
        return value
    if name in _FLOAT_KEYS:
        if not _is_number(value):
            raise ConfigError(f"{_ATTR_TO_KEY.get(name, name)}: expected a number, got {value!r}")
        return float(value)
    if name in ("experiment", "output_dir"):
        if not isinstance(value, str):
            raise ConfigError(f"{name}: expected a string, got {value!r}")
        return value
    if name == "N_list":
        if not isinstance(value, list) or not value or not all(_is_int(v) for v in value):
            raise ConfigError(f"N_list: expected a nonempty list of integers, got {value!r}")
        return list(value)
    if name == "epsilon_list":
        if not isinstance(value, list) or not value or not all(_is_number(v) for v in value):
            raise ConfigError(f"epsilon_list: expected a nonempty list of numbers, got {value!r}")
        return [float(v) for v in value]
    raise ConfigError(f"unknown key {name!r}")  # pragma: no cover


def _validate(cfg: RunConfig) -> None:
    if cfg.experiment not in SCENARIOS:
        raise ConfigError(f"experiment: unknown value {cfg.experiment!r}, "
                          f"expected one of {sorted(SCENARIOS)}")
    positive = ["N", "epsilon", "dt", "gamma", "mu", "kappa", "k", "diag_every", "workers"]
    for name in positive:
        if not getattr(cfg, name) > 0:
            raise ConfigError(f"{name}: must be positive, got {getattr(cfg, name)!r}")
    if cfg.N < 2:
        raise ConfigError(f"N: need at least 2 cells per axis, got {cfg.N}")
    if cfg.t_final is not None and cfg.t_final < 0.0:
        raise ConfigError(f"t_final: must be nonnegative, got {cfg.t_final}")
    if not 0.0 < cfg.alpha < 1.0:
        raise ConfigError(f"alpha: must lie in (0, 1), got {cfg.alpha}")
    if not cfg.gamma > 1.0:
        raise ConfigError(f"gamma: must exceed 1, got {cfg.gamma}")
    if cfg.lam < 0.0:
        raise ConfigError(f"lambda: must be nonnegative, got {cfg.lam}")
    if cfg.dump_every < 0:
        raise ConfigError(f"dump_every: must be nonnegative, got {cfg.dump_every}")

    sweep = [cfg.N_list, cfg.epsilon_list, cfg.N_ref, cfg.epsilon_ref]
    if any(v is not None for v in sweep) and not all(v is not None for v in sweep):
        raise ConfigError("sweep: N_list, epsilon_list, N_ref and epsilon_ref go together")
    if cfg.has_sweep:
        if any(n < 2 for n in cfg.N_list) or cfg.N_ref < 2:
            raise ConfigError("N_list: resolutions must be at least 2")
        if any(e <= 0.0 for e in cfg.epsilon_list) or cfg.epsilon_ref <= 0.0:
            raise ConfigError("epsilon_list: penalty parameters must be positive")
        bad = [n for n in cfg.N_list if cfg.N_ref % n != 0]
        if bad:
            raise ConfigError(f"N_ref: {cfg.N_ref} is not a multiple of {bad}")


def config_from_dict(raw: dict) -> RunConfig:
    kwargs = {}
    known = {f.name for f in dataclasses.fields(RunConfig)}
    for key, value in raw.items():
        name = _RENAMED.get(key, key)
        if name not in known or key in _ATTR_TO_KEY:
            raise ConfigError(f"unknown key {key!r}")
        kwargs[name] = _coerce(name, value)
    for key in _REQUIRED:
        if key not in kwargs:
            raise ConfigError(f"{key}: missing required key")
    cfg = RunConfig(**kwargs)
    _validate(cfg)
    return cfg


def parse_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
    try:
        raw = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    for key, value in raw.items():
        if isinstance(value, dict):
            raise ConfigError(f"{key}: nested tables are not allowed")
    return config_from_dict(raw)


def config_to_dict(cfg: RunConfig) -> dict:
    out = {}
    for f in dataclasses.fields(cfg):
        value = getattr(cfg, f.name)
        if value is not None:
            out[_ATTR_TO_KEY.get(f.name, f.name)] = value
    return out


def write_config(cfg: RunConfig, path) -> None:
    Path(path).write_text(tomli_w.dumps(config_to_dict(cfg)))
