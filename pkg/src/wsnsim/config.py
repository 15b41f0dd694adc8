"""Experiment description and its flat ``key = value`` text format."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

PROTOCOLS = ("direct", "e3d", "ideal_diffusion", "random_clustering", "ideal_clustering")


class ConfigError(ValueError):
    """Invalid configuration text or value."""

    def __init__(self, message, key=None, line=None):
        where = []
        if key is not None:
            where.append(f"key '{key}'")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.key = key
        self.line = line


@dataclass(frozen=True)
class SimConfig:
    field_width_m: float = 100.0
    field_height_m: float = 100.0
    node_count: int = 100
    bs_x_m: float = 50.0
    bs_y_m: float = 200.0
    initial_energy_j: float = 0.5
    data_packet_bits: int = 2000
    ctrl_packet_bits: int = 64
    e_elec_j_per_bit: float = 50e-9
    eps_amp_j_per_bit_m2: float = 100e-12
    comm_radius_m: float = 30.0
    protocol: str = "e3d"
    seed: int = 1
    max_rounds: int = 100000
    cluster_head_prob: float = 0.05
    aggregate: bool = True
    w_e: float = 0.4
    w_l: float = 0.2
    w_d: float = 0.4
    load_max: int = 5

    def __post_init__(self):
        validate(self)

    @property
    def weights(self) -> tuple[float, float, float]:
        """Score weights (energy, load, distance) normalized to sum 1."""
        total = self.w_e + self.w_l + self.w_d
        return self.w_e / total, self.w_l / total, self.w_d / total

    def with_(self, **changes) -> "SimConfig":
        return replace(self, **changes)


_FIELD_TYPES = {f.name: f.type for f in fields(SimConfig)}


def validate(cfg: SimConfig) -> None:
    def need(cond, key, msg):
        if not cond:
            raise ConfigError(msg, key=key)

    for key in ("field_width_m", "field_height_m", "initial_energy_j", "e_elec_j_per_bit",
                "eps_amp_j_per_bit_m2", "comm_radius_m"):
        v = getattr(cfg, key)
        need(math.isfinite(v) and v > 0, key, f"must be a positive finite number, got {v!r}")
    for key in ("bs_x_m", "bs_y_m"):
        need(math.isfinite(getattr(cfg, key)), key, "must be finite")
    for key in ("node_count", "data_packet_bits", "ctrl_packet_bits", "load_max"):
        need(getattr(cfg, key) >= 1, key, f"must be >= 1, got {getattr(cfg, key)!r}")
    need(cfg.ctrl_packet_bits <= cfg.data_packet_bits, "ctrl_packet_bits",
         "must not exceed data_packet_bits")
    need(cfg.seed >= 0, "seed", "must be >= 0")
    need(cfg.max_rounds >= 0, "max_rounds", "must be >= 0")
    need(0.0 <= cfg.cluster_head_prob <= 1.0, "cluster_head_prob",
         f"must lie in [0, 1], got {cfg.cluster_head_prob!r}")
    for key in ("w_e", "w_l", "w_d"):
        v = getattr(cfg, key)
        need(math.isfinite(v) and v >= 0, key, "must be a non-negative finite number")
    need(cfg.w_e + cfg.w_l + cfg.w_d > 0, "w_d", "score weights must not all be zero")
    need(cfg.protocol in PROTOCOLS, "protocol",
         f"unknown protocol {cfg.protocol!r}; accepted: {', '.join(PROTOCOLS)}")


def _convert(key, raw, lineno):
    kind = _FIELD_TYPES[key]
    try:
        if kind == "int":
            return int(raw, 10)
        if kind == "float":
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError
            return value
        if kind == "bool":
            lowered = raw.lower()
            if lowered in ("true", "yes", "1", "on"):
                return True
            if lowered in ("false", "no", "0", "off"):
                return False
            raise ValueError
    except ValueError:
        raise ConfigError(f"malformed {kind} value {raw!r}", key=key, line=lineno) from None
    return raw


def parse_config(text: str) -> SimConfig:
    """Parse ``key = value`` lines; omitted keys take their defaults.

    ``#`` starts a comment anywhere on a line. Unknown or repeated keys are
    rejected, as are malformed or out-of-range values.
    """
    values: dict = {}
    lines: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", line=lineno)
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in values:
            raise ConfigError(f"duplicate key (first set on line {lines[key]})", key=key, line=lineno)
        values[key] = _convert(key, raw, lineno)
        lines[key] = lineno
    try:
        return SimConfig(**values)
    except ConfigError as exc:
        raise ConfigError(str(exc).split(": ", 1)[-1], key=exc.key,
                          line=lines.get(exc.key)) from None


def render_config(cfg: SimConfig) -> str:
    out = []
    for f in fields(SimConfig):
        v = getattr(cfg, f.name)
        if isinstance(v, bool):
            v = "true" if v else "false"
        elif isinstance(v, float):
            v = repr(v)
        out.append(f"{f.name} = {v}")
    return "\n".join(out) + "\n"


def load_config(path) -> SimConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
