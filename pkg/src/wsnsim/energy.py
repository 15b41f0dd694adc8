"""First-order radio energy model and per-node battery accounting."""

from __future__ import annotations

from dataclasses import dataclass, field

CATEGORIES = ("tx", "rx", "ctrl")


class DeadBatteryError(RuntimeError):
    """Raised when the simulator tries to spend energy from a dead node."""


@dataclass(frozen=True)
class RadioModel:
    e_elec: float = 50e-9
    eps_amp: float = 100e-12
    data_bits: int = 2000
    ctrl_bits: int = 64

    def __post_init__(self):
        if min(self.e_elec, self.eps_amp, self.data_bits, self.ctrl_bits) <= 0:
            raise ValueError("radio model constants must be positive")
        if self.ctrl_bits > self.data_bits:
            raise ValueError("ctrl_bits must not exceed data_bits")

    @classmethod
    def from_config(cls, cfg) -> "RadioModel":
        return cls(cfg.e_elec_j_per_bit, cfg.eps_amp_j_per_bit_m2,
                   cfg.data_packet_bits, cfg.ctrl_packet_bits)


def tx_cost(m: RadioModel, bits: float, d: float) -> float:
    """Energy to transmit ``bits`` over ``d`` meters: e_elec*k + eps_amp*k*d^2."""
    return m.e_elec * bits + m.eps_amp * bits * d * d


def rx_cost(m: RadioModel, bits: float) -> float:
    return m.e_elec * bits


@dataclass
class Battery:
    initial: float
    residual: float = None
    alive: bool = True
    spent: dict = field(default_factory=lambda: dict.fromkeys(CATEGORIES, 0.0))

    def __post_init__(self):
        if self.residual is None:
            self.residual = self.initial
        if not 0 <= self.residual <= self.initial:
            raise ValueError("residual must lie in [0, initial]")

    @property
    def spent_tx(self):
        return self.spent["tx"]

    @property
    def spent_rx(self):
        return self.spent["rx"]

    @property
    def spent_ctrl(self):
        return self.spent["ctrl"]

    @property
    def spent_total(self):
        return self.spent["tx"] + self.spent["rx"] + self.spent["ctrl"]


def drain(b: Battery, amount: float, category: str) -> bool:
    """Spend ``amount`` joules from ``b`` and book it under ``category``.

    Returns True when the action went through. If the battery cannot cover the
    amount nothing is spent, the node is marked dead and False is returned.
    Spending down to exactly zero succeeds, after which the node is dead.
    """
    if not b.alive:
        raise DeadBatteryError("attempted to drain a dead battery")
    if amount < 0:
        raise ValueError("amount must be non-negative")
    if category not in b.spent:
        raise ValueError(f"unknown energy category {category!r}")
    if amount > b.residual:
        b.alive = False
        return False
    b.residual -= amount
    b.spent[category] += amount
    if b.residual <= 0.0:
        b.residual = 0.0
        b.alive = False
    return True
