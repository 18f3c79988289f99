"""Shared signal containers and the pole -> physical-energy bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

SignalKind = Literal["real_time", "imaginary_time", "one_minus_h"]


@dataclass(frozen=True)
class EnergyMap:
    """Inverts recovered per-sample rates/phases to physical energies.

    E_physical = E_raw / step - rate_correction + shift, where E_raw is
    the per-sample decay rate or phase extracted from a pole. ``shift``
    absorbs Hamiltonian term shifts; ``rate_correction`` absorbs any
    propagator normalization folded out of the signal (per unit time).
    """

    step: float = 1.0
    shift: float = 0.0
    rate_correction: float = 0.0

    def to_physical(self, e_raw: np.ndarray) -> np.ndarray:
        return np.asarray(e_raw) / self.step - self.rate_correction + self.shift

    def from_physical(self, e_phys: np.ndarray) -> np.ndarray:
        return (np.asarray(e_phys) - self.shift + self.rate_correction) * self.step


@dataclass(frozen=True)
class Signal:
    """Sampled signal values y(k), k = 0..K, with conversion metadata."""

    values: np.ndarray
    kind: SignalKind
    energy_map: EnergyMap = field(default_factory=EnergyMap)

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("signal needs a one-dimensional, nonempty value array")
        if self.kind in ("imaginary_time", "one_minus_h") and np.iscomplexobj(vals):
            if np.max(np.abs(vals.imag)) > 1e-12:
                raise ValueError(f"{self.kind} signals must be real-valued")
            vals = vals.real
        object.__setattr__(self, "values", vals)

    @property
    def K(self) -> int:
        return len(self.values) - 1

    @property
    def step(self) -> float:
        return self.energy_map.step


def signal_from_model(
    energies: np.ndarray,
    coefficients: np.ndarray,
    K: int,
    kind: SignalKind,
    energy_map: EnergyMap | None = None,
) -> Signal:
    """Noiseless signal sum_j c_j z_j^k from raw (per-sample) energies.

    Pole model per kind: exp(-iE), exp(-E), or 1 - E/(2 pi).
    """
    energy_map = energy_map or EnergyMap()
    e = np.asarray(energies, dtype=float)
    c = np.asarray(coefficients, dtype=float)
    z = poles_from_energies(e, kind)
    k = np.arange(K + 1)
    vals = (c[None, :] * z[None, :] ** k[:, None]).sum(axis=1)
    if kind != "real_time":
        vals = vals.real
    return Signal(values=vals, kind=kind, energy_map=energy_map)


def poles_from_energies(energies: np.ndarray, kind: SignalKind) -> np.ndarray:
    e = np.asarray(energies, dtype=float)
    if kind == "real_time":
        return np.exp(-1j * e)
    if kind == "imaginary_time":
        return np.exp(-e)
    if kind == "one_minus_h":
        return 1.0 - e / (2.0 * np.pi)
    raise ValueError(f"unknown signal kind {kind!r}")
