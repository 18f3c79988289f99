"""Signal post-processing: Hankel construction, ESPRIT and the matrix
pencil variant, pole-to-energy conversion, matching distance, and the
closed-form recovery-bound predicates for the three signal models.

The pencil parameter is fixed at L = K/2 for the estimation path; the
Hankel builder accepts a general L for diagnostics only.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .errors import EmptyModelError, RankError
from .signals import EnergyMap, SignalKind

BoundModel = Literal["oscillatory", "exp_decay", "linear_decay"]

_BRUTE_FORCE_LIMIT = 8


@dataclass(frozen=True)
class SpectralEstimate:
    """Recovered poles with the SVD bookkeeping of the run that produced them."""

    poles: np.ndarray
    singular_values: np.ndarray
    S_effective: int
    method: str
    truncation_factor: Optional[float] = None
    kind: Optional[SignalKind] = None
    energies: Optional[np.ndarray] = None

    def with_energies(self, kind: SignalKind, energy_map: EnergyMap | None = None) -> "SpectralEstimate":
        e = poles_to_energies(self.poles, kind, energy_map)
        return SpectralEstimate(
            poles=self.poles,
            singular_values=self.singular_values,
            S_effective=self.S_effective,
            method=self.method,
            truncation_factor=self.truncation_factor,
            kind=kind,
            energies=e,
        )

    def to_json(self) -> str:
        doc = {
            "poles": [{"re": float(z.real), "im": float(z.imag)} for z in self.poles],
            "energies": None if self.energies is None else [float(e) for e in self.energies],
            "singular_values": [float(s) for s in self.singular_values],
            "S_effective": int(self.S_effective),
            "TF": self.truncation_factor,
            "kind": self.kind,
            "method": self.method,
        }
        return json.dumps(doc)


def hankel(y: np.ndarray, L: int) -> np.ndarray:
    """(L+1) x (K-L+1) Hankel matrix with entry (i, j) = y(i + j)."""
    y = np.asarray(y)
    K = len(y) - 1
    if L < 0 or L > K:
        raise ValueError(f"L={L} out of range for a signal with K={K}")
    return scipy.linalg.hankel(y[: L + 1], y[L:])


def _sorted_poles(poles: np.ndarray) -> np.ndarray:
    order = np.lexsort((np.angle(poles), -np.abs(poles)))
    return poles[order]


def esprit(y: np.ndarray, S: int) -> SpectralEstimate:
    """Shift-invariance pole extraction from the rank-S left singular subspace.

    Needs K = len(y) - 1 even and S <= K/2 (equivalently K + 1 >= 2S).
    """
    y = np.asarray(y)
    K = len(y) - 1
    if K < 2 or K % 2 != 0:
        raise ValueError(f"signal length must give an even K >= 2, got K={K}")
    L = K // 2
    if S < 1:
        raise ValueError("S must be >= 1")
    if S > L:
        raise RankError(f"model order S={S} exceeds the pencil size L={L} (need K+1 >= 2S)")
    h = hankel(y, L)
    u, s, _ = np.linalg.svd(h)
    poles = _poles_from_subspace(u[:, :S], L)
    return SpectralEstimate(poles=poles, singular_values=s, S_effective=S, method="esprit")


def _poles_from_subspace(u_s: np.ndarray, L: int) -> np.ndarray:
    u0 = u_s[:L]
    u1 = u_s[1 : L + 1]
    psi = np.linalg.pinv(u0, rcond=1e-12) @ u1
    return _sorted_poles(np.linalg.eigvals(psi))


def filtered_esprit(y: np.ndarray, truncation_factor: float) -> SpectralEstimate:
    """ESPRIT with the model order set by singular-value thresholding.

    Retains the singular values >= TF * sigma_max; their count becomes
    the effective model order.
    """
    if not 0.0 < truncation_factor < 1.0:
        raise ValueError("truncation factor must lie in (0, 1)")
    y = np.asarray(y)
    K = len(y) - 1
    if K < 2 or K % 2 != 0:
        raise ValueError(f"signal length must give an even K >= 2, got K={K}")
    L = K // 2
    h = hankel(y, L)
    u, s, _ = np.linalg.svd(h)
    if s[0] <= 0.0:
        raise EmptyModelError("all singular values vanish; no components to retain")
    s_eff = int(np.sum(s >= truncation_factor * s[0]))
    if s_eff > L:
        raise RankError(f"{s_eff} singular values above threshold exceed the pencil size L={L}")
    poles = _poles_from_subspace(u[:, :s_eff], L)
    return SpectralEstimate(
        poles=poles,
        singular_values=s,
        S_effective=s_eff,
        method="esprit",
        truncation_factor=truncation_factor,
    )


def matrix_pencil(
    y: np.ndarray, S: Optional[int] = None, truncation_factor: Optional[float] = None
) -> SpectralEstimate:
    """Pole extraction from the column-shifted pair of the rank-filtered Hankel.

    Deleting the last/first column of the cleaned Hankel gives (Y1, Y2);
    the poles are the dominant eigenvalues of pinv(Y1) Y2. With
    K + 1 < 2S the available rank forces fewer poles, which then resemble
    averages of the true ones.
    """
    if (S is None) == (truncation_factor is None):
        raise ValueError("give exactly one of S or truncation_factor")
    y = np.asarray(y)
    K = len(y) - 1
    if K < 2 or K % 2 != 0:
        raise ValueError(f"signal length must give an even K >= 2, got K={K}")
    L = K // 2
    h = hankel(y, L)
    u, s, vh = np.linalg.svd(h)
    if truncation_factor is not None:
        if s[0] <= 0.0:
            raise EmptyModelError("all singular values vanish; no components to retain")
        s_eff = int(np.sum(s >= truncation_factor * s[0]))
    else:
        s_eff = int(S)  # type: ignore[arg-type]
    if s_eff < 1:
        raise ValueError("model order must be >= 1")
    if s_eff > L:
        raise RankError(f"model order {s_eff} exceeds the pencil size L={L}")
    clean = (u[:, :s_eff] * s[:s_eff]) @ vh[:s_eff]
    y1 = clean[:, :-1]
    y2 = clean[:, 1:]
    a = np.linalg.pinv(y1, rcond=1e-12) @ y2
    ev = np.linalg.eigvals(a)
    top = ev[np.argsort(-np.abs(ev))[:s_eff]]
    return SpectralEstimate(
        poles=_sorted_poles(top),
        singular_values=s,
        S_effective=s_eff,
        method="matrix_pencil",
        truncation_factor=truncation_factor,
    )


def poles_to_energies(
    poles: np.ndarray, kind: SignalKind, energy_map: EnergyMap | None = None
) -> np.ndarray:
    """Convert poles to physical energies for the given signal model.

    Raw conversion: real_time -> Re(i log z) folded into [0, 2pi);
    imaginary_time -> -Re(log z); one_minus_h -> 2pi (1 - Re z). The
    energy map then rescales to physical units.
    """
    z = np.asarray(poles, dtype=complex)
    energy_map = energy_map or EnergyMap()
    if kind in ("real_time", "imaginary_time") and np.any(np.abs(z) == 0.0):
        raise ValueError("pole at 0 has no finite logarithm")
    if kind == "real_time":
        e_raw = np.mod(-np.angle(z), 2.0 * np.pi)
    elif kind == "imaginary_time":
        e_raw = -np.log(np.abs(z))
        if np.any(np.abs(np.angle(z)) > 0.1):
            warnings.warn("pole with |Im log z| > 0.1 treated as a pure decay", stacklevel=2)
    elif kind == "one_minus_h":
        e_raw = 2.0 * np.pi * (1.0 - z.real)
    else:
        raise ValueError(f"unknown signal kind {kind!r}")
    return energy_map.to_physical(e_raw)


def _bottleneck_assignment(cost: np.ndarray) -> float:
    """Smallest threshold T admitting a perfect matching on edges <= T."""
    values = np.unique(cost)
    lo, hi = 0, len(values) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        feasible = linear_sum_assignment(cost > values[mid])
        if cost[feasible].max() <= values[mid]:
            hi = mid
        else:
            lo = mid + 1
    return float(values[lo])


def matching_distance(e_true: np.ndarray, e_est: np.ndarray) -> float:
    """Optimal matching distance (1/2pi) min over pairings of the max mismatch.

    With unequal lengths the shorter list is matched injectively into the
    longer and only matched pairs are scored; ``matching_details`` also
    reports the unmatched count.
    """
    return matching_details(e_true, e_est)[0]


def matching_details(e_true: np.ndarray, e_est: np.ndarray) -> tuple[float, int]:
    a = np.asarray(e_true, dtype=float)
    b = np.asarray(e_est, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("matching needs nonempty lists")
    short, long_ = (a, b) if a.size <= b.size else (b, a)
    unmatched = long_.size - short.size
    cost = np.abs(short[:, None] - long_[None, :])
    if short.size <= _BRUTE_FORCE_LIMIT and long_.size <= _BRUTE_FORCE_LIMIT:
        best = min(
            max(cost[i, p] for i, p in enumerate(perm))
            for perm in itertools.permutations(range(long_.size), short.size)
        )
    else:
        best = _bottleneck_assignment(cost)
    return float(best) / (2.0 * np.pi), unmatched


def coverage_distance(e_true: np.ndarray, e_est: np.ndarray) -> float:
    """(1/2pi) max over true energies of the distance to the nearest estimate.

    Large values mean some true energy has no estimate near it; used to
    certify non-recovery in under-determined settings.
    """
    a = np.asarray(e_true, dtype=float)
    b = np.asarray(e_est, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("coverage needs nonempty lists")
    return float(np.max(np.min(np.abs(a[:, None] - b[None, :]), axis=1))) / (2.0 * np.pi)


def eigenvalue_gap(energies: np.ndarray) -> float:
    """(1/2pi) min pairwise separation of the energy list."""
    e = np.asarray(energies, dtype=float)
    if e.size < 2:
        raise ValueError("gap needs at least two energies")
    e_sorted = np.sort(e)
    return float(np.min(np.diff(e_sorted))) / (2.0 * np.pi)


@dataclass(frozen=True)
class RecoveryBoundReport:
    """Noise-condition check and distance bound of one recovery guarantee."""

    model: BoundModel
    condition_lhs: float
    condition_rhs: float
    condition_satisfied: bool
    distance_bound: float
    params: dict


def oscillatory_recovery_bound(
    S: int, C: float, K: int, c_min: float, hankel_noise_norm: float
) -> RecoveryBoundReport:
    """Guarantee for unit-circle poles under a gap >= C/K (C > 2).

    Condition: ||H(eta)|| <= c_min K h1; then the energy matching
    distance is at most ||H(eta)|| / (c_min K) * h2.
    """
    if C <= 2:
        raise ValueError("the constant C must exceed 2")
    if K + 1 < 2 * S:
        raise ValueError("need K + 1 >= 2S")
    slack = 1.0 - 2.0 * C * S / ((C - 1.0) * K)
    if slack <= 0:
        raise ValueError("K too small: 1 - 2CS/((C-1)K) must be positive")
    h1 = (C - 1.0) / (8.0 * np.sqrt(2.0 * S) * C) * np.sqrt(slack)
    h2 = 40.0 * np.sqrt(2.0) * S**2 * (C / (C - 1.0)) ** 1.5 / slack
    rhs = c_min * K * h1
    return RecoveryBoundReport(
        model="oscillatory",
        condition_lhs=float(hankel_noise_norm),
        condition_rhs=float(rhs),
        condition_satisfied=bool(hankel_noise_norm <= rhs),
        distance_bound=float(hankel_noise_norm / (c_min * K) * h2),
        params={"S": S, "C": C, "K": K, "c_min": c_min, "h1": float(h1), "h2": float(h2)},
    )


def _decay_bound(
    model: BoundModel, base: float, extra: float, S: int, gap: float, K: int, c_min: float, noise: float
) -> RecoveryBoundReport:
    if not 0.0 < gap < 1.0:
        raise ValueError("gap must lie in (0, 1)")
    if K % 2 != 0 or K + 1 < 2 * S:
        raise ValueError("need K even and K + 1 >= 2S")
    if K % S != 0:
        raise ValueError("need K to be a multiple of S")
    g1 = base ** (3 * (S - 1)) / (32.0 * S**2)
    g2 = extra * 640.0 * np.sqrt(2.0) * S**5.5 * base ** (-5 * (S - 1))
    rhs = c_min / np.sqrt(K) * g1
    return RecoveryBoundReport(
        model=model,
        condition_lhs=float(noise),
        condition_rhs=float(rhs),
        condition_satisfied=bool(noise <= rhs),
        distance_bound=float(noise / c_min * K**1.5 * g2),
        params={"S": S, "gap": gap, "K": K, "c_min": c_min, "g1": float(g1), "g2": float(g2)},
    )


def exp_decay_recovery_bound(
    S: int, gap: float, K: int, c_min: float, hankel_noise_norm: float
) -> RecoveryBoundReport:
    """Guarantee for poles exp(-E) with E in [0, 2pi) and normalized gap < 1.

    Condition: ||H(eta)|| <= c_min K^(-1/2) g1; distance bound
    ||H(eta)|| c_min^(-1) K^(3/2) g2. The base constant exp(-2pi) pi gap
    makes the bound decay exponentially with S.
    """
    base = np.exp(-2.0 * np.pi) * np.pi * gap
    return _decay_bound("exp_decay", base, np.exp(2.0 * np.pi), S, gap, K, c_min, hankel_noise_norm)


def linear_decay_recovery_bound(
    S: int, gap: float, K: int, c_min: float, hankel_noise_norm: float
) -> RecoveryBoundReport:
    """Guarantee for poles 1 - E/2pi with E in [0, pi] and normalized gap < 1."""
    return _decay_bound("linear_decay", gap, 1.0, S, gap, K, c_min, hankel_noise_norm)


def hankel_noise_norm_bound(eps_tot: float, K: int) -> float:
    """Certified bound K * eps_tot on the spectral norm of the L = K/2 noise Hankel."""
    return float(K * eps_tot)


def hankel_noise_norms(eta: np.ndarray) -> tuple[float, float]:
    """(spectral, Frobenius) norms of the L = K/2 Hankel of a noise vector."""
    eta = np.asarray(eta)
    K = len(eta) - 1
    if K % 2 != 0:
        raise ValueError("noise vector must have an even K = len - 1")
    h = hankel(eta, K // 2)
    return float(np.linalg.norm(h, 2)), float(np.linalg.norm(h, "fro"))


def vandermonde_matrix(poles: np.ndarray, L: int) -> np.ndarray:
    """(L+1) x S matrix with columns (1, z_j, ..., z_j^L)."""
    z = np.asarray(poles)
    return z[None, :] ** np.arange(L + 1)[:, None]


def gautschi_inf_norm(poles: np.ndarray) -> float:
    """Closed-form induced-infinity norm of the inverse square Vandermonde.

    Requires distinct real positive poles:
    max_i prod_{j != i} (1 + z_j)/|z_j - z_i|.
    Row i of the inverse holds the coefficients of the Lagrange basis
    polynomial at z_i, whose absolute sum is exactly this product.
    """
    z = np.asarray(poles, dtype=float)
    if np.any(z <= 0):
        raise ValueError("Gautschi formula needs real positive poles")
    best = 0.0
    for i in range(len(z)):
        prod = 1.0
        for j in range(len(z)):
            if j != i:
                prod *= (1.0 + z[j]) / abs(z[j] - z[i])
        best = max(best, prod)
    return best


@dataclass(frozen=True)
class VandermondeDiagnostics:
    sigma_min: float
    norm: float
    cond: float
    gautschi: Optional[float]


def vandermonde_diagnostics(poles: np.ndarray, L: int) -> VandermondeDiagnostics:
    """SVD-derived conditioning of V_L, plus the Gautschi value when it applies
    (square matrix with real positive poles)."""
    z = np.asarray(poles)
    if len(np.unique(z)) != len(z):
        raise ValueError("poles must be distinct")
    v = vandermonde_matrix(z, L)
    s = np.linalg.svd(v, compute_uv=False)
    gautschi = None
    if L + 1 == len(z) and np.all(np.isreal(z)) and np.all(z.real > 0):
        gautschi = gautschi_inf_norm(z.real)
    return VandermondeDiagnostics(
        sigma_min=float(s[-1]), norm=float(s[0]), cond=float(s[0] / s[-1]), gautschi=gautschi
    )
