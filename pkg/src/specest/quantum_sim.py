"""Dense statevector simulation of the one-ancilla overlap test.

The ancilla measurement distribution is known in closed form,
Pr(m=0 | theta) = 1/2 +/- (1/2) Re/Im <Phi| G_1 ... G_L |Phi>, so the
ancilla itself is never materialized: the register overlap is computed
exactly and outcomes are drawn from the induced Bernoulli law. This is
statistically identical to simulating the full circuit and is of course
exponential in n by design (testing substrate, n capped).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnitarityError
from .hamiltonian import LocalHamiltonian, ShiftedHamiltonian
from .linalg import apply_local_matrix, check_dense_cap
from .signals import EnergyMap, Signal, SignalKind, poles_from_energies
from .trotter import TrotterPlan, apply_plan

STATEVECTOR_CAP = 14


@dataclass
class StateVector:
    """Normalized dense n-qubit state; qubit 0 is the most significant bit."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        check_dense_cap(self.n, STATEVECTOR_CAP)
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.n,):
            raise ValueError(f"amplitude vector has shape {amps.shape}, expected ({2**self.n},)")
        self.amplitudes = amps

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def apply_local_unitary(psi: StateVector, u: np.ndarray, support: tuple[int, ...]) -> StateVector:
    """Apply a unitary on ``support``; raises if u is not unitary within 1e-10."""
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    if np.max(np.abs(u.conj().T @ u - np.eye(d))) > 1e-10:
        raise UnitarityError("matrix is not unitary within 1e-10")
    return StateVector(psi.n, apply_local_matrix(psi.amplitudes, u, support, psi.n))


def overlap_of_sequence(phi: np.ndarray, g_seq: list[tuple[np.ndarray, tuple[int, ...]]], n: int) -> complex:
    """<Phi| G_1 G_2 ... G_L |Phi> with factors listed left to right."""
    out = np.asarray(phi, dtype=complex)
    for mat, support in reversed(g_seq):
        out = apply_local_matrix(out, np.asarray(mat, dtype=complex), support, n)
    return complex(np.vdot(phi, out))


def prob_from_overlap(overlap: complex, theta: float) -> float:
    if abs(theta) < 1e-12:
        p = 0.5 + 0.5 * overlap.real
    elif abs(theta - np.pi / 2) < 1e-12:
        p = 0.5 - 0.5 * overlap.imag
    else:
        raise ValueError("theta must be 0 or pi/2")
    return float(min(max(p, 0.0), 1.0))


def hadamard_test_prob(
    phi: np.ndarray, g_seq: list[tuple[np.ndarray, tuple[int, ...]]], theta: float, n: int
) -> float:
    """Ancilla outcome-0 probability of the overlap test at theta in {0, pi/2}.

    The ancilla is not simulated; its measurement law is fixed by the
    register overlap.
    """
    return prob_from_overlap(overlap_of_sequence(phi, g_seq, n), theta)


def overlap_after_plan(phi: np.ndarray, h: LocalHamiltonian | ShiftedHamiltonian, plan: TrotterPlan) -> complex:
    """Exact <Phi| (plan product) |Phi> on the dense register."""
    return complex(np.vdot(phi, apply_plan(plan, h, phi)))


def estimate_from_counts(n0_theta0: int, n0_theta_half: int, num_samples: int) -> complex:
    """Unbiased overlap estimator from the two outcome-0 counts."""
    re = 2.0 * n0_theta0 / num_samples - 1.0
    im_term = 2.0 * n0_theta_half / num_samples - 1.0
    return complex(re, -im_term)


def estimate_gR(
    phi: np.ndarray,
    h: LocalHamiltonian | ShiftedHamiltonian,
    plan: TrotterPlan,
    num_samples: int,
    rng: np.random.Generator,
) -> complex:
    """Sampled overlap-test estimate of the Trotterized real-time signal point.

    Runs ``num_samples`` shots at each of theta = 0 and theta = pi/2.
    """
    overlap = overlap_after_plan(phi, h, plan)
    p0 = prob_from_overlap(overlap, 0.0)
    p1 = prob_from_overlap(overlap, np.pi / 2)
    n0 = int(rng.binomial(num_samples, p0))
    n1 = int(rng.binomial(num_samples, p1))
    return estimate_from_counts(n0, n1, num_samples)


def exact_signal(
    phi: np.ndarray,
    h_dense: np.ndarray,
    step: float,
    K: int,
    kind: SignalKind,
    energy_map: EnergyMap | None = None,
) -> Signal:
    """Machine-precision signal from dense eigendecomposition.

    g(k) = sum_j |<psi_j|Phi>|^2 z_j^k with z_j = exp(-i E_j step),
    exp(-E_j step), or 1 - E_j/(2 pi) (step ignored for the last kind).
    """
    w, v = np.linalg.eigh(h_dense)
    weights = np.abs(v.conj().T @ phi) ** 2
    if kind == "one_minus_h":
        z = poles_from_energies(w, kind)
    else:
        z = poles_from_energies(w * step, kind)
    k = np.arange(K + 1)
    vals = (weights[None, :] * z[None, :] ** k[:, None]).sum(axis=1)
    if kind != "real_time":
        vals = vals.real
    if energy_map is None:
        energy_map = EnergyMap(step=1.0 if kind == "one_minus_h" else step)
    return Signal(values=vals, kind=kind, energy_map=energy_map)
