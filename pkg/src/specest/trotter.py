"""Trotterization plans: ordered local-propagation schedules for
exp(-itH) and exp(-tau H), plus the first-order error bound.

A plan is a sequence of stages (unit index, coefficient); a unit is one
commuting group of terms ("gamma" scheme) or a single term ("per_term"
scheme). Coefficients are fractions of the total duration, so they sum
to 1 per unit over the whole plan.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.linalg import expm

from .hamiltonian import LocalHamiltonian, ShiftedHamiltonian
from .linalg import apply_local_matrix, check_dense_cap, commutator_norm, embed_operator

Mode = Literal["real_time", "imaginary_time"]
Scheme = Literal["gamma", "per_term"]


@dataclass(frozen=True)
class TrotterPlan:
    order: int
    M: int
    mode: Mode
    duration: float
    scheme: Scheme
    units: tuple[tuple[int, ...], ...]
    stages: tuple[tuple[int, float], ...]
    L: int

    def term_schedule(self, h: LocalHamiltonian) -> list[tuple[int, float]]:
        """Expand stages into (term index, absolute time coefficient) pairs.

        Within a unit the terms commute, so the fixed ascending order is
        exact. The absolute coefficient multiplies the term Hamiltonian
        in the exponent: exp(-(i) * coeff * H_term).
        """
        out = []
        for unit, coeff in self.stages:
            for term_idx in self.units[unit]:
                out.append((term_idx, self.duration * coeff))
        return out


def _units_for(h: LocalHamiltonian, scheme: Scheme) -> tuple[tuple[int, ...], ...]:
    if scheme == "gamma":
        return h.groups
    if scheme == "per_term":
        return tuple((i,) for i in range(h.num_terms))
    raise ValueError(f"unknown scheme {scheme!r}")


def _merge_adjacent(stages: list[tuple[int, float]]) -> list[tuple[int, float]]:
    merged: list[tuple[int, float]] = []
    for unit, coeff in stages:
        if merged and merged[-1][0] == unit:
            merged[-1] = (unit, merged[-1][1] + coeff)
        else:
            merged.append((unit, coeff))
    return merged


def _suzuki_step(p: int, num_units: int, h: float) -> list[tuple[int, float]]:
    """One step of the recursive symmetric product formula at size ``h``."""
    if p == 2:
        fwd = [(u, h / 2) for u in range(num_units)]
        return fwd + fwd[::-1]
    u_p = 1.0 / (4.0 - 4.0 ** (1.0 / (p - 1)))
    inner = _suzuki_step(p - 2, num_units, u_p * h)
    middle = _suzuki_step(p - 2, num_units, (1.0 - 4.0 * u_p) * h)
    return inner + inner + middle + inner + inner


def first_order_plan(
    h: LocalHamiltonian | ShiftedHamiltonian,
    duration: float,
    M: int,
    mode: Mode,
    scheme: Scheme = "gamma",
) -> TrotterPlan:
    """M repetitions of one sweep through the units, each at weight 1/M."""
    base = h.base if isinstance(h, ShiftedHamiltonian) else h
    if M < 1:
        raise ValueError("M must be >= 1")
    units = _units_for(base, scheme)
    stages = [(u, 1.0 / M) for _ in range(M) for u in range(len(units))]
    return TrotterPlan(
        order=1,
        M=M,
        mode=mode,
        duration=duration,
        scheme=scheme,
        units=units,
        stages=tuple(stages),
        L=M * base.num_terms,
    )


def suzuki_plan(
    h: LocalHamiltonian | ShiftedHamiltonian,
    duration: float,
    M: int,
    p: int,
    mode: Mode,
    scheme: Scheme = "gamma",
) -> TrotterPlan:
    """Even-order recursive symmetric product formula.

    The nominal local-propagator count is L = 2 M N 5^(p/2 - 1); adjacent
    stages on the same unit inside one step are merged in the executable
    schedule (the standard midpoint contraction), which does not change
    the product.
    """
    base = h.base if isinstance(h, ShiftedHamiltonian) else h
    if M < 1:
        raise ValueError("M must be >= 1")
    if p < 2 or p % 2 != 0:
        raise ValueError(f"only even orders p >= 2 are supported, got p={p}")
    units = _units_for(base, scheme)
    step = _merge_adjacent(_suzuki_step(p, len(units), 1.0 / M))
    stages = [s for _ in range(M) for s in step]
    return TrotterPlan(
        order=p,
        M=M,
        mode=mode,
        duration=duration,
        scheme=scheme,
        units=units,
        stages=tuple(stages),
        L=2 * M * base.num_terms * 5 ** (p // 2 - 1),
    )


@dataclass(frozen=True)
class TrotterErrorBound:
    value: float
    valid: bool
    commutator_sum: float
    conditions: dict


def _unit_commutator_sum(h: LocalHamiltonian, scheme: Scheme, dense_cap: int = 12) -> float:
    """Sum over ordered unit pairs of the spectral norm of their commutator.

    For the gamma scheme this needs the group sums; computed globally
    dense below the cap and bounded by the pairwise term sum above it.
    """
    units = _units_for(h, scheme)
    if scheme == "per_term" or h.n > dense_cap:
        total = 0.0
        for a in range(len(units)):
            for b in range(a + 1, len(units)):
                for i in units[a]:
                    for j in units[b]:
                        ti, tj = h.terms[i], h.terms[j]
                        total += commutator_norm(np.asarray(ti.matrix), ti.support, np.asarray(tj.matrix), tj.support)
        return total
    check_dense_cap(h.n, dense_cap)
    dense_units = []
    for unit in units:
        acc = np.zeros((2**h.n, 2**h.n), dtype=complex)
        for i in unit:
            t = h.terms[i]
            acc += embed_operator(np.asarray(t.matrix, dtype=complex), t.support, h.n)
        dense_units.append(acc)
    total = 0.0
    for a in range(len(dense_units)):
        for b in range(a + 1, len(dense_units)):
            comm = dense_units[a] @ dense_units[b] - dense_units[b] @ dense_units[a]
            total += float(np.linalg.norm(comm, 2))
    return total


def first_order_error_bound(
    h: LocalHamiltonian | ShiftedHamiltonian,
    duration: float,
    M: int,
    mode: Mode,
    scheme: Scheme = "gamma",
) -> TrotterErrorBound:
    """Bound on |<Phi| exact - Trotterized |Phi>| for the first-order scheme.

    Real time: sum_{u'<u} ||[H_u', H_u]|| t^2 / (2M). Imaginary time
    carries an extra factor 3e^2 and is only valid when exp(-tau H/M) and
    every exp(-tau H_u/M) are contractions and tau (sum_u ||H_u||)/M <= 1;
    the returned flag reports whether those conditions hold.
    """
    base = h.base if isinstance(h, ShiftedHamiltonian) else h
    csum = _unit_commutator_sum(base, scheme)
    value = csum * duration**2 / (2.0 * M)
    conditions: dict = {}
    valid = True
    if mode == "imaginary_time":
        value *= 3.0 * np.e**2
        units = _units_for(base, scheme)
        unit_extremes = []
        for u in range(len(units)):
            if scheme == "gamma":
                lo, hi = base.group_extremes(u)
            else:
                ev = base.terms[units[u][0]].eigenvalues()
                lo, hi = float(ev[0]), float(ev[-1])
            unit_extremes.append((lo, hi))
        units_psd = all(lo >= -1e-12 for lo, _ in unit_extremes)
        # lambda_min(H) >= sum of unit minima certifies the global contraction
        global_psd = sum(lo for lo, _ in unit_extremes) >= -1e-12
        norm_sum = sum(max(abs(lo), abs(hi)) for lo, hi in unit_extremes)
        step_small = duration * norm_sum / M <= 1.0 + 1e-12
        conditions = {
            "unit_propagators_contractive": units_psd,
            "global_propagator_contractive": global_psd,
            "step_norm_at_most_one": step_small,
            "step_norm": duration * norm_sum / M,
        }
        valid = units_psd and global_psd and step_small
    return TrotterErrorBound(value=float(value), valid=valid, commutator_sum=float(csum), conditions=conditions)


class LocalFactorCache:
    """Dense local exponentials for (term, coefficient) pairs of a plan."""

    def __init__(self, h: LocalHamiltonian, mode: Mode):
        self.h = h
        self.mode = mode
        self._cache: dict[tuple[int, float], np.ndarray] = {}

    def factor(self, term_idx: int, coeff: float) -> np.ndarray:
        key = (term_idx, coeff)
        if key not in self._cache:
            mat = np.asarray(self.h.terms[term_idx].matrix, dtype=complex)
            exponent = (-1j if self.mode == "real_time" else -1.0) * coeff * mat
            self._cache[key] = expm(exponent)
        return self._cache[key]


def apply_plan(plan: TrotterPlan, h: LocalHamiltonian | ShiftedHamiltonian, vec: np.ndarray) -> np.ndarray:
    """Apply the plan product G_1 G_2 ... G_L to a dense state vector.

    Schedule order is factor order, left to right, so the last schedule
    entry hits the ket first. This matches the path sampler, which walks
    the schedule forward from the bra side.
    """
    base = h.base if isinstance(h, ShiftedHamiltonian) else h
    cache = LocalFactorCache(base, plan.mode)
    out = np.asarray(vec, dtype=complex)
    for term_idx, coeff in reversed(plan.term_schedule(base)):
        out = apply_local_matrix(out, cache.factor(term_idx, coeff), base.terms[term_idx].support, base.n)
    return out


def plan_matrix(plan: TrotterPlan, h: LocalHamiltonian | ShiftedHamiltonian) -> np.ndarray:
    """Dense matrix of the full plan product (testing oracle; capped n)."""
    base = h.base if isinstance(h, ShiftedHamiltonian) else h
    check_dense_cap(base.n, 10)
    return apply_plan(plan, base, np.eye(2**base.n, dtype=complex))


def trotterized_overlap(
    plan: TrotterPlan, h: LocalHamiltonian | ShiftedHamiltonian, phi: np.ndarray
) -> complex:
    """<Phi| (plan product) |Phi> evaluated densely."""
    return complex(np.vdot(phi, apply_plan(plan, h, phi)))
