"""Elementwise-nonnegative local imaginary-time propagators.

A stoquastic term H_i yields G_i = exp(-tau H_i) with nonnegative
entries. G_i splits into irreducible blocks (connected components of its
nonzero pattern), each carrying a unique largest eigenvalue with a
strictly positive eigenvector; those Perron pairs drive the Monte Carlo
transition probabilities. Propagators are stored normalized by their
largest eigenvalue so the spectrum sits in (0, 1], with the scale factor
logged for downstream energy bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .errors import NumericError, ScalingError, StoquasticityError
from .hamiltonian import HamiltonianTerm

CLAMP_TOL = 1e-14
PATTERN_TOL = 1e-12


@dataclass(frozen=True)
class IrreducibleBlock:
    """One irreducible diagonal block: its local states, matrix and Perron pair."""

    states: tuple[int, ...]
    matrix: np.ndarray
    perron_value: float
    perron_vector: np.ndarray


@dataclass(frozen=True)
class NonnegativePropagator:
    """Normalized nonnegative propagator on a small support, with block data.

    ``matrix`` is the normalized propagator (largest eigenvalue 1 within
    roundoff); ``normalization`` is the factor divided out, so
    raw = normalization * matrix and log_normalization = log(normalization).
    """

    support: tuple[int, ...]
    matrix: np.ndarray
    blocks: tuple[IrreducibleBlock, ...]
    normalization: float
    tau: float
    term: Optional[HamiltonianTerm] = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def log_normalization(self) -> float:
        return float(np.log(self.normalization))

    @property
    def block_of_state(self) -> np.ndarray:
        out = np.full(self.dim, -1, dtype=int)
        for b, blk in enumerate(self.blocks):
            out[list(blk.states)] = b
        return out

    def raw_matrix(self) -> np.ndarray:
        return self.normalization * self.matrix


def _clamp_nonnegative(mat: np.ndarray) -> np.ndarray:
    low = float(np.min(mat))
    if low < -CLAMP_TOL:
        raise StoquasticityError(f"propagator has a negative entry {low:.3e}; generating term is not stoquastic")
    out = np.array(mat)
    out[out < 0.0] = 0.0
    return out


def decompose_blocks(mat: np.ndarray) -> tuple[IrreducibleBlock, ...]:
    """Split a nonnegative matrix into its irreducible diagonal blocks.

    Blocks are the connected components of the symmetrized nonzero
    pattern (entries above a relative threshold); each gets its Perron
    pair. The union of block state sets covers every index.
    """
    g = _clamp_nonnegative(np.asarray(mat, dtype=float))
    d = g.shape[0]
    scale = float(np.max(g))
    pattern = (g > PATTERN_TOL * scale) if scale > 0 else np.zeros_like(g, dtype=bool)
    pattern = pattern | pattern.T
    np.fill_diagonal(pattern, True)
    labels = np.full(d, -1, dtype=int)
    comps: list[list[int]] = []
    for start in range(d):
        if labels[start] >= 0:
            continue
        stack = [start]
        labels[start] = len(comps)
        members = [start]
        while stack:
            i = stack.pop()
            for j in np.nonzero(pattern[i])[0]:
                if labels[j] < 0:
                    labels[j] = labels[start]
                    stack.append(int(j))
                    members.append(int(j))
        comps.append(sorted(members))
    blocks = []
    for members in comps:
        sub = g[np.ix_(members, members)]
        lam, vec = perron_pair(sub)
        blocks.append(IrreducibleBlock(states=tuple(members), matrix=sub, perron_value=lam, perron_vector=vec))
    return tuple(blocks)


def perron_pair(block: np.ndarray) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and strictly positive unit eigenvector of an
    irreducible nonnegative block."""
    b = np.asarray(block, dtype=float)
    if b.shape == (1, 1):
        return float(b[0, 0]), np.array([1.0])
    if np.max(np.abs(b - b.T)) <= 1e-12 * max(1.0, float(np.max(np.abs(b)))):
        w, v = np.linalg.eigh(b)
        lam = float(w[-1])
        vec = v[:, -1]
    else:
        w, v = np.linalg.eig(b)
        idx = int(np.argmax(w.real))
        lam = float(w[idx].real)
        vec = v[:, idx].real
    if vec.sum() < 0:
        vec = -vec
    vec = vec / np.linalg.norm(vec)
    if np.min(vec) <= 0:
        raise NumericError("Perron vector is not strictly positive; block may be reducible")
    residual = float(np.linalg.norm(b @ vec - lam * vec))
    if residual > 1e-10 * max(1.0, abs(lam)):
        raise NumericError(f"Perron pair residual {residual:.3e} too large")
    return lam, vec


def local_propagator(term: HamiltonianTerm, tau: float) -> NonnegativePropagator:
    """exp(-tau * term) normalized by its largest eigenvalue.

    The term must be stoquastic; tau >= 0. For a term with lambda_min = 0
    the normalization is 1 up to roundoff.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    if not term.is_stoquastic():
        raise StoquasticityError(f"term on support {term.support} is not stoquastic")
    mat = np.asarray(term.matrix, dtype=float)
    w, v = np.linalg.eigh(mat)
    raw = (v * np.exp(-tau * w)) @ v.T
    raw = _clamp_nonnegative(raw)
    normalization = float(np.exp(-tau * w[0]))
    g = raw / normalization
    blocks = decompose_blocks(g)
    return NonnegativePropagator(
        support=term.support,
        matrix=g,
        blocks=blocks,
        normalization=normalization,
        tau=tau,
        term=term,
    )


def symmetrize(g: np.ndarray, parity: Literal["odd", "even"]) -> np.ndarray:
    """Hermitian nonnegative extension of a possibly non-Hermitian nonnegative matrix.

    Adds one ancilla (the trailing tensor factor). Odd positions use
    G (x) |0><1| + G^T (x) |1><0|, even positions the transpose-swapped
    variant, so that the ancilla-sandwiched product reproduces the
    original factor string. Eigenvalue magnitudes equal the singular
    values of g, which must lie in (0, 1].
    """
    mat = _clamp_nonnegative(np.asarray(g, dtype=float))
    smax = float(np.linalg.norm(mat, 2))
    if smax > 1.0 + 1e-12:
        raise ScalingError(f"singular values of the propagator exceed 1 (max {smax:.6f})")
    ket01 = np.array([[0.0, 1.0], [0.0, 0.0]])
    ket10 = ket01.T
    if parity == "odd":
        return np.kron(mat, ket01) + np.kron(mat.T, ket10)
    if parity == "even":
        return np.kron(mat, ket10) + np.kron(mat.T, ket01)
    raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")


def ancilla_sandwich(f_list: list[np.ndarray]) -> np.ndarray:
    """<0|_a F_1 ... F_L |L mod 2>_a for matrices carrying one trailing ancilla."""
    if not f_list:
        raise ValueError("need at least one factor")
    prod = f_list[0]
    for f in f_list[1:]:
        prod = prod @ f
    d = prod.shape[0] // 2
    blocks = prod.reshape(d, 2, d, 2)
    return blocks[:, 0, :, len(f_list) % 2]
