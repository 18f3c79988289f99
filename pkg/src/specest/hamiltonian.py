"""Local Hamiltonians as sums of few-qubit Hermitian terms.

Includes the transverse-field Ising chain builder, a termwise
stoquasticity check, per-term eigenvalue shifts (so every term becomes
positive semidefinite), and a dense exact-diagonalization oracle for
testing at small n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceLimitError
from .linalg import commutator_norm, embed_operator, hermitize

STOQUASTIC_TOL = 1e-12

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


@dataclass(frozen=True)
class HamiltonianTerm:
    """One Hermitian term acting on an ordered list of qubits."""

    support: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        support = tuple(int(q) for q in self.support)
        object.__setattr__(self, "support", support)
        if len(set(support)) != len(support):
            raise ValueError(f"support indices must be distinct, got {support}")
        mat = hermitize(np.asarray(self.matrix, dtype=complex), STOQUASTIC_TOL)
        if np.max(np.abs(mat.imag)) < 1e-14:
            mat = mat.real
        mat = np.array(mat)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        k = len(support)
        if mat.shape != (2**k, 2**k):
            raise ValueError(f"matrix shape {mat.shape} does not match support size {k}")

    @property
    def locality(self) -> int:
        return len(self.support)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def norm(self) -> float:
        return float(np.max(np.abs(self.eigenvalues())))

    def is_stoquastic(self, tol: float = STOQUASTIC_TOL) -> bool:
        off = np.array(self.matrix, dtype=complex)
        np.fill_diagonal(off, 0.0)
        if np.max(np.abs(off.imag)) > tol:
            return False
        return bool(np.max(off.real) <= tol)


@dataclass(frozen=True)
class LocalHamiltonian:
    """Sum of few-qubit terms with a partition into mutually commuting groups."""

    n: int
    terms: tuple[HamiltonianTerm, ...]
    groups: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        for t in terms:
            if any(q < 0 or q >= self.n for q in t.support):
                raise ValueError(f"term support {t.support} outside [0, {self.n})")
        groups = tuple(tuple(g) for g in self.groups) or commuting_groups(terms)
        covered = sorted(i for g in groups for i in g)
        if covered != list(range(len(terms))):
            raise ValueError("groups must partition the term indices")
        object.__setattr__(self, "groups", groups)

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    @property
    def num_groups(self) -> int:
        return len(self.groups)

    def dense(self) -> np.ndarray:
        """Dense 2^n x 2^n assembly (testing oracle; capped)."""
        h = np.zeros((2**self.n, 2**self.n), dtype=complex)
        for t in self.terms:
            h += embed_operator(np.asarray(t.matrix, dtype=complex), t.support, self.n)
        return h.real if np.max(np.abs(h.imag)) < 1e-14 else h

    def group_terms(self, gamma: int) -> list[HamiltonianTerm]:
        return [self.terms[i] for i in self.groups[gamma]]

    def group_extremes(self, gamma: int) -> tuple[float, float]:
        """(lambda_min, lambda_max) of the group sum.

        Exact by construction: within a commuting group of pairwise
        disjoint supports the extremes add; otherwise computed densely on
        the union support.
        """
        members = self.group_terms(gamma)
        supports = [set(t.support) for t in members]
        disjoint = sum(len(s) for s in supports) == len(set().union(*supports)) if supports else True
        if disjoint:
            lo = sum(float(np.min(t.eigenvalues())) for t in members)
            hi = sum(float(np.max(t.eigenvalues())) for t in members)
            return lo, hi
        union = sorted(set().union(*supports))
        pos = {q: i for i, q in enumerate(union)}
        dense = np.zeros((2 ** len(union),) * 2, dtype=complex)
        for t in members:
            dense += embed_operator(np.asarray(t.matrix, dtype=complex), [pos[q] for q in t.support], len(union))
        ev = np.linalg.eigvalsh(dense)
        return float(ev[0]), float(ev[-1])

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "terms": [
                {
                    "support": list(t.support),
                    "matrix": [[float(np.real(v)), float(np.imag(v))] for v in np.asarray(t.matrix, dtype=complex).ravel()],
                }
                for t in self.terms
            ],
            "groups": [list(g) for g in self.groups],
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "LocalHamiltonian":
        doc = json.loads(text)
        terms = []
        for entry in doc["terms"]:
            support = tuple(entry["support"])
            d = 2 ** len(support)
            flat = np.array([complex(re, im) for re, im in entry["matrix"]])
            terms.append(HamiltonianTerm(support, flat.reshape(d, d)))
        return cls(n=int(doc["n"]), terms=tuple(terms), groups=tuple(tuple(g) for g in doc.get("groups", [])))


@dataclass(frozen=True)
class ShiftedHamiltonian:
    """A LocalHamiltonian whose every term has been shifted to lambda_min = 0.

    ``total_shift`` maps estimates back: E_physical = E_shifted + total_shift.
    """

    base: LocalHamiltonian
    per_term_shift: tuple[float, ...]
    total_shift: float

    @property
    def n(self) -> int:
        return self.base.n


def commuting_groups(terms: tuple[HamiltonianTerm, ...]) -> tuple[tuple[int, ...], ...]:
    """Partition term indices into mutually commuting groups by greedy coloring.

    Two terms conflict when their supports overlap and the dense
    commutator on the joint support is nonzero.
    """
    m = len(terms)
    conflict = [[False] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            a, b = terms[i], terms[j]
            if set(a.support) & set(b.support):
                if commutator_norm(np.asarray(a.matrix), a.support, np.asarray(b.matrix), b.support) > 1e-12:
                    conflict[i][j] = conflict[j][i] = True
    groups: list[list[int]] = []
    for i in range(m):
        for g in groups:
            if not any(conflict[i][j] for j in g):
                g.append(i)
                break
        else:
            groups.append([i])
    return tuple(tuple(g) for g in groups)


def build_tfim(n: int, J: float, g: float, boundary: str = "open") -> LocalHamiltonian:
    """Transverse-field Ising chain -J(sum Z_i Z_{i+1} + g sum X_i).

    Each bond (i, i+1) is emitted as the single term -J(Z_i Z_{i+1} + g X_i)
    with the field attached to the first qubit of the bond; for an open
    chain the leftover field -J g X_{n-1} is a standalone term. This
    term splitting keeps every term stoquastic for J > 0, g >= 0 and
    matches the block structure used by the Monte Carlo propagators.
    """
    if n < 2:
        raise ValueError(f"chain needs n >= 2 qubits, got {n}")
    if J <= 0:
        raise ValueError("J must be positive")
    if g < 0:
        raise ValueError("g must be nonnegative")
    if boundary not in ("open", "periodic"):
        raise ValueError(f"unknown boundary {boundary!r}")
    zz = np.kron(PAULI_Z, PAULI_Z)
    x0 = np.kron(PAULI_X, np.eye(2))
    terms = []
    bonds = n if boundary == "periodic" else n - 1
    for i in range(bonds):
        terms.append(HamiltonianTerm((i, (i + 1) % n), -J * (zz + g * x0)))
    if boundary == "open":
        terms.append(HamiltonianTerm((n - 1,), -J * g * PAULI_X))
    return LocalHamiltonian(n=n, terms=tuple(terms))


def is_termwise_stoquastic(h: LocalHamiltonian, tol: float = STOQUASTIC_TOL) -> bool:
    """True iff every term has only nonpositive off-diagonal entries (within ``tol``)."""
    return all(t.is_stoquastic(tol) for t in h.terms)


def exact_spectrum(h: LocalHamiltonian, max_n: int = 12) -> np.ndarray:
    """All 2^n eigenvalues of the dense assembly, ascending."""
    if h.n > max_n:
        raise ResourceLimitError(f"exact spectrum requested at n={h.n} (cap {max_n})")
    dense = h.dense()
    return np.linalg.eigvalsh(dense)


def shift_terms(h: LocalHamiltonian) -> ShiftedHamiltonian:
    """Replace each term H_i by H_i - lambda_min(H_i) I and record the shifts."""
    shifted = []
    shifts = []
    for t in h.terms:
        lam = float(np.min(t.eigenvalues()))
        shifted.append(HamiltonianTerm(t.support, np.asarray(t.matrix) - lam * np.eye(2**t.locality)))
        shifts.append(lam)
    base = LocalHamiltonian(n=h.n, terms=tuple(shifted), groups=h.groups)
    return ShiftedHamiltonian(base=base, per_term_shift=tuple(shifts), total_shift=float(sum(shifts)))
