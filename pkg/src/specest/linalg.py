"""Dense linear-algebra helpers for few-qubit operators.

Convention used everywhere in this package: qubit 0 is the most
significant bit of a basis-state index, so for n = 2 the basis order is
|00>, |01>, |10>, |11> and an operator on qubit 0 acts on the leading
tensor factor.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import ResourceLimitError

DENSE_QUBIT_CAP = 14


def check_dense_cap(n: int, cap: int = DENSE_QUBIT_CAP) -> None:
    if n > cap:
        raise ResourceLimitError(f"dense operation requested for n={n} qubits (cap {cap})")


def bit_positions(support: Sequence[int], n: int) -> list[int]:
    """Bit shift of each support qubit inside an n-bit index (MSB-first)."""
    return [n - 1 - q for q in support]


def extract_local(x: int, support: Sequence[int], n: int) -> int:
    """Local basis index of string ``x`` restricted to ``support`` (MSB-first within the support)."""
    k = len(support)
    loc = 0
    for j, q in enumerate(support):
        loc |= ((x >> (n - 1 - q)) & 1) << (k - 1 - j)
    return loc


def replace_local(x: int, support: Sequence[int], n: int, loc: int) -> int:
    """Write local index ``loc`` into string ``x`` on ``support``."""
    k = len(support)
    for j, q in enumerate(support):
        pos = n - 1 - q
        bit = (loc >> (k - 1 - j)) & 1
        x = (x & ~(1 << pos)) | (bit << pos)
    return x


def embed_operator(mat: np.ndarray, support: Sequence[int], n: int) -> np.ndarray:
    """Embed a 2^k x 2^k operator on ``support`` into the full 2^n space.

    Equivalent to kron with identities plus the qubit permutation implied
    by the support ordering.
    """
    check_dense_cap(n)
    k = len(support)
    if mat.shape != (2**k, 2**k):
        raise ValueError(f"operator shape {mat.shape} does not match support of size {k}")
    full = np.zeros((2**n, 2**n), dtype=np.result_type(mat.dtype, float))
    # tensor layout: (support legs..., rest legs...) for rows and columns
    rest = [q for q in range(n) if q not in set(support)]
    perm = list(support) + rest
    d_rest = 2 ** len(rest)
    op = np.kron(mat, np.eye(d_rest, dtype=mat.dtype))
    # op currently acts on qubits ordered as `perm`; permute to 0..n-1
    t = op.reshape((2,) * (2 * n))
    inv = np.argsort(perm)
    axes = list(inv) + [n + a for a in inv]
    full[:] = t.transpose(axes).reshape(2**n, 2**n)
    return full


def apply_local_matrix(vec: np.ndarray, mat: np.ndarray, support: Sequence[int], n: int) -> np.ndarray:
    """Apply a 2^k x 2^k matrix on ``support`` to a 2^n state vector.

    Works for non-unitary matrices as well (used by imaginary-time
    oracles) and for arrays of shape (2^n, ...) whose trailing axes are
    carried along (e.g. the columns of a matrix).
    """
    k = len(support)
    tail = vec.shape[1:]
    t = vec.reshape((2,) * n + tail)
    axes = list(support)
    t = np.moveaxis(t, axes, range(k))
    shape = t.shape
    t = mat.astype(np.result_type(mat.dtype, vec.dtype)) @ t.reshape(2**k, -1)
    t = t.reshape((2,) * k + shape[k:])
    t = np.moveaxis(t, range(k), axes)
    return np.ascontiguousarray(t.reshape(vec.shape))


def commutator_norm(a_mat: np.ndarray, a_sup: Sequence[int], b_mat: np.ndarray, b_sup: Sequence[int]) -> float:
    """Spectral norm of [A, B] computed densely on the joint support.

    Returns 0 immediately when the supports are disjoint.
    """
    joint = sorted(set(a_sup) | set(b_sup))
    if len(joint) == len(a_sup) + len(b_sup):
        return 0.0
    m = len(joint)
    pos = {q: i for i, q in enumerate(joint)}
    a_full = embed_operator(a_mat, [pos[q] for q in a_sup], m)
    b_full = embed_operator(b_mat, [pos[q] for q in b_sup], m)
    comm = a_full @ b_full - b_full @ a_full
    return float(np.linalg.norm(comm, 2))


def hermitize(mat: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Symmetrize (A + A^dagger)/2, rejecting matrices that are not Hermitian within ``tol``."""
    dev = np.max(np.abs(mat - mat.conj().T))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e} > {tol:.1e})")
    return 0.5 * (mat + mat.conj().T)
