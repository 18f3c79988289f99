"""Classical estimation of the decaying signal g_D(k) = <Phi|(I - H/2pi)^k|Phi>
for general local Hamiltonians.

Starting strings are sampled from |Phi(x)|^2; for each one the estimator
R(x) = sum_y Phi(y)/Phi(x) <x|(I - H/2pi)^k|y> is evaluated by exhaustive
breadth-first expansion of the local terms, merging equal intermediate
strings at every depth. Cost grows exponentially with k; a node budget
guards runaway requests. Var(Re R) <= 1 because the rescaled spectrum
lies in [0, pi].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .hamiltonian import LocalHamiltonian
from .linalg import extract_local, replace_local
from .mc_sampler import SignalEstimate, _paper_median, group_means
from .states import InputStateAccess

DEFAULT_NODE_BUDGET = 10_000_000


@dataclass(frozen=True)
class RescaledHamiltonian:
    """H mapped affinely so its spectrum is certified to lie in [0, pi].

    rescaled = (H + shift I) * scale. Physical energies are recovered as
    E = E_rescaled / scale - shift.
    """

    base: LocalHamiltonian
    shift: float
    scale: float

    @property
    def n(self) -> int:
        return self.base.n

    def to_physical(self, e_rescaled: np.ndarray) -> np.ndarray:
        return np.asarray(e_rescaled) / self.scale - self.shift

    def dense(self) -> np.ndarray:
        d = self.base.dense()
        return (d + self.shift * np.eye(d.shape[0])) * self.scale


def rescale_into_half_band(h: LocalHamiltonian) -> RescaledHamiltonian:
    """Affine rescale using the certified bounds +/- sum_i ||H_i||.

    Cheap and valid at any n; may compress the spectrum more than a
    dense bound would.
    """
    bound = sum(t.norm() for t in h.terms)
    if bound == 0.0:
        return RescaledHamiltonian(base=h, shift=0.0, scale=1.0)
    return RescaledHamiltonian(base=h, shift=bound, scale=np.pi / (2.0 * bound))


def _expand_once(
    vec: dict[int, float],
    rescaled: RescaledHamiltonian,
    node_budget: int,
) -> dict[int, float]:
    """One application of (I - H_rescaled/2pi) to a sparse bra vector."""
    diag_coeff = 1.0 - rescaled.shift * rescaled.scale / (2.0 * np.pi)
    term_coeff = -rescaled.scale / (2.0 * np.pi)
    out: dict[int, float] = {x: diag_coeff * a for x, a in vec.items()}
    n = rescaled.n
    for term in rescaled.base.terms:
        mat = np.asarray(term.matrix, dtype=float)
        support = term.support
        for x, a in vec.items():
            loc = extract_local(x, support, n)
            row = mat[loc]
            for nloc in np.nonzero(row)[0]:
                y = replace_local(x, support, n, int(nloc))
                out[y] = out.get(y, 0.0) + term_coeff * a * float(row[nloc])
                if len(out) > node_budget:
                    raise ResourceLimitError(
                        f"path expansion exceeded the node budget ({node_budget}) during one level"
                    )
    return out


def estimator_value(
    state: InputStateAccess,
    rescaled: RescaledHamiltonian,
    x0: int,
    k: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> float:
    """R(x0): exhaustive path sum of <x0|(I - H/2pi)^k|y> weighted by Phi(y)/Phi(x0)."""
    vec = {x0: 1.0}
    for depth in range(k):
        try:
            vec = _expand_once(vec, rescaled, node_budget)
        except ResourceLimitError as exc:
            raise ResourceLimitError(f"k={k} (at expansion depth {depth + 1}): {exc}") from exc
    return float(np.real(sum(a * state.ratio(x0, y) for y, a in vec.items())))


def estimate_gD(
    state: InputStateAccess,
    rescaled: RescaledHamiltonian,
    k: int,
    *,
    num_samples: int,
    num_groups: int = 1,
    estimator: str = "median_of_means",
    node_budget: int = DEFAULT_NODE_BUDGET,
    rng: np.random.Generator,
) -> SignalEstimate:
    """Sampled estimate of g_D(k); R(x0) is deterministic given x0 and memoized."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    values = np.empty(num_samples)
    cache: dict[int, float] = {}
    for i in range(num_samples):
        x0 = state.sample(rng)
        if x0 not in cache:
            cache[x0] = estimator_value(state, rescaled, x0, k, node_budget)
        values[i] = cache[x0]
    gmeans = group_means(values, num_groups)
    value = _paper_median(gmeans) if estimator == "median_of_means" else float(values.mean())
    return SignalEstimate(
        k=k,
        value=value,
        num_samples=num_samples,
        num_groups=num_groups,
        group_means=tuple(float(m) for m in gmeans),
        estimator_kind=estimator,  # type: ignore[arg-type]
        sample_variance=float(values.var(ddof=1)) if num_samples > 1 else 0.0,
    )
