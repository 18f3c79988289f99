"""Monte Carlo estimation of the imaginary-time signal g_I(k).

Paths of basis strings are sampled through Perron-reweighted transition
probabilities; the per-path estimator

    R = Phi(x_L)/Phi(x_0) * prod_l lambda_l phi_l(x_{l-1}) / phi_l(x_l)

is unbiased for <Phi| G_1 ... G_L |Phi> and Var(Re R) <= 1 whenever the
propagators' eigenvalues lie in (0, 1]. Propagator normalizations are
folded into R multiplicatively, so the estimate targets the raw
(shifted-term) Trotter product. Aggregation is either the empirical
mean or the median-of-means estimator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .hamiltonian import ShiftedHamiltonian
from .linalg import bit_positions, extract_local
from .propagator import NonnegativePropagator, local_propagator
from .states import InputStateAccess
from .trotter import TrotterPlan, first_order_plan, suzuki_plan

EstimatorKind = Literal["empirical_mean", "median_of_means"]

_CHUNK = 1 << 18


@dataclass(frozen=True)
class PathSample:
    """One sampled path with its estimator value."""

    path: tuple[int, ...]
    estimator_value: complex
    log_weight_terms: tuple[float, ...]


@dataclass(frozen=True)
class SignalEstimate:
    """Estimate of one signal point g(k) with its aggregation metadata."""

    k: int
    value: float
    num_samples: int
    num_groups: int
    group_means: tuple[float, ...]
    estimator_kind: EstimatorKind
    sample_variance: float

    @property
    def stderr_proxy(self) -> float:
        return float(np.sqrt(self.sample_variance / max(self.num_samples, 1)))


class _PropTables:
    """Per-propagator lookup tables for vectorized path stepping."""

    def __init__(self, prop: NonnegativePropagator, n: int):
        d = prop.dim
        g = prop.matrix
        lam = np.empty(d)
        phi = np.empty(d)
        for blk in prop.blocks:
            lam[list(blk.states)] = blk.perron_value
            phi[list(blk.states)] = blk.perron_vector
        trans = g * phi[None, :] / (lam[:, None] * phi[:, None])
        block_id = prop.block_of_state
        trans[block_id[:, None] != block_id[None, :]] = 0.0
        # trans rows sum to 1 by the Perron eigenvector identity; keep the
        # raw rows for inspection and renormalize only the sampling table
        self.trans = trans
        self.row_sums = trans.sum(axis=1)
        self.cum = np.cumsum(trans / self.row_sums[:, None], axis=1)
        # factor uses the raw Perron value: normalization folds back in here
        self.rfactor = prop.normalization * lam[:, None] * phi[:, None] / phi[None, :]
        self.positions = np.array(bit_positions(prop.support, n), dtype=np.int64)
        self.k = len(prop.support)
        self.prop = prop


def transition_distribution(prop: NonnegativePropagator, x_in: int, n: int) -> np.ndarray:
    """Probability vector over the 2^k local successor states of ``x_in``.

    Nonnegative, zero outside the block containing the input's local
    restriction, and summing to 1.
    """
    tables = _PropTables(prop, n)
    loc = extract_local(x_in, prop.support, n)
    return tables.trans[loc].copy()


def q_matrix(prop: NonnegativePropagator) -> np.ndarray:
    """Q(x, y) = G[x, y] * lambda_b * phi(x)/phi(y) for the normalized propagator.

    Column sums equal the squared block Perron values, which certifies
    the unit variance bound of the path estimator.
    """
    d = prop.dim
    lam = np.empty(d)
    phi = np.empty(d)
    for blk in prop.blocks:
        lam[list(blk.states)] = blk.perron_value
        phi[list(blk.states)] = blk.perron_vector
    q = prop.matrix * lam[:, None] * phi[:, None] / phi[None, :]
    block_id = prop.block_of_state
    q[block_id[:, None] != block_id[None, :]] = 0.0
    return q


def sample_path(
    state: InputStateAccess,
    props: Sequence[NonnegativePropagator],
    rng: np.random.Generator,
) -> PathSample:
    """Draw one path x_0 -> ... -> x_L and evaluate its estimator value."""
    n = state.n
    x = state.sample(rng)
    path = [x]
    logs = []
    weight = 1.0
    for prop in props:
        tables = _PropTables(prop, n)
        loc = extract_local(x, prop.support, n)
        nxt = int(rng.choice(prop.dim, p=tables.trans[loc]))
        factor = float(tables.rfactor[loc, nxt])
        weight *= factor
        logs.append(float(np.log(factor)))
        x = _replace_bits(x, tables.positions, tables.k, nxt)
        path.append(x)
    value = state.ratio(path[0], path[-1]) * weight
    return PathSample(path=tuple(path), estimator_value=complex(value), log_weight_terms=tuple(logs))


def _replace_bits(x: int, positions: np.ndarray, k: int, loc: int) -> int:
    for j in range(k):
        p = int(positions[j])
        bit = (loc >> (k - 1 - j)) & 1
        x = (x & ~(1 << p)) | (bit << p)
    return x


def _sample_initial(state: InputStateAccess, num: int, rng: np.random.Generator) -> np.ndarray:
    if state.name == "plus_product":
        return rng.integers(0, 2**state.n, size=num).astype(np.int64)
    if state.name == "phi_optimal":
        from .states import hamming_weight_marginal

        marginal = hamming_weight_marginal(state.n)
        w = rng.choice(state.n + 1, size=num, p=marginal)
        # uniform fixed-weight strings: mark the w smallest of n random keys
        keys = rng.random((num, state.n))
        thresh = np.full(num, -1.0)
        positive = w > 0
        sorted_keys = np.sort(keys[positive], axis=1)
        thresh[positive] = sorted_keys[np.arange(int(positive.sum())), w[positive] - 1]
        x = np.zeros(num, dtype=np.int64)
        for q in range(state.n):
            x |= (keys[:, q] <= thresh).astype(np.int64) << (state.n - 1 - q)
        return x
    return state.sample_many(num, rng).astype(np.int64)


def _popcount(x: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(x)
    for p in range(n):
        out += (x >> p) & 1
    return out


def _ratio_batch(state: InputStateAccess, x0: np.ndarray, xl: np.ndarray) -> np.ndarray:
    if state.name == "plus_product":
        return np.ones(len(x0))
    if state.name == "phi_optimal":
        from .states import _phi_optimal_weight_amplitude

        amp = _phi_optimal_weight_amplitude(state.n)
        return amp[_popcount(xl, state.n)] / amp[_popcount(x0, state.n)]
    return np.array([state.ratio(int(a), int(b)) for a, b in zip(x0, xl)])


class _StackedTables:
    """Distinct propagator tables padded to a common size for the kernel."""

    def __init__(self, props: Sequence[NonnegativePropagator], n: int):
        uniq: list[_PropTables] = []
        index: dict[int, int] = {}
        self.prop_idx = np.empty(len(props), dtype=np.int64)
        for l, p in enumerate(props):
            if id(p) not in index:
                index[id(p)] = len(uniq)
                uniq.append(_PropTables(p, n))
            self.prop_idx[l] = index[id(p)]
        dmax = max(t.prop.dim for t in uniq)
        kmax = max(t.k for t in uniq)
        self.dims = np.array([t.prop.dim for t in uniq], dtype=np.int64)
        self.ks = np.array([t.k for t in uniq], dtype=np.int64)
        self.positions = np.zeros((len(uniq), kmax), dtype=np.int64)
        self.cum = np.ones((len(uniq), dmax, dmax))
        self.rfac = np.ones((len(uniq), dmax, dmax))
        for a, t in enumerate(uniq):
            d = t.prop.dim
            self.positions[a, : t.k] = t.positions
            self.cum[a, :d, :d] = t.cum
            self.rfac[a, :d, :d] = t.rfactor


def run_paths(
    state: InputStateAccess,
    props: Sequence[NonnegativePropagator],
    num: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Estimator values R for ``num`` independent paths.

    Uses the compiled walker when available (its xoshiro stream is seeded
    from ``rng``, keeping runs reproducible from the top-level seed).
    """
    from . import _kernels

    if not props:
        x = _sample_initial(state, num, rng)
        return _ratio_batch(state, x, x)
    n = state.n
    stacked = _StackedTables(props, n)
    pieces = []
    start = 0
    while start < num:
        chunk = min(_CHUNK, num - start)
        x = _sample_initial(state, chunk, rng)
        x0 = x.copy()
        w = np.ones(chunk)
        if _kernels.HAVE_NUMBA:
            seed = int(rng.integers(0, 2**63))
            _kernels.walk_paths(
                x, w, seed, stacked.prop_idx, stacked.dims, stacked.ks, stacked.positions, stacked.cum, stacked.rfac
            )
        else:
            _kernels.walk_paths_numpy(
                x, w, rng, stacked.prop_idx, stacked.dims, stacked.ks, stacked.positions, stacked.cum, stacked.rfac
            )
        pieces.append(_ratio_batch(state, x0, x) * w)
        start += chunk
    return np.concatenate(pieces) if len(pieces) > 1 else pieces[0]


def median_of_means(samples: Sequence[float], q: int) -> float:
    """Median of ``q`` contiguous group means.

    The median of a_1..a_q is the first a_i (smallest index) with at
    least q/2 values <= a_i and at least q/2 values >= a_i. For q = 1
    this is the empirical mean.
    """
    data = np.asarray(samples, dtype=float)
    if data.size == 0:
        raise ValueError("median_of_means needs at least one sample")
    if q < 1 or q > data.size:
        raise ValueError(f"q={q} must be in [1, {data.size}]")
    means = group_means(data, q)
    return _paper_median(means)


def group_means(data: np.ndarray, q: int) -> np.ndarray:
    """Contiguous partition into q groups; the first |data| mod q groups get one extra element."""
    sizes = np.full(q, len(data) // q, dtype=int)
    sizes[: len(data) % q] += 1
    bounds = np.concatenate([[0], np.cumsum(sizes)])
    return np.array([data[bounds[i] : bounds[i + 1]].mean() for i in range(q)])


def _paper_median(values: np.ndarray) -> float:
    q = len(values)
    for i in range(q):
        le = int(np.sum(values <= values[i]))
        ge = int(np.sum(values >= values[i]))
        if le >= q / 2 and ge >= q / 2:
            return float(values[i])
    raise AssertionError("unreachable: some element always satisfies the median condition")


def build_propagators(
    plan: TrotterPlan, shifted: ShiftedHamiltonian, cache: dict | None = None
) -> list[NonnegativePropagator]:
    """Local propagators for the plan's term schedule, cached per (term, tau)."""
    if cache is None:
        cache = {}
    props = []
    for term_idx, tau in plan.term_schedule(shifted.base):
        key = (term_idx, tau)
        if key not in cache:
            cache[key] = local_propagator(shifted.base.terms[term_idx], tau)
        props.append(cache[key])
    return props


def estimate_signal(
    state: InputStateAccess,
    shifted: ShiftedHamiltonian,
    tau_step: float,
    K: int,
    *,
    M: int,
    num_samples: int,
    num_groups: int = 1,
    order: int = 1,
    scheme: str = "gamma",
    estimator: EstimatorKind = "empirical_mean",
    rng: np.random.Generator,
) -> list[SignalEstimate]:
    """Independent Monte Carlo estimates of g_I(k) for k = 0..K.

    Each point k is estimated from ``num_samples`` fresh paths through
    the Trotterized exp(-k tau_step H) with Trotter variable M. The k = 0
    point is exactly 1 (the estimator is constant there).
    """
    if tau_step < 0:
        raise ValueError("tau_step must be nonnegative")
    estimates = []
    cache: dict = {}
    for k in range(K + 1):
        if k == 0:
            estimates.append(
                SignalEstimate(
                    k=0,
                    value=1.0,
                    num_samples=num_samples,
                    num_groups=num_groups,
                    group_means=tuple([1.0] * num_groups),
                    estimator_kind=estimator,
                    sample_variance=0.0,
                )
            )
            continue
        if order == 1:
            plan = first_order_plan(shifted, k * tau_step, M, "imaginary_time", scheme)
        else:
            plan = suzuki_plan(shifted, k * tau_step, M, order, "imaginary_time", scheme)
        props = build_propagators(plan, shifted, cache)
        values = np.real(run_paths(state, props, num_samples, rng))
        gmeans = group_means(values, num_groups)
        value = _paper_median(gmeans) if estimator == "median_of_means" else float(values.mean())
        estimates.append(
            SignalEstimate(
                k=k,
                value=value,
                num_samples=num_samples,
                num_groups=num_groups,
                group_means=tuple(float(m) for m in gmeans),
                estimator_kind=estimator,
                sample_variance=float(values.var(ddof=1)) if len(values) > 1 else 0.0,
            )
        )
    return estimates
