"""Input-state access structures: sample bit strings from |Phi(x)|^2 and
evaluate amplitude ratios Phi(y)/Phi(x).

Basis strings are plain Python ints with qubit 0 as the most significant
bit, matching the dense-simulation convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Optional

import numpy as np

from .linalg import check_dense_cap


@dataclass(frozen=True)
class InputStateAccess:
    """Sampling plus amplitude-ratio access to an n-qubit state.

    ``sample`` draws a basis string distributed as |Phi(x)|^2; ``ratio``
    returns Phi(y)/Phi(x). ``amplitude`` is available for oracle states
    only and enables dense reconstruction in tests.
    """

    n: int
    name: str
    sample: Callable[[np.random.Generator], int]
    ratio: Callable[[int, int], complex]
    amplitude: Optional[Callable[[int], complex]] = None

    def sample_many(self, num: int, rng: np.random.Generator) -> np.ndarray:
        out = np.empty(num, dtype=np.uint64)
        for i in range(num):
            out[i] = self.sample(rng)
        return out

    def dense(self) -> np.ndarray:
        """Dense amplitude vector (requires ``amplitude``; capped n)."""
        if self.amplitude is None:
            raise ValueError(f"state {self.name!r} has no amplitude oracle")
        check_dense_cap(self.n)
        return np.array([self.amplitude(x) for x in range(2**self.n)])


def product_plus(n: int) -> InputStateAccess:
    """The product state |+>^n: uniform strings, all amplitude ratios 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    amp = 2.0 ** (-n / 2.0)

    def sample(rng: np.random.Generator) -> int:
        return int(rng.integers(0, 2**n))

    return InputStateAccess(
        n=n,
        name="plus_product",
        sample=sample,
        ratio=lambda x, y: 1.0,
        amplitude=lambda x: amp,
    )


def _phi_optimal_weight_amplitude(n: int) -> np.ndarray:
    """Amplitude as a function of Hamming weight w = 0..n."""
    w = np.arange(n + 1, dtype=float)
    a = 1.0 / n + 1.0 / np.sqrt(n)
    b = 1.0 / n - 1.0 / np.sqrt(n)
    return 2.0 ** (-(n + 1) / 2.0) * (a * (n - w) + b * w)


def hamming_weight_marginal(n: int) -> np.ndarray:
    """Probability of drawing Hamming weight w under the optimal-overlap state.

    Entry w is C(n, w) |Phi(w)|^2; the binomial multiplicity is required
    for the entries to sum to 1.
    """
    amp = _phi_optimal_weight_amplitude(n)
    return np.array([comb(n, w) * amp[w] ** 2 for w in range(n + 1)])


def phi_optimal(n: int) -> InputStateAccess:
    """Equal superposition of the uniform state and the symmetric one-flip state.

    Amplitudes depend on the Hamming weight only. Sampling draws a weight
    from its marginal and then places the ones uniformly at random.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    amp_by_weight = _phi_optimal_weight_amplitude(n)
    marginal = hamming_weight_marginal(n)

    def amplitude(x: int) -> float:
        return float(amp_by_weight[int(x).bit_count()])

    def ratio(x: int, y: int) -> float:
        ax = amp_by_weight[int(x).bit_count()]
        if ax == 0.0:
            raise ZeroDivisionError("amplitude ratio from a zero-amplitude string")
        return float(amp_by_weight[int(y).bit_count()] / ax)

    def sample(rng: np.random.Generator) -> int:
        w = int(rng.choice(n + 1, p=marginal))
        x = 0
        for q in rng.permutation(n)[:w]:
            x |= 1 << (n - 1 - int(q))
        return x

    return InputStateAccess(n=n, name="phi_optimal", sample=sample, ratio=ratio, amplitude=amplitude)


_BUILDERS = {"plus_product": product_plus, "phi_optimal": phi_optimal}


def make_state(kind: str, n: int) -> InputStateAccess:
    """Construct a state access structure by config name."""
    try:
        builder = _BUILDERS[kind]
    except KeyError:
        raise ValueError(f"unknown state kind {kind!r}; expected one of {sorted(_BUILDERS)}") from None
    return builder(n)
