"""Compiled path-walking kernel for the Monte Carlo sampler.

The in-kernel RNG is xoshiro256++ seeded by splitmix64; the seed itself
is drawn from the caller's numpy Generator, so runs remain reproducible
from a single top-level seed. Falls back to a pure-numpy walker when
numba is unavailable (same distribution, different stream layout).
"""

from __future__ import annotations

import numpy as np

try:
    import numba
    from numba import float64, uint64

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False


if HAVE_NUMBA:

    @numba.njit(inline="always")
    def _rotl(x, k):
        return (x << k) | (x >> (uint64(64) - k))

    @numba.njit(inline="always")
    def _next_u64(s):
        result = _rotl(s[0] + s[3], uint64(23)) + s[0]
        t = s[1] << uint64(17)
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], uint64(45))
        return result

    @numba.njit(inline="always")
    def _uniform(s):
        return float64(_next_u64(s) >> uint64(11)) * (1.0 / 9007199254740992.0)

    @numba.njit
    def _seed_state(seed):
        s = np.empty(4, dtype=np.uint64)
        z = uint64(seed)
        for i in range(4):
            z = z + uint64(0x9E3779B97F4A7C15)
            t = z
            t = (t ^ (t >> uint64(30))) * uint64(0xBF58476D1CE4E5B9)
            t = (t ^ (t >> uint64(27))) * uint64(0x94D049BB133111EB)
            s[i] = t ^ (t >> uint64(31))
        return s

    @numba.njit(cache=True)
    def walk_paths(x, w, seed, prop_idx, dims, ks, positions, cum, rfac):
        """Advance every path through the full propagator schedule in place."""
        rs = _seed_state(seed)
        num_steps = prop_idx.shape[0]
        for i in range(x.shape[0]):
            xi = x[i]
            wi = 1.0
            for l in range(num_steps):
                p = prop_idx[l]
                k = ks[p]
                loc = 0
                for j in range(k):
                    loc = (loc << 1) | ((xi >> positions[p, j]) & 1)
                uu = _uniform(rs)
                d = dims[p]
                nxt = 0
                while nxt < d - 1 and uu >= cum[p, loc, nxt]:
                    nxt += 1
                wi *= rfac[p, loc, nxt]
                for j in range(k):
                    pos = positions[p, j]
                    bit = (nxt >> (k - 1 - j)) & 1
                    xi = (xi & ~(np.int64(1) << pos)) | (bit << pos)
            x[i] = xi
            w[i] = wi


def walk_paths_numpy(x, w, rng, prop_idx, dims, ks, positions, cum, rfac):
    """Vectorized reference walker; used when the compiled kernel is absent."""
    for p in prop_idx:
        k = int(ks[p])
        d = int(dims[p])
        loc = np.zeros_like(x)
        for j in range(k):
            loc = (loc << 1) | ((x >> int(positions[p, j])) & 1)
        u = rng.random(x.shape[0])
        nxt = (cum[p][loc, :d] <= u[:, None]).sum(axis=1)
        np.clip(nxt, 0, d - 1, out=nxt)
        w *= rfac[p][loc, nxt]
        for j in range(k):
            pos = int(positions[p, j])
            bit = (nxt >> (k - 1 - j)) & 1
            x &= ~(1 << pos)
            x |= bit << pos
