import math

import numpy as np
import pytest
from scipy import stats

from specest.states import hamming_weight_marginal, make_state, phi_optimal, product_plus


def popcount(x: int) -> int:
    return bin(x).count("1")


class TestProductPlus:
    def test_ratio_is_one(self):
        st = product_plus(4)
        assert st.ratio(0b0110, 0b1001) == 1.0

    def test_amplitude(self):
        st = product_plus(3)
        assert st.amplitude(5) == pytest.approx(2 ** (-1.5))

    def test_uniform_frequencies(self, rng):
        st = product_plus(3)
        draws = st.sample_many(100_000, rng)
        count = int(np.sum(draws == 0b101))
        p = 1 / 8
        sigma = math.sqrt(100_000 * p * (1 - p))
        assert abs(count - 100_000 * p) < 5 * sigma


class TestPhiOptimal:
    def test_normalization_exhaustive_n7(self):
        st = phi_optimal(7)
        total = sum(abs(st.amplitude(x)) ** 2 for x in range(2**7))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_ratio_depends_on_weight_only(self):
        st = phi_optimal(5)
        assert st.ratio(0b10100, 0b00101) == pytest.approx(1.0, abs=1e-15)

    def test_overlap_with_plus_product_is_half(self):
        n = 7
        st = phi_optimal(n)
        vec = st.dense()
        plus = np.full(2**n, 2.0 ** (-n / 2))
        assert abs(plus @ vec) ** 2 == pytest.approx(0.5, abs=1e-12)

    def test_ratio_transitivity_on_sampled_triples(self, rng):
        st = phi_optimal(6)
        for _ in range(50):
            x, y, z = (st.sample(rng) for _ in range(3))
            assert st.ratio(x, y) * st.ratio(y, z) == pytest.approx(st.ratio(x, z), abs=1e-12)

    def test_weight_four_n4_has_zero_amplitude_and_is_never_drawn(self, rng):
        # at n = 4 the weight-3 amplitude vanishes identically
        marg = hamming_weight_marginal(4)
        assert marg[3] == pytest.approx(0.0, abs=1e-15)
        st = phi_optimal(4)
        draws = [st.sample(rng) for _ in range(10_000)]
        assert all(popcount(x) != 3 for x in draws)


class TestHammingMarginal:
    def test_n1_closed_form(self):
        # amplitude formula at n = 1: c(0) = 1, c(1) = 0
        assert np.allclose(hamming_weight_marginal(1), [1.0, 0.0], atol=1e-14)

    def test_sums_to_one(self):
        for n in (2, 3, 7, 11):
            assert hamming_weight_marginal(n).sum() == pytest.approx(1.0, abs=1e-12)

    def test_sampled_weight_histogram_matches_marginal(self, rng):
        n, num = 5, 100_000
        st = phi_optimal(n)
        marg = hamming_weight_marginal(n)
        counts = np.zeros(n + 1)
        for _ in range(num):
            counts[popcount(st.sample(rng))] += 1
        for w in range(n + 1):
            sigma = math.sqrt(num * marg[w] * (1 - marg[w])) if 0 < marg[w] < 1 else 0.0
            assert abs(counts[w] - num * marg[w]) <= max(5 * sigma, 1e-9)


def test_sampler_matches_squared_amplitudes_chi2(rng):
    n, num = 5, 100_000
    st = phi_optimal(n)
    probs = np.array([abs(st.amplitude(x)) ** 2 for x in range(2**n)])
    counts = np.bincount([st.sample(rng) for _ in range(num)], minlength=2**n)
    keep = probs > 1e-12
    chi2 = stats.chisquare(counts[keep], num * probs[keep] / probs[keep].sum())
    assert chi2.pvalue > 0.001
    assert counts[~keep].sum() == 0


def test_fixed_weight_strings_uniform_exact_count(rng):
    # all C(4, 2) = 6 weight-2 strings occur with equal probability
    st = phi_optimal(4)
    draws = [st.sample(rng) for _ in range(60_000)]
    weight2 = [x for x in draws if popcount(x) == 2]
    values, counts = np.unique(weight2, return_counts=True)
    assert len(values) == 6
    chi2 = stats.chisquare(counts)
    assert chi2.pvalue > 0.001


def test_make_state_dispatch_and_errors():
    assert make_state("plus_product", 3).name == "plus_product"
    assert make_state("phi_optimal", 3).name == "phi_optimal"
    with pytest.raises(ValueError):
        make_state("bell", 3)
    with pytest.raises(ValueError):
        phi_optimal(0)
