import math

import numpy as np
import pytest

import qinfo as qi
from qinfo.exceptions import ConvergenceError, EnumerationCapError, ValidationError
from qinfo.rng import substream


def entropy_by_hand(probs, log):
    """Direct-summation oracle, independent of the library path."""
    return -sum(p * log(p) for p in probs if p > 0)


class TestDistributionTypes:
    def test_rejects_negative(self):
        with pytest.raises(ValidationError):
            qi.Distribution(np.array([1.2, -0.2]))

    def test_rejects_bad_sum(self):
        with pytest.raises(ValidationError):
            qi.Distribution(np.array([0.5, 0.6]))

    def test_joint_marginals(self):
        j = qi.JointDistribution(np.array([[0.4, 0.1], [0.1, 0.4]]))
        assert np.allclose(j.marginal_a().probs, [0.5, 0.5])
        assert np.allclose(j.marginal_b().probs, [0.5, 0.5])

    def test_channel_rows_must_be_stochastic(self):
        with pytest.raises(ValidationError):
            qi.DiscreteChannel(np.array([[0.5, 0.4], [0.5, 0.5]]))

    def test_json_roundtrip(self):
        d = qi.Distribution(np.array([0.25, 0.75]))
        assert qi.Distribution.from_json(d.to_json()).probs == pytest.approx(d.probs)


class TestShannonEntropy:
    def test_fair_coin_is_one_bit(self):
        assert qi.shannon_entropy(qi.Distribution(np.array([0.5, 0.5]))) == pytest.approx(1.0)

    def test_certainty_is_zero(self):
        assert qi.shannon_entropy(qi.Distribution(np.array([1.0, 0.0]))) == 0.0

    def test_key_in_pocket_example_nats(self):
        # 0.9 in the pocket, 0.001 in each of a hundred other places
        dist = qi.Distribution(np.array([0.9] + [0.001] * 100))
        assert qi.shannon_entropy(dist, "nats") == pytest.approx(0.7856, abs=1e-4)

    def test_matches_direct_summation(self):
        rng = substream(101, 0)
        for _ in range(25):
            p = rng.dirichlet(np.ones(rng.integers(2, 8)))
            dist = qi.Distribution(p)
            assert qi.shannon_entropy(dist) == pytest.approx(
                entropy_by_hand(p, math.log2), abs=1e-12
            )

    def test_range(self):
        rng = substream(102, 0)
        for _ in range(25):
            n = int(rng.integers(2, 9))
            dist = qi.Distribution(rng.dirichlet(np.ones(n)))
            h = qi.shannon_entropy(dist)
            assert -1e-12 <= h <= math.log2(n) + 1e-12

    def test_unknown_base_rejected(self):
        with pytest.raises(ValidationError):
            qi.shannon_entropy(qi.Distribution(np.array([1.0])), "trits")


class TestConditionalAndMutual:
    # H(A,B) and H(B|A) for [[0.4, 0.1], [0.1, 0.4]] by direct summation:
    # H(A,B) = 1.721928..., H(A) = 1 exactly.
    JOINT = np.array([[0.4, 0.1], [0.1, 0.4]])

    def test_conditional_example(self):
        j = qi.JointDistribution(self.JOINT)
        h_ab = entropy_by_hand(self.JOINT.ravel(), math.log2)
        assert h_ab == pytest.approx(1.7219280948873623, abs=1e-12)
        assert qi.conditional_entropy(j) == pytest.approx(h_ab - 1.0, abs=1e-12)

    def test_conditional_of_product_is_marginal_entropy(self):
        pa = qi.Distribution(np.array([0.3, 0.7]))
        pb = qi.Distribution(np.array([0.2, 0.5, 0.3]))
        j = qi.JointDistribution.from_product(pa, pb)
        assert qi.conditional_entropy(j) == pytest.approx(qi.shannon_entropy(pb), abs=1e-12)

    def test_perfect_correlation_has_zero_conditional(self):
        j = qi.JointDistribution(np.diag([0.2, 0.3, 0.5]))
        assert qi.conditional_entropy(j) == pytest.approx(0.0, abs=1e-12)

    def test_mutual_information_example(self):
        j = qi.JointDistribution(self.JOINT)
        assert qi.mutual_information(j) == pytest.approx(1.0 - 0.7219280948873623, abs=1e-12)

    def test_mutual_information_of_product_is_zero(self):
        j = qi.JointDistribution.from_product(
            qi.Distribution(np.array([0.4, 0.6])), qi.Distribution(np.array([0.1, 0.9]))
        )
        assert qi.mutual_information(j) == pytest.approx(0.0, abs=1e-12)

    def test_identity_correlated_uniform_is_one_bit(self):
        j = qi.JointDistribution(np.eye(2) / 2)
        assert qi.mutual_information(j) == pytest.approx(1.0, abs=1e-12)

    def test_mutual_information_equals_kl_to_product(self):
        rng = substream(103, 0)
        for _ in range(30):
            m = rng.dirichlet(np.ones(6)).reshape(2, 3)
            j = qi.JointDistribution(m)
            prod = np.outer(j.marginal_a().probs, j.marginal_b().probs)
            kl = sum(
                p * math.log2(p / q)
                for p, q in zip(m.ravel(), prod.ravel())
                if p > 0
            )
            assert qi.mutual_information(j) == pytest.approx(kl, abs=1e-10)


class TestKlDivergence:
    def test_self_divergence_zero(self):
        p = qi.Distribution(np.array([0.3, 0.7]))
        assert qi.kl_divergence(p, p) == pytest.approx(0.0, abs=1e-12)

    def test_point_mass_versus_fair_coin(self):
        p = qi.Distribution(np.array([1.0, 0.0]))
        q = qi.Distribution(np.array([0.5, 0.5]))
        assert qi.kl_divergence(p, q) == pytest.approx(1.0, abs=1e-12)

    def test_support_violation_is_infinite(self):
        p = qi.Distribution(np.array([0.5, 0.5]))
        q = qi.Distribution(np.array([1.0, 0.0]))
        assert qi.kl_divergence(p, q) == math.inf

    def test_alphabet_mismatch(self):
        with pytest.raises(ValidationError):
            qi.kl_divergence(
                qi.Distribution(np.array([1.0])), qi.Distribution(np.array([0.5, 0.5]))
            )


class TestBayesPosterior:
    def test_card_example(self):
        # hypothesis: which kind of card was removed (ace or not); observation
        # fixed; likelihood rows give p(next is ace | removal)
        prior = qi.Distribution(np.array([4 / 52, 48 / 52]))
        likelihood = qi.DiscreteChannel(np.array([[3 / 51, 48 / 51], [4 / 51, 47 / 51]]))
        post = qi.bayes_posterior(prior, likelihood, 0)
        # p(ace removed | next is ace) by direct Bayes arithmetic
        num = (4 / 52) * (3 / 51)
        den = num + (48 / 52) * (4 / 51)
        assert post.probs[0] == pytest.approx(num / den, abs=1e-12)

    def test_uniform_likelihood_returns_prior(self):
        prior = qi.Distribution(np.array([0.2, 0.8]))
        lik = qi.DiscreteChannel(np.full((2, 3), 1 / 3))
        post = qi.bayes_posterior(prior, lik, 1)
        assert post.probs == pytest.approx(prior.probs)

    def test_deterministic_likelihood_gives_point_mass(self):
        prior = qi.Distribution(np.array([0.5, 0.5]))
        lik = qi.DiscreteChannel(np.array([[1.0, 0.0], [0.0, 1.0]]))
        assert qi.bayes_posterior(prior, lik, 0).probs == pytest.approx([1.0, 0.0])

    def test_zero_probability_observation(self):
        prior = qi.Distribution(np.array([1.0, 0.0]))
        lik = qi.DiscreteChannel(np.array([[1.0, 0.0], [0.0, 1.0]]))
        with pytest.raises(ValidationError):
            qi.bayes_posterior(prior, lik, 1)


class TestCapacityClosed:
    def test_useless_bsc(self):
        cap, dist = qi.channel_capacity_closed("binary_symmetric", 0.5)
        assert cap == pytest.approx(0.0, abs=1e-12)

    def test_bsc_01(self):
        cap, dist = qi.channel_capacity_closed("binary_symmetric", 0.1)
        assert cap == pytest.approx(1.0 - entropy_by_hand([0.1, 0.9], math.log2), abs=1e-12)
        assert cap == pytest.approx(0.5310044064107188, abs=1e-10)
        assert dist.probs == pytest.approx([0.5, 0.5])

    def test_noiseless_ternary_symbols(self):
        cap, dist = qi.channel_capacity_closed("ternary", 0.0)
        assert cap == pytest.approx(math.log2(3.0), abs=1e-12)
        assert dist.probs == pytest.approx([1 / 3, 1 / 3, 1 / 3])

    def test_ternary_half_is_one_bit(self):
        cap, dist = qi.channel_capacity_closed("ternary", 0.5)
        assert cap == pytest.approx(1.0, abs=1e-12)
        assert dist.probs == pytest.approx([0.5, 0.25, 0.25])

    def test_noiseless(self):
        cap, dist = qi.channel_capacity_closed("noiseless", 4)
        assert cap == pytest.approx(2.0, abs=1e-12)


class TestCapacityNumeric:
    def test_bsc_agrees_with_closed_form(self):
        cap, dist = qi.channel_capacity_numeric(qi.binary_symmetric_channel(0.1), tol=1e-10)
        assert cap == pytest.approx(0.5310044064107188, abs=1e-6)
        assert dist.probs == pytest.approx([0.5, 0.5], abs=1e-4)

    def test_ternary_agrees_with_closed_form(self):
        for p in (0.0, 0.2, 0.5):
            closed, _ = qi.channel_capacity_closed("ternary", p)
            numeric, _ = qi.channel_capacity_numeric(qi.ternary_channel(p), tol=1e-10)
            assert numeric == pytest.approx(closed, abs=1e-6)

    def test_noiseless_binary(self):
        cap, dist = qi.channel_capacity_numeric(qi.noiseless_channel(2), tol=1e-10)
        assert cap == pytest.approx(1.0, abs=1e-9)
        assert dist.probs == pytest.approx([0.5, 0.5], abs=1e-5)

    def test_dominates_sampled_inputs(self):
        rng = substream(104, 0)
        for _ in range(10):
            mat = rng.dirichlet(np.ones(3), size=3)
            ch = qi.DiscreteChannel(mat)
            cap, _ = qi.channel_capacity_numeric(ch, tol=1e-9)
            for _ in range(10):
                r = qi.Distribution(rng.dirichlet(np.ones(3)))
                i = qi.mutual_information(ch.joint(r))
                assert cap >= i - 1e-7

    def test_iteration_cap_raises_with_best_iterate(self):
        lopsided = qi.DiscreteChannel(np.array([[0.9, 0.1], [0.4, 0.6], [0.2, 0.8]]))
        with pytest.raises(ConvergenceError) as err:
            qi.channel_capacity_numeric(lopsided, tol=1e-12, max_iter=2)
        assert err.value.best is not None
        assert 0.0 <= err.value.best[0] <= 1.0


class TestTypicalSet:
    def test_uniform_binary_everything_typical(self):
        ts = qi.typical_set(qi.Distribution(np.array([0.5, 0.5])), 6, 0.05)
        assert ts.size == 64
        assert ts.total_prob == pytest.approx(1.0, abs=1e-12)

    def test_deterministic_source_single_sequence(self):
        ts = qi.typical_set(qi.Distribution(np.array([1.0, 0.0])), 8, 0.1)
        assert ts.members == [tuple([0] * 8)]
        assert ts.total_prob == pytest.approx(1.0)

    def test_biased_example_against_enumeration_oracle(self):
        p, n, eps = 0.9, 20, 0.1
        dist = qi.Distribution(np.array([p, 1 - p]))
        h = entropy_by_hand([p, 1 - p], math.log2)
        # oracle: enumerate counts of ones, membership from exact probabilities
        members = 0
        weight = 0.0
        lo, hi = 2 ** (-n * (h + eps)), 2 ** (-n * (h - eps))
        for k in range(n + 1):
            prob = (p ** (n - k)) * ((1 - p) ** k)
            if lo <= prob <= hi:
                members += math.comb(n, k)
                weight += math.comb(n, k) * prob
        ts = qi.typical_set(dist, n, eps, cap=2**21)
        assert ts.size == members
        assert ts.total_prob == pytest.approx(weight, abs=1e-12)
        # set-size bounds: the hard upper bound and the weight-based lower bound
        assert ts.size < 2 ** (n * (h + eps))
        assert ts.size > (1 - eps) * 2 ** (n * (h - eps))

    def test_probability_bound_at_reachable_size(self):
        # a source mixed enough that the weight bound already holds at n=16
        dist = qi.Distribution(np.array([0.6, 0.4]))
        ts = qi.typical_set(dist, 16, 0.35, cap=2**17)
        assert ts.total_prob > 1 - 0.35
        assert ts.size < 2 ** (16 * (ts.entropy_bits + 0.35))

    def test_cap_enforced(self):
        with pytest.raises(EnumerationCapError):
            qi.typical_set(qi.Distribution(np.array([0.5, 0.5])), 30, 0.1, cap=1000)


class TestNoisyCodingDemo:
    def test_noiseless_channel_never_errs(self):
        table = qi.noisy_coding_demo(
            qi.binary_symmetric_channel(0.0), 0.8, [8], trials=500, seed=3
        )
        assert table[0].block_error_rate == 0.0

    def test_below_capacity_error_falls_with_block_length(self):
        table = qi.noisy_coding_demo(
            qi.binary_symmetric_channel(0.1), 0.3, [8, 12, 16], trials=10_000, seed=20260810
        )
        rates = [r.block_error_rate for r in table]
        assert rates == pytest.approx([0.0991, 0.0892, 0.0706], abs=1e-12)
        assert rates[0] > rates[1] > rates[2]

    def test_above_capacity_error_stays_large(self):
        table = qi.noisy_coding_demo(
            qi.binary_symmetric_channel(0.1), 0.9, [16], trials=400, seed=20260810
        )
        assert table[0].block_error_rate > 0.2

    def test_reproducible(self):
        a = qi.noisy_coding_demo(qi.binary_symmetric_channel(0.2), 0.4, [6], 200, seed=5)
        b = qi.noisy_coding_demo(qi.binary_symmetric_channel(0.2), 0.4, [6], 200, seed=5)
        assert a[0].block_error_rate == b[0].block_error_rate
