import math
import random
from fractions import Fraction
from io import StringIO

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase
from rest_framework.test import APIClient

from apps.codes.bits import BitString
from apps.reconciliation.plans import select_sp
from sp_recon.exceptions import BudgetError, DomainError, PreconditionError
from sp_recon.utils.rng import make_rng
from .amplification import amplify, toeplitz_seed_bits
from .entropy import (
    FiniteDistribution,
    binary_entropy,
    check_independent_min_entropy,
    cond_min_entropy,
    min_entropy,
    shannon_entropy,
)
from .leakage import (
    efficiency_metrics,
    fixed_code_efficiency,
    leakage_budget,
    secret_rate,
)


class BinaryEntropyTests(SimpleTestCase):
    def test_known_values(self):
        self.assertEqual(binary_entropy(0.5), 1.0)
        self.assertEqual(binary_entropy(0), 0.0)
        self.assertEqual(binary_entropy(1), 0.0)
        self.assertAlmostEqual(binary_entropy(0.068), 0.358415, delta=1e-6)
        self.assertAlmostEqual(binary_entropy(Fraction(1, 4)), binary_entropy(0.25))

    def test_domain(self):
        with self.assertRaises(DomainError):
            binary_entropy(1.2)


class DistributionTests(SimpleTestCase):
    def test_validation(self):
        with self.assertRaises(DomainError):
            FiniteDistribution([0.5, 0.6])
        with self.assertRaises(DomainError):
            FiniteDistribution([1.5, -0.5])
        with self.assertRaises(DomainError):
            FiniteDistribution([])

    def test_exact_rationals(self):
        dist = FiniteDistribution([Fraction(1, 3), Fraction(2, 3)])
        self.assertAlmostEqual(min_entropy(dist), -math.log2(2 / 3))

    def test_marginal_order(self):
        joint = FiniteDistribution(np.array([[0.1, 0.2], [0.3, 0.4]]))
        self.assertTrue(np.allclose(joint.marginal(0).probabilities, [0.3, 0.7]))
        self.assertTrue(np.allclose(joint.marginal(1).probabilities, [0.4, 0.6]))
        self.assertTrue(np.allclose(joint.marginal(1, 0).probabilities, [[0.1, 0.3], [0.2, 0.4]]))


class MinEntropyTests(SimpleTestCase):
    def test_uniform(self):
        self.assertAlmostEqual(min_entropy(FiniteDistribution.uniform(2**5)), 5.0)

    def test_point_mass(self):
        self.assertEqual(min_entropy([0.0, 1.0, 0.0]), 0.0)

    def test_skewed_bit(self):
        self.assertAlmostEqual(min_entropy([0.75, 0.25]), 0.415037, delta=1e-6)

    def test_min_entropy_never_exceeds_shannon(self):
        rng = make_rng(3)
        for _ in range(1000):
            dist = FiniteDistribution.random(int(rng.integers(1, 30)), rng)
            self.assertLessEqual(min_entropy(dist), shannon_entropy(dist) + 1e-9)

    def test_equality_only_for_uniform(self):
        uniform = FiniteDistribution.uniform(16)
        self.assertAlmostEqual(min_entropy(uniform), shannon_entropy(uniform), delta=1e-9)
        skewed = FiniteDistribution([0.5, 0.25, 0.25])
        self.assertGreater(shannon_entropy(skewed) - min_entropy(skewed), 1e-9)


class ConditionalMinEntropyTests(SimpleTestCase):
    def test_independent_uniform(self):
        joint = np.outer(np.full(4, 0.25), [0.2, 0.8])
        self.assertAlmostEqual(cond_min_entropy(joint), 2.0)

    def test_x_equals_z(self):
        self.assertAlmostEqual(cond_min_entropy(np.diag([0.25] * 4)), 0.0)

    def test_z_reveals_first_bit(self):
        # X = (b1, b2) uniform, Z = b1
        joint = np.zeros((4, 2))
        for x in range(4):
            joint[x, x >> 1] = 0.25
        self.assertAlmostEqual(cond_min_entropy(joint), 1.0)

    def test_zero_probability_z_is_ignored(self):
        joint = np.array([[0.5, 0.0], [0.5, 0.0]])
        self.assertAlmostEqual(cond_min_entropy(joint), 1.0)


class IndependentMinEntropyTests(SimpleTestCase):
    def test_uniform_bits(self):
        lhs, rhs = check_independent_min_entropy(np.full((2, 2, 2), 0.125))
        self.assertAlmostEqual(lhs, 2.0)
        self.assertAlmostEqual(rhs, 2.0)

    def test_random_joints_with_independent_y(self):
        rng = make_rng(99)
        for _ in range(1000):
            sx, sy, sz = (int(v) for v in rng.integers(1, 9, size=3))
            p_xz = FiniteDistribution.random((sx, sz), rng).probabilities
            p_y = FiniteDistribution.random(sy, rng).probabilities
            joint = p_xz[:, None, :] * p_y[None, :, None]
            lhs, rhs = check_independent_min_entropy(joint)
            self.assertLess(abs(lhs - rhs), 1e-9)

    def test_dependent_y_is_rejected(self):
        joint = np.zeros((2, 2, 1))
        joint[0, 0, 0] = joint[1, 1, 0] = 0.5  # Y = X
        with self.assertRaises(PreconditionError):
            check_independent_min_entropy(joint)


class LeakageBudgetTests(SimpleTestCase):
    def test_full_rate_leaks_nothing(self):
        budget = leakage_budget(500, 1000, 1, 0)
        self.assertEqual(budget.key_bits_lower_bound, 500)

    def test_reference_parameters(self):
        budget = leakage_budget(190000, 190000, Fraction("0.60933"), 80)
        self.assertEqual(budget.leak_formula_bits, Fraction("74227.3") + 80)
        self.assertAlmostEqual(float(budget.key_bits_lower_bound), 115692.7, delta=1e-6)

    def test_floored_at_zero(self):
        self.assertEqual(leakage_budget(10, 1000, Fraction(1, 2), 0).key_bits_lower_bound, 0)

    def test_never_exceeds_prior(self):
        rng = random.Random(1)
        for _ in range(200):
            h = rng.randint(0, 10**5)
            budget = leakage_budget(h, rng.randint(0, 10**5), Fraction(rng.randint(0, 100), 100), rng.randint(0, 100))
            self.assertLessEqual(budget.key_bits_lower_bound, h)

    def test_raw_form_agrees_with_rate_form(self):
        rng = random.Random(7)
        for _ in range(1000):
            n = rng.randint(2, 10**6)
            k = rng.randint(1, n - 1)
            s = rng.randint(0, k)
            p = rng.randint(0, n - k - (1 if s == k else 0))
            h = Fraction(rng.randint(0, 10**6), rng.randint(1, 1000))
            t = rng.randint(0, 200)
            payload = n - s - p
            budget = leakage_budget(
                h, payload, Fraction(k - s, payload), t,
                transcript_bits=s + n - k, extension_bits=s + p,
            )
            self.assertEqual(budget.raw_bound, h - budget.leak_formula_bits)

    def test_rejects_bad_inputs(self):
        with self.assertRaises(DomainError):
            leakage_budget(-1, 10, Fraction(1, 2), 0)
        with self.assertRaises(DomainError):
            leakage_budget(1, 10, Fraction(3, 2), 0)


class EfficiencyTests(SimpleTestCase):
    def test_slepian_wolf_limit(self):
        # h(0.11002786) ~ 0.5, so R0 = 1/2 sits on the limit
        p_err = 0.11002786443835955
        metrics = efficiency_metrics(2000, 1000, 0, 0, p_err)
        self.assertAlmostEqual(metrics.f_code, 1.0, delta=1e-6)
        self.assertAlmostEqual(metrics.f_orig, 1.0, delta=1e-6)

    def test_code_efficiency_never_exceeds_original(self):
        rng = random.Random(5)
        for _ in range(1000):
            n = rng.randint(100, 10**5)
            k = rng.randint(1, n - 1)
            s = rng.randint(0, k)
            p = rng.randint(0, n - s - 1)
            p_err = rng.uniform(0.001, 0.499)
            metrics = efficiency_metrics(n, k, s, p, p_err)
            self.assertLessEqual(metrics.f_code, metrics.f_orig * (1 + 1e-12))

    def test_fixed_code_saw_versus_adapted_continuity(self):
        grid = [0.01 + 0.005 * i for i in range(9)]
        fixed = [fixed_code_efficiency(2000, 1000, p) for p in grid]
        self.assertGreater(max(fixed) / min(fixed) - 1, 0.40)

        adapted = []
        for p_err in grid:
            s, p = select_sp(2000, 1000, Fraction(23, 50), p_err, 1.2)
            adapted.append(efficiency_metrics(2000, 1000, s, p, p_err).f_code)
        for a, b in zip(adapted, adapted[1:]):
            self.assertLess(abs(b - a) / a, 0.15)

    def test_degenerate_channel(self):
        with self.assertRaises(DomainError):
            efficiency_metrics(2000, 1000, 0, 0, 0.0)

    def test_secret_rate(self):
        self.assertEqual(secret_rate(0.4, 0.4), 0)
        self.assertAlmostEqual(secret_rate(1.0, binary_entropy(0.068)), 0.641585, delta=1e-6)
        self.assertLessEqual(secret_rate(0.0, 0.3), 0)


class AmplificationTests(SimpleTestCase):
    def test_empty_output(self):
        self.assertEqual(amplify(BitString.random(40, make_rng(1)), 0, hash_seed=3).length, 0)

    def test_zero_input_gives_zero_output(self):
        self.assertEqual(amplify(BitString.zeros(100), 30, hash_seed=9), BitString.zeros(30))

    def test_matches_explicit_toeplitz_product(self):
        x = BitString.random(50, make_rng(2))
        out_len = 20
        t = toeplitz_seed_bits(50, out_len, 4)
        matrix = np.array([[t[i - j + 49] for j in range(50)] for i in range(out_len)])
        expected = (matrix @ x.to_array().astype(np.int64)) % 2
        self.assertEqual(amplify(x, out_len, hash_seed=4).to_array().tolist(), expected.tolist())

    def test_deterministic_per_seed(self):
        x = BitString.random(1000, make_rng(8))
        self.assertEqual(amplify(x, 300, 5), amplify(x, 300, 5))
        self.assertNotEqual(amplify(x, 300, 5), amplify(x, 300, 6))

    def test_output_longer_than_input(self):
        with self.assertRaises(BudgetError):
            amplify(BitString.zeros(10), 11, hash_seed=1)


class KeyBudgetEndpointTests(TestCase):
    def setUp(self):
        self.client = APIClient()

    def test_reference_budget(self):
        response = self.client.post(
            "/api/keybudget/",
            {"h_min_prior": 190000, "n": 200000, "k": 120000, "s": 4228, "p": 5772, "t": 80},
            format="json",
        )
        self.assertEqual(response.status_code, 200)
        data = response.json()["data"]
        self.assertEqual(data["payload_len"], 190000)
        self.assertAlmostEqual(data["key_bits_lower_bound"], 115692.0, delta=1e-6)
        self.assertAlmostEqual(data["raw_bound"], data["key_bits_lower_bound"], delta=1e-6)

    def test_invalid_plan(self):
        response = self.client.post(
            "/api/keybudget/", {"h_min_prior": 10, "n": 100, "k": 100}, format="json"
        )
        self.assertEqual(response.status_code, 400)
        self.assertIn("k", response.json()["errors"])


class KeyBudgetCommandTests(SimpleTestCase):
    def test_prints_bound(self):
        out = StringIO()
        call_command(
            "keybudget", "--h-min-prior", "190000", "--n", "200000", "--k", "120000",
            "--s", "4228", "--p", "5772", "--t", "80", stdout=out,
        )
        self.assertIn("key bits >= 115692.000000", out.getvalue())
        self.assertIn("28943/47500", out.getvalue())

    def test_invalid_parameters(self):
        with self.assertRaises(CommandError):
            call_command("keybudget", "--h-min-prior", "10", "--n", "10", "--k", "20", stdout=StringIO())
