import math

import numpy as np
from django.test import SimpleTestCase

from apps.codes.bits import BitString
from apps.reconciliation.channel import BscChannel
from apps.security.entropy import binary_entropy
from sp_recon.exceptions import DimensionError, DomainError
from sp_recon.utils.rng import make_rng
from .protocol import CascadeSession, cascade_reconcile, initial_block_size


def flip(x, *positions):
    bits = x.to_array().copy()
    bits[list(positions)] ^= 1
    return BitString.from_array(bits)


class BlockSizeTests(SimpleTestCase):
    def test_first_block(self):
        self.assertEqual(initial_block_size(0.1), 8)
        self.assertEqual(initial_block_size(0.073), 10)
        self.assertEqual(initial_block_size(0.068), 11)

    def test_doubling(self):
        x = BitString.zeros(64)
        session = CascadeSession(x, x, 0.1, seed=1)
        self.assertEqual(session.block_sizes, [8, 16, 32, 64])


class CascadeTests(SimpleTestCase):
    def test_identical_strings_only_disclose_top_level_parities(self):
        x = BitString.random(64, make_rng(1))
        corrected, leak = cascade_reconcile(x, x, 0.1, seed=2)
        self.assertEqual(corrected, x)
        self.assertEqual(leak, sum(math.ceil(64 / k) for k in (8, 16, 32, 64)))

    def test_single_error_hand_trace(self):
        x = BitString.random(64, make_rng(3))
        session = CascadeSession(x, flip(x, 21), 0.1, seed=4)
        corrected, leak = session.run()
        self.assertEqual(corrected, x)
        # pass 1: 8 block parities plus log2(8) = 3 bisection parities
        self.assertEqual(session.pass_leaks, [11, 4, 2, 1])
        self.assertEqual(leak, 18)

    def test_disclosed_parities_are_true_parities(self):
        rng = make_rng(5)
        x = BitString.random(2000, rng)
        y = BscChannel(0.05).transmit(x, seed=6)
        session = CascadeSession(x, y, 0.05, seed=7, record=True)
        session.run()
        bits = x.to_array()
        self.assertEqual(len(session.oracle.log), session.disclosed_parity_count)
        for indices, parity in session.oracle.log:
            self.assertEqual(int(bits[indices].sum()) & 1, parity)

    def test_leak_is_at_least_first_pass_blocks(self):
        x = BitString.random(1000, make_rng(8))
        y = BscChannel(0.03).transmit(x, seed=9)
        _, leak = cascade_reconcile(x, y, 0.03, seed=10)
        self.assertGreaterEqual(leak, math.ceil(1000 / initial_block_size(0.03)))

    def test_later_passes_use_seeded_permutations(self):
        x = BitString.zeros(100)
        a = CascadeSession(x, x, 0.1, seed=11)
        b = CascadeSession(x, x, 0.1, seed=11)
        self.assertEqual(a.permutations[0].tolist(), list(range(100)))
        for pa, pb in zip(a.permutations, b.permutations):
            self.assertTrue(np.array_equal(pa, pb))

    def test_reference_crossover(self):
        length, p_err, sessions = 10000, 0.068, 100
        clean, leaks = 0, []
        for j in range(sessions):
            x = BitString.random(length, make_rng(100 + j))
            y = BscChannel(p_err).transmit(x, seed=200 + j)
            corrected, leak = cascade_reconcile(x, y, p_err, seed=300 + j)
            clean += corrected == x
            leaks.append(leak)
        self.assertGreaterEqual(clean, 95)
        efficiency = np.mean(leaks) / (length * binary_entropy(p_err))
        self.assertGreater(efficiency, 1.0)

    def test_empty_strings(self):
        corrected, leak = cascade_reconcile(BitString.zeros(0), BitString.zeros(0), 0.1, seed=1)
        self.assertEqual(corrected.length, 0)
        self.assertEqual(leak, 0)

    def test_argument_checks(self):
        with self.assertRaises(DimensionError):
            cascade_reconcile(BitString.zeros(10), BitString.zeros(11), 0.1, seed=1)
        with self.assertRaises(DomainError):
            cascade_reconcile(BitString.zeros(10), BitString.zeros(10), 0.5, seed=1)
