import math
import random
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from apps.codes.bits import BitString
from apps.codes.construction import generate_gallager
from apps.codes.ldpc import syndrome
from apps.security.entropy import binary_entropy
from apps.security.leakage import efficiency_metrics
from sp_recon.exceptions import (
    ConfigError,
    DegenerateLengthError,
    DimensionError,
    DomainError,
    InfeasibleRateError,
    PlanError,
)
from sp_recon.utils.rng import make_rng
from .calibration import (
    EfficiencyTable,
    calibrate_efficiency,
    calibrate_point,
    format_table,
    parse_table,
)
from .channel import BscChannel
from .decoder import DecodeInput, channel_llr, decode, init_llrs, verify
from .extension import ExtendedString, alice_extend, assemble, bob_extend, make_transcript
from .plans import (
    Role,
    adapted_rate,
    budget_size,
    build_plan,
    choose_code,
    dump_plan,
    fisher_yates,
    load_plan,
    select_sp,
)
from .simulation import estimate_fer, run_frame


class FakeCode:
    """Just the dimensions select_sp and choose_code look at."""

    def __init__(self, n, k, identifier="fake"):
        self.n, self.k, self.identifier = n, k, identifier


class SelectSpTests(SimpleTestCase):
    def test_reference_parameters(self):
        s, p = select_sp(200000, 120000, 0.05, 0.068, 1.09)
        self.assertEqual((s, p), (4228, 5772))
        rate = adapted_rate(200000, 120000, s, p)
        self.assertEqual(rate, Fraction(115772, 190000))
        self.assertAlmostEqual(float(rate), 0.60933, delta=1e-5)

        metrics = efficiency_metrics(200000, 120000, s, p, 0.068)
        self.assertAlmostEqual(metrics.f_code, 1.09, delta=5e-4)
        self.assertAlmostEqual(metrics.f_orig, 1.2369, delta=1e-3)

    def test_no_shortening_when_mother_rate_is_low_enough(self):
        self.assertEqual(select_sp(2000, 1000, 0.05, 0.01, 1.0), (0, 100))

    def test_infeasible_rate(self):
        with self.assertRaises(InfeasibleRateError):
            select_sp(2000, 1000, 0.05, 0.2, 1.0)

    def test_budget_larger_than_k(self):
        with self.assertRaises(PlanError):
            select_sp(10, 2, 0.5, 0.1, 1.0)

    def test_domain_errors(self):
        for p_err in (0, 0.5, -0.1):
            with self.assertRaises(DomainError):
                select_sp(2000, 1000, 0.05, p_err, 1.1)
        with self.assertRaises(DomainError):
            select_sp(2000, 1000, 0.05, 0.05, 0.9)
        with self.assertRaises(DomainError):
            select_sp(2000, 1000, 1.5, 0.05, 1.1)

    def test_unreachable_calibrated_efficiency(self):
        with self.assertRaises(InfeasibleRateError):
            select_sp(2000, 1000, 0.05, 0.02, lambda p_err: math.inf)

    def test_shortening_grows_with_efficiency(self):
        previous = -1
        for f in (1.0, 1.1, 1.2, 1.3):
            s, p = select_sp(2000, 1000, Fraction(23, 50), 0.05, f)
            self.assertEqual(s + p, 920)
            self.assertGreaterEqual(s, previous)
            previous = s

    def test_shortening_is_minimal(self):
        rng = random.Random(13)
        checked = 0
        for _ in range(1000):
            n = rng.randint(100, 10**5)
            k = rng.randint(n // 4, n - 1)
            delta = Fraction(rng.randint(0, 30), 100)
            p_err = rng.uniform(0.005, 0.2)
            f = rng.uniform(1.0, 1.5)
            try:
                s, p = select_sp(n, k, delta, p_err, f)
            except PlanError:
                continue
            target = Fraction(1 - f * binary_entropy(p_err))
            self.assertLessEqual(adapted_rate(n, k, s, p), target)
            if s > 0:
                self.assertGreater(adapted_rate(n, k, s - 1, p + 1), target)
            checked += 1
        self.assertGreater(checked, 100)

    def test_budget_rounds_ties_up(self):
        self.assertEqual(budget_size(2000, 0.05), 100)
        self.assertEqual(budget_size(10, Fraction(1, 4)), 3)
        self.assertEqual(budget_size(10, 0), 0)


class AdaptedRateTests(SimpleTestCase):
    def test_exact_against_integer_arithmetic(self):
        rng = random.Random(2024)
        for _ in range(1000):
            n = rng.randint(2, 10**6)
            k = rng.randint(1, n - 1)
            s = rng.randint(0, k)
            p = rng.randint(0, n - s - 1)
            rate = adapted_rate(n, k, s, p)
            self.assertEqual(rate.numerator * (n - s - p), rate.denominator * (k - s))

    def test_degenerate_length(self):
        with self.assertRaises(DegenerateLengthError):
            adapted_rate(10, 5, 5, 5)

    def test_limits(self):
        self.assertEqual(adapted_rate(2000, 1000, 0, 0), Fraction(1, 2))
        self.assertEqual(adapted_rate(2000, 1000, 100, 0), Fraction(900, 1900))
        self.assertEqual(adapted_rate(2000, 1000, 0, 100), Fraction(1000, 1900))


class PlanTests(SimpleTestCase):
    def setUp(self):
        self.code = generate_gallager(120, 3, 6, seed=1)

    def test_identity_permutation_without_seed(self):
        self.assertEqual(fisher_yates(10, None).tolist(), list(range(10)))

    def test_seeded_permutation(self):
        perm = fisher_yates(500, 9)
        self.assertEqual(sorted(perm.tolist()), list(range(500)))
        self.assertEqual(perm.tolist(), fisher_yates(500, 9).tolist())
        self.assertNotEqual(perm.tolist(), fisher_yates(500, 10).tolist())

    def test_identity_layout_of_a_tiny_plan(self):
        plan = build_plan(FakeCode(4, 2, "tiny"), 1, 1, permutation_seed=None)
        self.assertEqual(
            plan.position_roles.tolist(), [Role.PAYLOAD, Role.PAYLOAD, Role.PUNCTURED, Role.SHORTENED]
        )

    def test_roles_partition_positions(self):
        plan = build_plan(self.code, 7, 5, permutation_seed=3)
        roles = plan.position_roles
        self.assertEqual(int((roles == Role.PAYLOAD).sum()), 108)
        self.assertEqual(int((roles == Role.PUNCTURED).sum()), 5)
        self.assertEqual(int((roles == Role.SHORTENED).sum()), 7)
        position = int(plan.payload_positions[4])
        self.assertEqual(plan.role_at(position), (Role.PAYLOAD, 4))
        self.assertEqual(plan.role_at(int(plan.shortened_positions[0])), (Role.SHORTENED, None))

    def test_plan_bounds(self):
        with self.assertRaises(PlanError):
            build_plan(self.code, 61, 0, None)
        with self.assertRaises(PlanError):
            build_plan(self.code, 60, 61, None)

    def test_plan_record_round_trip(self):
        plan = build_plan(self.code, 4, 8, permutation_seed=77)
        self.assertEqual(load_plan(dump_plan(plan), self.code), plan)
        unseeded = build_plan(self.code, 0, 0, permutation_seed=None)
        self.assertEqual(load_plan(dump_plan(unseeded), self.code), unseeded)

    def test_plan_record_checks_the_code(self):
        other = generate_gallager(120, 3, 6, seed=2)
        record = dump_plan(build_plan(self.code, 4, 8, permutation_seed=77))
        with self.assertRaises(PlanError):
            load_plan(record, other)
        with self.assertRaises(PlanError):
            load_plan("n=120\n", self.code)

    def test_choose_code_prefers_least_shortening(self):
        high = FakeCode(2000, 1400, "high")
        low = FakeCode(2000, 1000, "low")
        code, s, p = choose_code([high, low], 0.05, 0.01, 1.1)
        self.assertIs(code, high)
        code, s, p = choose_code([high, low], 0.05, 0.06, 1.1)
        self.assertIs(code, low)
        with self.assertRaises(InfeasibleRateError):
            choose_code([high, low], 0.05, 0.3, 1.1)


class ExtensionTests(SimpleTestCase):
    def setUp(self):
        self.code = generate_gallager(120, 3, 6, seed=1)
        self.plan = build_plan(self.code, 6, 9, permutation_seed=5)

    def test_payload_reads_back_in_order(self):
        x = BitString.random(self.plan.payload_length, make_rng(1))
        x_hat, r_s = alice_extend(self.plan, x, rng_seed=2)
        self.assertEqual(x_hat.payload(), x)
        self.assertEqual(x_hat.shortened(), r_s)
        self.assertEqual(x_hat.bits.length, 120)

    def test_hand_assembled_extension(self):
        plan = build_plan(FakeCode(4, 2, "tiny"), 1, 1, permutation_seed=None)
        x_hat = assemble(plan, BitString.from_str("10"), BitString.from_str("0"), BitString.from_str("1"))
        self.assertEqual(str(x_hat.bits), "1001")

    def test_transcript_size(self):
        x = BitString.random(self.plan.payload_length, make_rng(1))
        x_hat, r_s = alice_extend(self.plan, x, rng_seed=2)
        transcript = make_transcript(self.code, x_hat, r_s)
        self.assertEqual(transcript.total_bits, 6 + 120 - 60)
        self.assertEqual(transcript.syndrome, syndrome(self.code, x_hat.bits))

    def test_bob_shares_shortened_but_not_punctured_symbols(self):
        x = BitString.random(self.plan.payload_length, make_rng(1))
        x_hat, r_s = alice_extend(self.plan, x, rng_seed=2)
        y_hat = bob_extend(self.plan, x, r_s, rng_seed=3)
        self.assertEqual(y_hat.shortened(), x_hat.shortened())
        self.assertEqual(y_hat.payload(), x_hat.payload())
        differing = np.flatnonzero((x_hat.bits ^ y_hat.bits).to_array())
        self.assertTrue(set(differing.tolist()) <= set(self.plan.punctured_positions.tolist()))

    def test_bob_punctured_symbols_agree_half_the_time(self):
        x = BitString.random(self.plan.payload_length, make_rng(1))
        x_hat, r_s = alice_extend(self.plan, x, rng_seed=2)
        alice_punctured = x_hat.punctured()
        agreements = [
            self.plan.p
            - bob_extend(self.plan, x, r_s, rng_seed=seed).punctured().hamming_distance(alice_punctured)
            for seed in range(10000)
        ]
        self.assertAlmostEqual(float(np.mean(agreements)), self.plan.p / 2, delta=0.1)

    def test_wrong_lengths(self):
        with self.assertRaises(DimensionError):
            alice_extend(self.plan, BitString.zeros(10), rng_seed=0)
        with self.assertRaises(DimensionError):
            assemble(self.plan, BitString.zeros(105), BitString.zeros(8), BitString.zeros(6))


class DecoderTests(SimpleTestCase):
    def setUp(self):
        self.code = generate_gallager(120, 3, 6, seed=1)

    def test_channel_llr(self):
        self.assertAlmostEqual(channel_llr(0.1), math.log(9))
        with self.assertRaises(DomainError):
            channel_llr(0.5)

    def test_initial_llrs_follow_roles(self):
        plan = build_plan(self.code, 4, 6, permutation_seed=8)
        y_hat = ExtendedString(BitString.zeros(120), plan)
        llr = init_llrs(plan, y_hat, 0.1)
        roles = plan.position_roles
        self.assertTrue(np.all(llr[roles == Role.PUNCTURED] == 0))
        self.assertTrue(np.all(llr[roles == Role.SHORTENED] == 64.0))
        self.assertTrue(np.allclose(llr[roles == Role.PAYLOAD], math.log(9)))

    def test_matching_input_converges_immediately(self):
        x = BitString.random(120, make_rng(4))
        llr = (1.0 - 2.0 * x.to_array()) * channel_llr(0.05)
        result = decode(DecodeInput(self.code, syndrome(self.code, x), llr))
        self.assertTrue(result.converged)
        self.assertEqual(result.iterations_used, 0)
        self.assertEqual(result.estimate, x)

    def test_corrects_a_few_errors(self):
        rng = make_rng(6)
        x = BitString.random(120, rng)
        error = np.zeros(120, dtype=np.uint8)
        error[[3, 97]] = 1
        y = x ^ BitString.from_array(error)
        llr = (1.0 - 2.0 * y.to_array()) * channel_llr(0.03)
        result = decode(DecodeInput(self.code, syndrome(self.code, x), llr))
        self.assertTrue(result.converged)
        self.assertTrue(verify(self.code, result.estimate, syndrome(self.code, x)))

    def test_converged_estimates_satisfy_the_syndrome(self):
        rng = make_rng(12)
        channel = BscChannel(0.06)
        for trial in range(50):
            x = BitString.random(120, rng)
            y = channel.transmit(x, seed=trial)
            target = syndrome(self.code, x)
            llr = (1.0 - 2.0 * y.to_array()) * channel_llr(0.06)
            result = decode(DecodeInput(self.code, target, llr), max_iterations=50)
            if result.converged:
                self.assertTrue(verify(self.code, result.estimate, target))

    def test_decoding_commutes_with_translation(self):
        rng = make_rng(21)
        channel = BscChannel(0.05)
        reliability = channel_llr(0.05)
        for trial in range(100):
            x = BitString.random(120, rng)
            y = channel.transmit(x, seed=1000 + trial)
            c = BitString.random(120, rng)
            llr = (1.0 - 2.0 * y.to_array()) * reliability
            shifted = (1.0 - 2.0 * (y ^ c).to_array()) * reliability
            base = decode(DecodeInput(self.code, syndrome(self.code, x), llr), max_iterations=60)
            moved = decode(
                DecodeInput(self.code, syndrome(self.code, x ^ c), shifted), max_iterations=60
            )
            self.assertEqual(moved.converged, base.converged)
            self.assertEqual(moved.iterations_used, base.iterations_used)
            self.assertEqual(moved.estimate, base.estimate ^ c)

    def test_shortened_positions_never_flip(self):
        plan = build_plan(self.code, 10, 0, permutation_seed=4)
        x = BitString.random(plan.payload_length, make_rng(2))
        x_hat, r_s = alice_extend(plan, x, rng_seed=3)
        transcript = make_transcript(self.code, x_hat, r_s)
        y = BscChannel(0.08).transmit(x, seed=5)
        y_hat = bob_extend(plan, y, r_s, rng_seed=6)
        llr = init_llrs(plan, y_hat, 0.08)
        result = decode(DecodeInput(self.code, transcript.syndrome, llr), max_iterations=30)
        self.assertEqual(result.estimate.take(plan.shortened_positions), r_s)

    def test_input_dimensions(self):
        with self.assertRaises(DimensionError):
            DecodeInput(self.code, BitString.zeros(59), np.zeros(120))
        with self.assertRaises(DimensionError):
            DecodeInput(self.code, BitString.zeros(60), np.zeros(119))


class ChannelTests(SimpleTestCase):
    def test_extreme_channels(self):
        x = BitString.random(300, make_rng(1))
        self.assertEqual(BscChannel(0).transmit(x, seed=3), x)
        self.assertEqual(BscChannel(1).transmit(x, seed=3), x ^ BitString.from_array(np.ones(300)))

    def test_flip_rate(self):
        x = BitString.zeros(100000)
        flips = BscChannel(0.1).transmit(x, seed=9).weight()
        self.assertLess(abs(flips - 10000), 400)

    def test_rejects_bad_probability(self):
        with self.assertRaises(DomainError):
            BscChannel(1.5)


class SimulationTests(SimpleTestCase):
    def setUp(self):
        self.code = generate_gallager(240, 3, 6, seed=1)

    def test_noiseless_frame_succeeds(self):
        plan = build_plan(self.code, 5, 7, permutation_seed=1)
        outcome = run_frame(self.code, plan, BscChannel(0.0), frame_seed=99)
        self.assertTrue(outcome.success)
        self.assertEqual(outcome.leak_bits, 5 + 240 - 120)

    def test_frame_is_reproducible(self):
        plan = build_plan(self.code, 5, 7, permutation_seed=1)
        channel = BscChannel(0.05)
        self.assertEqual(
            run_frame(self.code, plan, channel, frame_seed=3),
            run_frame(self.code, plan, channel, frame_seed=3),
        )

    def test_worker_count_does_not_change_results(self):
        plan = build_plan(self.code, 8, 4, permutation_seed=2)
        channel = BscChannel(0.05)
        single = estimate_fer(self.code, plan, channel, 40, master_seed=17, workers=1)
        pooled = estimate_fer(self.code, plan, channel, 40, master_seed=17, workers=8)
        self.assertEqual(single, pooled)

    def test_row_contents(self):
        plan = build_plan(self.code, 8, 4, permutation_seed=2)
        row = estimate_fer(self.code, plan, BscChannel(0.03), 10, master_seed=5, security_t=10)
        self.assertEqual(row.leak_bits, 128)
        self.assertEqual(row.rate, Fraction(112, 228))
        self.assertEqual(row.key_bound_bits, float(max(0, 228 - 228 * (1 - Fraction(112, 228)) - 10)))
        self.assertLessEqual(row.frame_errors, row.frames)

    def test_needs_frames(self):
        plan = build_plan(self.code, 0, 0, permutation_seed=None)
        with self.assertRaises(ValueError):
            estimate_fer(self.code, plan, BscChannel(0.03), 0, master_seed=1)

    def test_frame_errors_grow_with_crossover(self):
        plan = build_plan(self.code, 0, 0, permutation_seed=None)
        low = estimate_fer(self.code, plan, BscChannel(0.01), 200, master_seed=31)
        high = estimate_fer(self.code, plan, BscChannel(0.06), 200, master_seed=31)
        self.assertLessEqual(low.fer, high.fer)

    def test_desk_scale_code_without_adaptation(self):
        code = generate_gallager(2000, 3, 6, seed=1)
        plan = build_plan(code, 0, 0, permutation_seed=None)
        row = estimate_fer(code, plan, BscChannel(0.02), 100, master_seed=7)
        self.assertLess(row.fer, 0.05)

    def test_desk_scale_protocol(self):
        code = generate_gallager(2000, 3, 6, seed=1)
        point = calibrate_point(
            code, 0.05, 0.02, fer_target=0.10, frames=50,
            permutation_seed=11, frame_seed=12,
        )
        self.assertTrue(point.reachable)
        s, p = select_sp(code.n, code.k, 0.05, 0.02, point.f_eff)
        plan = build_plan(code, s, p, permutation_seed=11)
        row = estimate_fer(code, plan, BscChannel(0.02), 200, master_seed=2024)
        self.assertLessEqual(row.fer, 0.10)


class EfficiencyTableTests(SimpleTestCase):
    def test_interpolates_and_clamps(self):
        table = EfficiencyTable([(0.02, 1.2), (0.04, 1.4)])
        self.assertAlmostEqual(table(0.03), 1.3)
        self.assertEqual(table(0.01), 1.2)
        self.assertEqual(table(0.3), 1.4)
        self.assertEqual(table(0.04), 1.4)

    def test_unreachable_points_propagate(self):
        table = EfficiencyTable([(0.02, 1.2), (0.04, math.inf)])
        self.assertEqual(table(0.03), math.inf)
        self.assertEqual(table(0.02), 1.2)

    def test_text_round_trip(self):
        table = EfficiencyTable([(0.02, 1.25), (0.03, math.inf), (0.01, 1.1)])
        text = format_table(table)
        self.assertEqual(text, "0.01 1.10\n0.02 1.25\n0.03 inf\n")
        self.assertEqual(parse_table(text).items(), table.items())

    def test_rejects_bad_tables(self):
        with self.assertRaises(ConfigError):
            parse_table("")
        with self.assertRaises(ConfigError):
            parse_table("0.01\n")
        with self.assertRaises(ConfigError):
            parse_table("0.01 1.1\n0.01 1.2\n")

    def test_usable_as_select_sp_efficiency(self):
        table = EfficiencyTable([(0.01, 1.09), (0.1, 1.09)])
        self.assertEqual(select_sp(200000, 120000, 0.05, 0.068, table), (4228, 5772))


class CalibrationTests(SimpleTestCase):
    def setUp(self):
        self.code = generate_gallager(240, 3, 6, seed=1)

    def test_finds_a_reachable_efficiency(self):
        point = calibrate_point(
            self.code, Fraction(1, 4), 0.04, fer_target=0.2, frames=20,
            permutation_seed=1, frame_seed=2,
        )
        self.assertTrue(point.reachable)
        self.assertGreaterEqual(point.f_eff, 1.0)
        self.assertLessEqual(point.f_eff, 3.0)
        self.assertLessEqual(point.fer, 0.2)

    def test_calibrated_plan_holds_on_fresh_frames(self):
        point = calibrate_point(
            self.code, Fraction(1, 4), 0.04, fer_target=0.2, frames=50,
            permutation_seed=1, frame_seed=2,
        )
        self.assertTrue(point.reachable)
        plan = build_plan(self.code, point.s, point.p, permutation_seed=1)
        fresh = estimate_fer(self.code, plan, BscChannel(0.04), 100, master_seed=999)
        # 95% binomial slack covering both estimates
        slack = 1.96 * math.sqrt(0.2 * 0.8 * (1 / 50 + 1 / 100))
        self.assertLessEqual(fresh.fer, 0.2 + slack)

    def test_unreachable_point(self):
        point = calibrate_point(
            self.code, 0.05, 0.2, fer_target=0.05, frames=5,
            permutation_seed=1, frame_seed=2,
        )
        self.assertFalse(point.reachable)

    def test_grid_and_target_validation(self):
        with self.assertRaises(ConfigError):
            calibrate_efficiency(self.code, 0.05, [0.02], fer_target=1.5)
        self.assertEqual(calibrate_efficiency(self.code, 0.05, [], frames=5), [])
