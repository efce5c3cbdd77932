"""
Extended strings and the public transcript Alice sends to Bob.
"""

from dataclasses import dataclass

import numpy as np

from apps.codes.bits import BitString
from apps.codes.ldpc import syndrome
from sp_recon.exceptions import DimensionError
from sp_recon.utils.rng import make_rng
from .plans import SpPlan


@dataclass(frozen=True)
class ExtendedString:
    bits: BitString
    plan: SpPlan

    def role_at(self, index):
        return self.plan.role_at(index)

    def payload(self):
        """Payload positions read back in order; equals the original string."""
        return self.bits.take(self.plan.payload_positions)

    def punctured(self):
        return self.bits.take(self.plan.punctured_positions)

    def shortened(self):
        return self.bits.take(self.plan.shortened_positions)


@dataclass(frozen=True)
class Transcript:
    syndrome: BitString
    shortened_values: BitString

    @property
    def total_bits(self):
        """|C| = s + n - k."""
        return self.shortened_values.length + self.syndrome.length


def _check_length(what, bits, expected):
    if bits.length != expected:
        raise DimensionError(f"{what} must have {expected} bits, got {bits.length}")


def assemble(plan, payload, punctured_bits, shortened_bits):
    """g(payload | punctured | shortened) as an ExtendedString."""
    _check_length("payload", payload, plan.payload_length)
    _check_length("punctured part", punctured_bits, plan.p)
    _check_length("shortened part", shortened_bits, plan.s)
    layout = np.concatenate(
        [payload.to_array(), punctured_bits.to_array(), shortened_bits.to_array()]
    )
    extended = np.empty(plan.n, dtype=np.uint8)
    extended[plan.permutation] = layout
    return ExtendedString(BitString.from_array(extended), plan)


def alice_extend(plan, x, rng_seed):
    """x_hat = g(x | r_A(p) | r_A(s)); also returns r_A(s) for the transcript."""
    _check_length("x", x, plan.payload_length)
    rng = make_rng(rng_seed)
    r_p = BitString.random(plan.p, rng)
    r_s = BitString.random(plan.s, rng)
    return assemble(plan, x, r_p, r_s), r_s


def make_transcript(code, x_hat, r_a_s):
    _check_length("x_hat", x_hat.bits, code.n)
    _check_length("r_A(s)", r_a_s, x_hat.plan.s)
    return Transcript(syndrome=syndrome(code, x_hat.bits), shortened_values=r_a_s)


def bob_extend(plan, y, shortened_values, rng_seed):
    """y_hat = g(y | r_B(p) | r_A(s)) with Bob's own random punctured symbols."""
    _check_length("y", y, plan.payload_length)
    _check_length("shortened values", shortened_values, plan.s)
    r_b_p = BitString.random(plan.p, make_rng(rng_seed))
    return assemble(plan, y, r_b_p, shortened_values)
