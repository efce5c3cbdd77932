"""
End-to-end protocol frames over a BSC and frame-error-rate estimation.

Frame ``i`` of a run with master seed M uses ``frame_seed = mix_seed(M, i)``;
inside the frame four sub-streams ``mix_seed(frame_seed, 0..3)`` feed Alice's
string, her extension, the channel and Bob's extension. Results therefore do
not depend on how frames are spread over workers.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from apps.codes.bits import BitString
from apps.security.leakage import efficiency_metrics, plan_leakage_budget
from sp_recon.utils.rng import make_rng, mix_seed
from .decoder import DEFAULT_MAX_ITERATIONS, LLR_MAX, DecodeInput, decode, init_llrs
from .extension import alice_extend, bob_extend, make_transcript

logger = logging.getLogger(__name__)

# the decoder needs a p_err strictly inside (0, 0.5) even for ideal channels
DECODER_P_ERR_FLOOR = 1e-9

STATUS_OK = "ok"
STATUS_INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class FrameOutcome:
    success: bool
    leak_bits: int
    iterations: int


@dataclass(frozen=True)
class SweepRow:
    p_err: float
    n: int | None
    k: int | None
    s: int | None
    p: int | None
    rate: Fraction | None
    frames: int
    frame_errors: int
    leak_bits: float | None
    f_code: float | None
    f_orig: float | None
    key_bound_bits: float | None
    master_seed: int
    status: str = STATUS_OK

    @property
    def fer(self):
        return self.frame_errors / self.frames if self.frames else None

    @classmethod
    def infeasible(cls, p_err, code, master_seed):
        return cls(
            p_err=p_err, n=code.n, k=code.k, s=None, p=None, rate=None,
            frames=0, frame_errors=0, leak_bits=None, f_code=None,
            f_orig=None, key_bound_bits=None, master_seed=master_seed,
            status=STATUS_INFEASIBLE,
        )


def decoder_p_err(p_err):
    return min(max(p_err, DECODER_P_ERR_FLOOR), 0.5 - DECODER_P_ERR_FLOOR)


def run_frame(code, plan, channel, frame_seed, max_iterations=DEFAULT_MAX_ITERATIONS, llr_max=LLR_MAX):
    """One protocol execution; success iff Bob recovers x_hat exactly."""
    x_seed, alice_seed, channel_seed, bob_seed = (mix_seed(frame_seed, i) for i in range(4))
    x = BitString.random(plan.payload_length, make_rng(x_seed))
    x_hat, r_a_s = alice_extend(plan, x, alice_seed)
    transcript = make_transcript(code, x_hat, r_a_s)

    y = channel.transmit(x, channel_seed)
    y_hat = bob_extend(plan, y, transcript.shortened_values, bob_seed)

    llr = init_llrs(plan, y_hat, decoder_p_err(channel.p_err), llr_max=llr_max)
    result = decode(
        DecodeInput(code, transcript.syndrome, llr),
        max_iterations=max_iterations,
        llr_max=llr_max,
    )
    return FrameOutcome(
        success=result.estimate == x_hat.bits,
        leak_bits=transcript.total_bits,
        iterations=result.iterations_used,
    )


def estimate_fer(
    code,
    plan,
    channel,
    frames,
    master_seed,
    workers=1,
    max_iterations=DEFAULT_MAX_ITERATIONS,
    llr_max=LLR_MAX,
    h_min_prior=None,
    security_t=0,
):
    if frames < 1:
        raise ValueError(f"need at least one frame, got {frames}")

    def frame(i):
        return run_frame(code, plan, channel, mix_seed(master_seed, i), max_iterations, llr_max)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(frame, range(frames)))
    else:
        outcomes = [frame(i) for i in range(frames)]

    frame_errors = sum(1 for outcome in outcomes if not outcome.success)
    leak_bits = plan.transcript_bits

    f_code = f_orig = None
    if 0 < channel.p_err < 0.5:
        metrics = efficiency_metrics(plan.n, plan.k, plan.s, plan.p, channel.p_err)
        f_code, f_orig = metrics.f_code, metrics.f_orig
    prior = plan.payload_length if h_min_prior is None else h_min_prior
    budget = plan_leakage_budget(prior, plan, security_t)

    logger.info(
        f"p_err={channel.p_err} s={plan.s} p={plan.p}: "
        f"{frame_errors}/{frames} frame errors"
    )
    return SweepRow(
        p_err=channel.p_err,
        n=plan.n,
        k=plan.k,
        s=plan.s,
        p=plan.p,
        rate=plan.adapted_rate,
        frames=frames,
        frame_errors=frame_errors,
        leak_bits=leak_bits,
        f_code=f_code,
        f_orig=f_orig,
        key_bound_bits=float(budget.key_bits_lower_bound),
        master_seed=master_seed,
    )
