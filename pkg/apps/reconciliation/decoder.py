"""
Syndrome-conditioned sum-product decoding with side information.

Bob decodes his extended string y_hat towards the coset of Alice's syndrome:
every check node's outgoing message is multiplied by (1 - 2 m_j), which turns
the ordinary channel decoder into a Slepian-Wolf decoder. Messages follow the
exact tanh rule on a flooding schedule, computed edge-parallel with numpy.

Conventions held fixed for reproducibility:
  - LLRs are natural-log, positive favours bit 0;
  - all messages are clamped to +-LLR_MAX each iteration;
  - a position whose channel LLR magnitude reaches LLR_MAX is pinned: it sends
    and decides its channel value (shortened symbols never flip);
  - a total LLR of exactly 0 decides bit 0.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from apps.codes.bits import BitString
from apps.codes.ldpc import ParityCheckCode, syndrome
from sp_recon.exceptions import DimensionError, DomainError
from .plans import Role

logger = logging.getLogger(__name__)

LLR_MAX = 64.0
DEFAULT_MAX_ITERATIONS = 200


@dataclass(frozen=True, eq=False)
class DecodeInput:
    code: ParityCheckCode
    target_syndrome: BitString
    channel_llr: np.ndarray

    def __post_init__(self):
        if self.target_syndrome.length != self.code.m_rows:
            raise DimensionError(
                f"syndrome must have {self.code.m_rows} bits, got {self.target_syndrome.length}"
            )
        if np.shape(self.channel_llr) != (self.code.n,):
            raise DimensionError(
                f"need {self.code.n} channel LLRs, got shape {np.shape(self.channel_llr)}"
            )


@dataclass(frozen=True)
class DecodeResult:
    estimate: BitString
    converged: bool
    iterations_used: int


def channel_llr(p_err):
    """ln((1 - p) / p) for a BSC with crossover probability p."""
    if not 0 < p_err < 0.5:
        raise DomainError(f"p_err must lie in (0, 0.5), got {p_err}")
    return math.log1p(-p_err) - math.log(p_err)


def init_llrs(plan, y_hat, p_err, llr_max=LLR_MAX):
    """Per-position LLRs for Bob's extended string.

    Payload: the BSC reliability signed by the observed bit. Punctured: 0, as
    Bob's own random bits say nothing about Alice's. Shortened: +-llr_max from
    the public value.
    """
    reliability = min(channel_llr(p_err), llr_max)
    signs = 1.0 - 2.0 * y_hat.bits.to_array()
    llr = np.zeros(plan.n, dtype=np.float64)
    roles = plan.position_roles
    payload = roles == Role.PAYLOAD
    shortened = roles == Role.SHORTENED
    llr[payload] = signs[payload] * reliability
    llr[shortened] = signs[shortened] * llr_max
    return llr


def _matches(code, hard, target):
    return np.array_equal(code.check_parities(hard), target)


def decode(decode_input, max_iterations=DEFAULT_MAX_ITERATIONS, llr_max=LLR_MAX):
    code = decode_input.code
    n, m_rows = code.n, code.m_rows
    edge_check = code.edge_rows
    edge_var = code.row_index
    target = decode_input.target_syndrome.to_array().astype(np.int64)
    coset_sign = (1.0 - 2.0 * target)[edge_check]

    llr = np.clip(np.asarray(decode_input.channel_llr, dtype=np.float64), -llr_max, llr_max)
    pinned = np.abs(llr) >= llr_max
    pinned_edges = pinned[edge_var]
    edge_llr = llr[edge_var]

    hard = (llr < 0).astype(np.uint8)
    if _matches(code, hard, target):
        return DecodeResult(BitString.from_array(hard), True, 0)

    c2v = np.zeros(code.edge_count, dtype=np.float64)
    total = llr.copy()
    for iteration in range(1, max_iterations + 1):
        # variable -> check
        v2c = total[edge_var] - c2v
        v2c[pinned_edges] = edge_llr[pinned_edges]
        np.clip(v2c, -llr_max, llr_max, out=v2c)

        # check -> variable, tanh rule in log-magnitude form
        t = np.tanh(v2c / 2.0)
        zero = t == 0.0
        negative = t < 0.0
        log_mag = np.log(np.where(zero, 1.0, np.abs(t)))
        check_log = np.bincount(edge_check, weights=log_mag, minlength=m_rows)
        check_zeros = np.bincount(edge_check, weights=zero, minlength=m_rows)
        check_negs = np.bincount(edge_check, weights=negative, minlength=m_rows)

        other_zeros = check_zeros[edge_check] - zero
        other_log = np.minimum(check_log[edge_check] - log_mag, 0.0)
        magnitude = np.where(other_zeros > 0.5, 0.0, np.exp(other_log))
        odd = (np.rint(check_negs[edge_check] - negative).astype(np.int64) & 1) == 1
        extrinsic = np.where(odd, -magnitude, magnitude) * coset_sign
        with np.errstate(divide="ignore"):
            c2v = 2.0 * np.arctanh(extrinsic)
        np.clip(c2v, -llr_max, llr_max, out=c2v)

        total = llr + np.bincount(edge_var, weights=c2v, minlength=n)
        total[pinned] = llr[pinned]
        hard = (total < 0).astype(np.uint8)
        if _matches(code, hard, target):
            logger.debug(f"decode converged after {iteration} iterations")
            return DecodeResult(BitString.from_array(hard), True, iteration)

    return DecodeResult(BitString.from_array(hard), False, max_iterations)


def verify(code, estimate, target_syndrome):
    if target_syndrome.length != code.m_rows:
        raise DimensionError(
            f"syndrome must have {code.m_rows} bits, got {target_syndrome.length}"
        )
    return syndrome(code, estimate) == target_syndrome
