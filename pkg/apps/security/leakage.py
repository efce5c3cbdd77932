"""
Key-length accounting after reconciliation with an adapted code.

Rates and bit counts stay exact (Fraction) until they are reported.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from sp_recon.exceptions import DegenerateLengthError, DomainError
from sp_recon.utils.numbers import as_fraction
from .entropy import binary_entropy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LeakageBudget:
    h_min_prior: Fraction
    payload_len: int
    adapted_rate: Fraction
    security_t: Fraction
    transcript_bits: int | None = None
    extension_bits: int | None = None

    @property
    def leak_formula_bits(self):
        """|X| (1 - R) + t."""
        return self.payload_len * (1 - self.adapted_rate) + self.security_t

    @property
    def key_bits_lower_bound(self):
        return max(Fraction(0), self.h_min_prior - self.leak_formula_bits)

    @property
    def raw_bound(self):
        """H_inf(X_hat | Z) - |C| - t, where X_hat carries s + p fresh random bits.

        None unless the transcript and extension sizes are known.
        """
        if self.transcript_bits is None or self.extension_bits is None:
            return None
        return self.h_min_prior + self.extension_bits - self.transcript_bits - self.security_t

    def as_dict(self):
        return {
            "h_min_prior": float(self.h_min_prior),
            "payload_len": self.payload_len,
            "adapted_rate": float(self.adapted_rate),
            "security_t": float(self.security_t),
            "leak_formula_bits": float(self.leak_formula_bits),
            "key_bits_lower_bound": float(self.key_bits_lower_bound),
            "raw_bound": None if self.raw_bound is None else float(self.raw_bound),
        }


def leakage_budget(h_min_prior, payload_len, rate, t, transcript_bits=None, extension_bits=None):
    h_min_prior, rate, t = as_fraction(h_min_prior), as_fraction(rate), as_fraction(t)
    if h_min_prior < 0 or payload_len < 0 or t < 0:
        raise DomainError("entropy, payload length and t must be nonnegative")
    if not 0 <= rate <= 1:
        raise DomainError(f"rate must lie in [0, 1], got {rate}")
    return LeakageBudget(h_min_prior, payload_len, rate, t, transcript_bits, extension_bits)


def plan_leakage_budget(h_min_prior, plan, t):
    return leakage_budget(
        h_min_prior,
        plan.payload_length,
        plan.adapted_rate,
        t,
        transcript_bits=plan.transcript_bits,
        extension_bits=plan.s + plan.p,
    )


@dataclass(frozen=True)
class EfficiencyMetrics:
    f_orig: float
    f_code: float


def _channel_entropy(p_err):
    if not 0 < p_err < 0.5:
        raise DomainError(f"p_err must lie in (0, 0.5), got {p_err}")
    h = binary_entropy(p_err)
    if h == 0:
        raise DomainError(f"degenerate channel: h({p_err}) = 0")
    return h


def efficiency_metrics(n, k, s, p, p_err):
    """f_orig counts |C| = s + n - k against the n - p - s original bits;
    f_code is (1 - R) / h(p_err) for the adapted rate R.
    """
    h = _channel_entropy(p_err)
    payload = n - p - s
    if payload == 0:
        raise DegenerateLengthError("n - s - p = 0: nothing left to reconcile")
    rate = Fraction(k - s, payload)
    return EfficiencyMetrics(
        f_orig=(s + n - k) / (payload * h),
        f_code=float(1 - rate) / h,
    )


def fixed_code_efficiency(n, k, p_err):
    """(1 - R0) / h(p_err) for the mother code used without adaptation."""
    return float(1 - Fraction(k, n)) / _channel_entropy(p_err)


def secret_rate(h_x_given_z, h_x_given_y):
    return h_x_given_z - h_x_given_y
