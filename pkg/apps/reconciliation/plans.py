"""
Public reconciliation plans: choosing how many symbols to shorten and
puncture, and laying them out under the shared permutation.

Layout before permutation is ``x | r(p) | r(s)``: the payload occupies the
first n-p-s slots, the punctured symbols the next p and the shortened ones
the last s. Slot ``i`` of that layout lands on extended position
``permutation[i]``.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from functools import cached_property

import numpy as np

from apps.security.entropy import binary_entropy
from sp_recon.exceptions import (
    DegenerateLengthError,
    DegenerateTargetError,
    DomainError,
    InfeasibleRateError,
    PlanError,
)
from sp_recon.utils.numbers import as_fraction
from sp_recon.utils.rng import make_rng

logger = logging.getLogger(__name__)

PLAN_KEYS = ("n", "k", "s", "p", "permutation_seed", "code")


class Role(IntEnum):
    PAYLOAD = 0
    PUNCTURED = 1
    SHORTENED = 2


def fisher_yates(n, seed):
    """Permutation of range(n) drawn from ``seed``; ``None`` gives the identity.

    For i = n-1 down to 1 a single PCG64 stream supplies j uniform on [0, i]
    (all draws made up front, in that order) and slots i and j are swapped.
    """
    perm = list(range(n))
    if seed is not None and n > 1:
        draws = make_rng(seed).integers(0, np.arange(n, 1, -1, dtype=np.int64))
        for i, j in zip(range(n - 1, 0, -1), draws.tolist()):
            perm[i], perm[j] = perm[j], perm[i]
    out = np.asarray(perm, dtype=np.int64)
    out.flags.writeable = False
    return out


def adapted_rate(n, k, s, p):
    """R = (k - s) / (n - s - p), exactly."""
    if n - s - p == 0:
        raise DegenerateLengthError("n - s - p = 0: nothing left to reconcile")
    return Fraction(k - s, n - s - p)


def budget_size(n, delta):
    """round(delta * n), ties rounded up."""
    return math.floor(as_fraction(delta) * n + Fraction(1, 2))


def _efficiency_at(f_eff, p_err):
    return f_eff(p_err) if callable(f_eff) else f_eff


def select_sp(n, k, delta, p_err, f_eff):
    """Minimal shortening s (and p = d - s) reaching R <= 1 - f h(p_err).

    ``f_eff`` is a constant or a callable mapping p_err to an efficiency, such
    as a calibrated EfficiencyTable.
    """
    if not 0 < p_err < 0.5:
        raise DomainError(f"p_err must lie in (0, 0.5), got {p_err}")
    f = _efficiency_at(f_eff, p_err)
    if not f >= 1:
        raise DomainError(f"efficiency must be at least 1, got {f}")
    delta = as_fraction(delta)
    if not 0 <= delta <= 1:
        raise DomainError(f"delta must lie in [0, 1], got {delta}")
    d = budget_size(n, delta)
    if d > k:
        raise PlanError(f"budget round(delta*n) = {d} exceeds k = {k}")
    if n - d == 0:
        raise DegenerateLengthError("delta = 1 leaves no payload")

    target = 1 - f * binary_entropy(p_err)
    if target >= 1:
        raise DegenerateTargetError(f"target rate {target} is not below 1")
    if math.isinf(target):
        raise InfeasibleRateError(f"efficiency {f} is unreachable at p_err={p_err}")
    s = max(0, math.ceil(k - Fraction(target) * (n - d)))
    if s > d:
        raise InfeasibleRateError(
            f"target rate {target:.6f} needs s={s} shortened symbols but the budget is d={d}"
        )
    logger.debug(f"select_sp n={n} k={k} d={d} p_err={p_err} f={f}: s={s} p={d - s}")
    return s, d - s


@dataclass(frozen=True, eq=False)
class SpPlan:
    n: int
    k: int
    s: int
    p: int
    permutation_seed: int | None
    permutation: np.ndarray = field(repr=False)
    code_identifier: str = ""

    @property
    def payload_length(self):
        return self.n - self.p - self.s

    @property
    def sigma(self):
        return Fraction(self.s, self.n)

    @property
    def pi(self):
        return Fraction(self.p, self.n)

    @property
    def delta(self):
        return self.sigma + self.pi

    @property
    def adapted_rate(self):
        return adapted_rate(self.n, self.k, self.s, self.p)

    @property
    def transcript_bits(self):
        return self.s + self.n - self.k

    @cached_property
    def payload_positions(self):
        return self.permutation[: self.payload_length]

    @cached_property
    def punctured_positions(self):
        return self.permutation[self.payload_length: self.n - self.s]

    @cached_property
    def shortened_positions(self):
        return self.permutation[self.n - self.s:]

    @cached_property
    def position_roles(self):
        roles = np.empty(self.n, dtype=np.uint8)
        roles[self.payload_positions] = Role.PAYLOAD
        roles[self.punctured_positions] = Role.PUNCTURED
        roles[self.shortened_positions] = Role.SHORTENED
        roles.flags.writeable = False
        return roles

    @cached_property
    def layout_slot(self):
        """Inverse permutation: extended position -> layout slot."""
        inverse = np.empty(self.n, dtype=np.int64)
        inverse[self.permutation] = np.arange(self.n, dtype=np.int64)
        inverse.flags.writeable = False
        return inverse

    def role_at(self, index):
        """Role of an extended position and, for payload, its index in x."""
        slot = int(self.layout_slot[index])
        if slot < self.payload_length:
            return Role.PAYLOAD, slot
        if slot < self.n - self.s:
            return Role.PUNCTURED, None
        return Role.SHORTENED, None

    def __eq__(self, other):
        if not isinstance(other, SpPlan):
            return NotImplemented
        return (
            (self.n, self.k, self.s, self.p, self.permutation_seed, self.code_identifier)
            == (other.n, other.k, other.s, other.p, other.permutation_seed, other.code_identifier)
            and np.array_equal(self.permutation, other.permutation)
        )

    __hash__ = None


def build_plan(code, s, p, permutation_seed):
    n, k = code.n, code.k
    if not 0 <= s <= k:
        raise PlanError(f"need 0 <= s <= k = {k}, got s={s}")
    if not 0 <= p <= n:
        raise PlanError(f"need 0 <= p <= n = {n}, got p={p}")
    if s + p > n:
        raise PlanError(f"need s + p <= n, got {s} + {p} > {n}")
    return SpPlan(
        n=n,
        k=k,
        s=s,
        p=p,
        permutation_seed=permutation_seed,
        permutation=fisher_yates(n, permutation_seed),
        code_identifier=code.identifier,
    )


def choose_code(codes, delta, p_err, f_eff):
    """First code of a family with a feasible plan, preferring the least shortening.

    Returns ``(code, s, p)``; raises InfeasibleRateError when no code covers p_err.
    """
    best = None
    for code in codes:
        try:
            s, p = select_sp(code.n, code.k, delta, p_err, f_eff)
        except (InfeasibleRateError, PlanError) as exc:
            logger.debug(f"{code!r} cannot serve p_err={p_err}: {exc}")
            continue
        if best is None or s < best[1]:
            best = (code, s, p)
    if best is None:
        raise InfeasibleRateError(f"no code in the family reaches p_err={p_err}")
    return best


def dump_plan(plan):
    """Flat ``key=value`` record from which Bob rebuilds the plan bit-exactly."""
    seed = "none" if plan.permutation_seed is None else str(plan.permutation_seed)
    values = (plan.n, plan.k, plan.s, plan.p, seed, plan.code_identifier)
    return "".join(f"{key}={value}\n" for key, value in zip(PLAN_KEYS, values))


def load_plan(text, code):
    record = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep or key.strip() not in PLAN_KEYS:
            raise PlanError(f"unexpected plan record line {line!r}")
        record[key.strip()] = value.strip()
    missing = [key for key in PLAN_KEYS if key not in record]
    if missing:
        raise PlanError(f"plan record lacks {', '.join(missing)}")
    if record["code"] != code.identifier:
        raise PlanError(
            f"plan was built for code {record['code']}, not {code.identifier}"
        )
    if int(record["n"]) != code.n or int(record["k"]) != code.k:
        raise PlanError("plan dimensions do not match the code")
    seed = None if record["permutation_seed"] == "none" else int(record["permutation_seed"])
    return build_plan(code, int(record["s"]), int(record["p"]), seed)
