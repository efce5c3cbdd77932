"""
Entropy measures in bits over finite distributions.

A FiniteDistribution is a numpy array of probabilities whose axes are the
components of a joint variable, e.g. shape (|X|, |Z|) for P(x, z).
"""

import math
from fractions import Fraction

import numpy as np

from sp_recon.exceptions import DomainError, PreconditionError

SUM_TOLERANCE = 1e-12
INDEPENDENCE_TOLERANCE = 1e-12


def binary_entropy(p):
    """h(p) = -p log2 p - (1 - p) log2(1 - p), with 0 log2 0 = 0."""
    if isinstance(p, Fraction):
        p = float(p)
    if not 0 <= p <= 1:
        raise DomainError(f"probability must lie in [0, 1], got {p}")
    if p == 0 or p == 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


class FiniteDistribution:
    __slots__ = ("_probs",)

    def __init__(self, probabilities, tolerance=SUM_TOLERANCE):
        probs = np.array(
            [float(v) for v in np.ravel(np.asarray(probabilities, dtype=object))],
            dtype=np.float64,
        ).reshape(np.shape(probabilities))
        if probs.size == 0:
            raise DomainError("distribution over an empty alphabet")
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise DomainError("probabilities must be finite and nonnegative")
        if abs(probs.sum() - 1.0) > tolerance:
            raise DomainError(f"probabilities sum to {probs.sum()!r}, not 1")
        probs.flags.writeable = False
        self._probs = probs

    @classmethod
    def uniform(cls, *shape):
        size = math.prod(shape)
        return cls(np.full(shape, 1.0 / size))

    @classmethod
    def random(cls, shape, rng):
        weights = rng.random(shape)
        return cls(weights / weights.sum())

    @property
    def probabilities(self):
        return self._probs

    @property
    def shape(self):
        return self._probs.shape

    @property
    def ndim(self):
        return self._probs.ndim

    def marginal(self, *axes):
        """Distribution of the listed components, in the listed order."""
        others = tuple(a for a in range(self.ndim) if a not in axes)
        kept = self._probs.sum(axis=others) if others else self._probs
        order = sorted(axes)
        return FiniteDistribution(np.transpose(kept, [order.index(a) for a in axes]))

    def group(self, x_axes, z_axes):
        """2-D view P(x, z) with the listed axes flattened into X and Z."""
        moved = np.moveaxis(self._probs, list(x_axes) + list(z_axes), range(len(x_axes) + len(z_axes)))
        x_size = math.prod(self.shape[a] for a in x_axes)
        return FiniteDistribution(moved.reshape(x_size, -1))

    def __repr__(self):
        return f"FiniteDistribution(shape={self.shape})"


def _as_distribution(dist):
    return dist if isinstance(dist, FiniteDistribution) else FiniteDistribution(dist)


def shannon_entropy(dist):
    probs = _as_distribution(dist).probabilities.ravel()
    nonzero = probs[probs > 0]
    return float(-np.sum(nonzero * np.log2(nonzero)))


def min_entropy(dist):
    """H_inf(X) = -log2 max_x P(x)."""
    probs = _as_distribution(dist).probabilities
    return float(-np.log2(probs.max()))


def cond_min_entropy(joint):
    """min over z with P(z) > 0 of H_inf(X | Z = z), joint given as P(x, z)."""
    probs = _as_distribution(joint).probabilities
    if probs.ndim != 2:
        raise DomainError(f"expected a joint over (X, Z), got {probs.ndim} components")
    p_z = probs.sum(axis=0)
    support = p_z > 0
    conditional_max = probs[:, support].max(axis=0) / p_z[support]
    return float(-np.log2(conditional_max.max()))


def check_independent_min_entropy(joint):
    """(H_inf(XY | Z), H_inf(X | Z) + H_inf(Y)) for a joint P(x, y, z).

    Raises PreconditionError unless Y is independent of (X, Z).
    """
    dist = _as_distribution(joint)
    if dist.ndim != 3:
        raise DomainError(f"expected a joint over (X, Y, Z), got {dist.ndim} components")
    probs = dist.probabilities
    p_xz = probs.sum(axis=1)
    p_y = probs.sum(axis=(0, 2))
    product = p_xz[:, None, :] * p_y[None, :, None]
    gap = float(np.abs(probs - product).max())
    if gap > INDEPENDENCE_TOLERANCE:
        raise PreconditionError(f"Y is not independent of (X, Z): deviation {gap:.3e}")
    lhs = cond_min_entropy(dist.group((0, 1), (2,)))
    rhs = cond_min_entropy(FiniteDistribution(p_xz)) + min_entropy(FiniteDistribution(p_y))
    return lhs, rhs
