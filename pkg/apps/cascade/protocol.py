"""
Interactive Cascade reconciliation, used as the baseline for efficiency
comparisons.

Canonical parameters: four passes, first block size ceil(0.73 / p_est),
doubling every pass, pass 1 on the identity order and every later pass on a
seeded random permutation. Odd blocks are searched with BINARY and each fix
is cascaded back to the blocks of every pass already run.
"""

import logging
import math
from collections import deque
from fractions import Fraction

import numpy as np

from apps.codes.bits import BitString
from sp_recon.exceptions import DimensionError, DomainError
from sp_recon.utils.numbers import as_fraction
from sp_recon.utils.rng import make_rng

logger = logging.getLogger(__name__)

PASS_COUNT = 4
FIRST_BLOCK_CONSTANT = Fraction("0.73")


def initial_block_size(p_est):
    return math.ceil(FIRST_BLOCK_CONSTANT / as_fraction(p_est))


class ParityOracle:
    """Alice's side: answers parity queries on x and counts every answer."""

    def __init__(self, x, record=False):
        self._x = x.to_array()
        self.disclosed = 0
        self.log = [] if record else None

    def parity(self, indices):
        value = int(self._x[indices].sum()) & 1
        self.disclosed += 1
        if self.log is not None:
            self.log.append((np.array(indices, copy=True), value))
        return value


class CascadeSession:
    def __init__(self, x, y, p_est, seed, pass_count=PASS_COUNT, record=False):
        if x.length != y.length:
            raise DimensionError(f"strings differ in length: {x.length} != {y.length}")
        if not 0 < p_est < 0.5:
            raise DomainError(f"p_est must lie in (0, 0.5), got {p_est}")
        self.length = x.length
        self.pass_count = pass_count
        self.initial_block_size = initial_block_size(p_est)
        self.block_sizes = [self.initial_block_size * 2**i for i in range(pass_count)]
        self.oracle = ParityOracle(x, record=record)
        self.pass_leaks = []

        rng = make_rng(seed)
        self.permutations = [np.arange(self.length, dtype=np.int64)]
        for _ in range(1, pass_count):
            self.permutations.append(rng.permutation(self.length))

        self._y = y.to_array().copy()
        self._blocks = []
        self._block_of = []
        self._alice_parity = []

    @property
    def disclosed_parity_count(self):
        return self.oracle.disclosed

    @property
    def corrected(self):
        return BitString.from_array(self._y)

    def run(self):
        for pass_index in range(self.pass_count):
            before = self.disclosed_parity_count
            self._open_pass(pass_index)
            odd = deque(
                (pass_index, b)
                for b in range(len(self._blocks[pass_index]))
                if self._is_odd(pass_index, b)
            )
            self._resolve(odd)
            self.pass_leaks.append(self.disclosed_parity_count - before)
            logger.debug(
                f"cascade pass {pass_index + 1}: block size {self.block_sizes[pass_index]}, "
                f"{self.pass_leaks[-1]} parities"
            )
        return self.corrected, self.disclosed_parity_count

    def _open_pass(self, pass_index):
        size = max(1, min(self.block_sizes[pass_index], self.length))
        order = self.permutations[pass_index]
        blocks = [order[start:start + size] for start in range(0, self.length, size)]
        block_of = np.empty(self.length, dtype=np.int64)
        for b, block in enumerate(blocks):
            block_of[block] = b
        self._blocks.append(blocks)
        self._block_of.append(block_of)
        self._alice_parity.append([self.oracle.parity(block) for block in blocks])

    def _bob_parity(self, indices):
        return int(self._y[indices].sum()) & 1

    def _is_odd(self, pass_index, b):
        block = self._blocks[pass_index][b]
        return self._bob_parity(block) != self._alice_parity[pass_index][b]

    def _binary(self, block):
        """Position of one error in an odd block; discloses one parity per halving."""
        while len(block) > 1:
            left = block[: (len(block) + 1) // 2]
            if self.oracle.parity(left) != self._bob_parity(left):
                block = left
            else:
                block = block[len(left):]
        return int(block[0])

    def _resolve(self, queue):
        while queue:
            pass_index, b = queue.popleft()
            if not self._is_odd(pass_index, b):
                continue
            position = self._binary(self._blocks[pass_index][b])
            self._y[position] ^= 1
            for other in range(len(self._blocks)):
                if other == pass_index:
                    continue
                hit = int(self._block_of[other][position])
                if self._is_odd(other, hit):
                    queue.append((other, hit))


def cascade_reconcile(x, y, p_est, seed):
    """Bob's corrected string and the number of parities Alice disclosed."""
    return CascadeSession(x, y, p_est, seed).run()
