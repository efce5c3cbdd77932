"""
Regular LDPC construction by random matching of edge sockets.
"""

import logging

import numpy as np

from sp_recon.exceptions import ConstructionError
from sp_recon.utils.rng import make_rng
from .ldpc import ParityCheckCode

logger = logging.getLogger(__name__)

MAX_RETRIES = 50


def _duplicate_rows(rows):
    ordered = np.sort(rows, axis=1)
    return np.flatnonzero(np.any(ordered[:, 1:] == ordered[:, :-1], axis=1))


def _repair(rows, rng, max_swaps):
    """Swap sockets between rows until no row holds a column twice.

    Each swap keeps every row and column degree unchanged. Returns False when
    the swap budget runs out first.
    """
    m_rows, row_degree = rows.shape
    swaps = 0
    for r in _duplicate_rows(rows):
        while True:
            values, counts = np.unique(rows[r], return_counts=True)
            repeated = values[counts > 1]
            if repeated.size == 0:
                break
            if swaps >= max_swaps:
                return False
            swaps += 1
            i = int(np.flatnonzero(rows[r] == repeated[0])[0])
            r2 = int(rng.integers(0, m_rows))
            j = int(rng.integers(0, row_degree))
            a, b = rows[r, i], rows[r2, j]
            if r2 == r or b in rows[r] or a in rows[r2]:
                continue
            rows[r, i], rows[r2, j] = b, a
    return True


def generate_gallager(n, col_degree, row_degree, seed, max_retries=MAX_RETRIES):
    """Regular (col_degree, row_degree) code of length n, deterministic in ``seed``."""
    if col_degree < 2:
        raise ConstructionError(f"column degree must be at least 2, got {col_degree}")
    if row_degree < 2 or row_degree > n:
        raise ConstructionError(f"row degree must lie in [2, n], got {row_degree}")
    if (n * col_degree) % row_degree:
        raise ConstructionError(
            f"n*col_degree = {n * col_degree} is not divisible by row_degree {row_degree}"
        )
    m_rows = n * col_degree // row_degree
    if m_rows >= n:
        raise ConstructionError(
            f"({col_degree}, {row_degree}) degrees give {m_rows} checks for n={n}; no information symbols left"
        )

    rng = make_rng(seed)
    sockets = np.repeat(np.arange(n, dtype=np.int64), col_degree)
    for attempt in range(1, max_retries + 1):
        rows = rng.permutation(sockets).reshape(m_rows, row_degree)
        if _repair(rows, rng, max_swaps=20 * m_rows + 100):
            rows.sort(axis=1)
            name = f"gallager:n={n},col={col_degree},row={row_degree},seed={seed}"
            logger.debug(f"Socket matching for {name} succeeded on attempt {attempt}")
            return ParityCheckCode(n, rows.tolist(), name=name)
    raise ConstructionError(
        f"no duplicate-free ({col_degree}, {row_degree}) matching for n={n} after {max_retries} attempts"
    )
