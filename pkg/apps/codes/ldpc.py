"""
Sparse binary parity-check codes and their syndrome algebra over GF(2).
"""

import hashlib
import logging
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy import sparse

from sp_recon.exceptions import ConstructionError, DimensionError, RankDeficientError
from .bits import BitString

logger = logging.getLogger(__name__)


def _frozen(array):
    array = np.asarray(array, dtype=np.int64)
    array.flags.writeable = False
    return array


class ParityCheckCode:
    """
    Binary linear code given by a sparse parity-check matrix H.

    ``H`` is a ``scipy.sparse.csr_matrix``; its CSR arrays give the row adjacency
    (check -> variables) and those of ``H.tocsc()`` the column adjacency
    (variable -> checks). ``k`` follows the full-rank convention ``n - m_rows``.
    Instances are immutable and can be shared by any number of concurrent
    decoders.
    """

    def __init__(self, n, rows, columns=None, name=""):
        self.n = int(n)
        self.m_rows = len(rows)
        self.k = self.n - self.m_rows
        self.name = name
        if not 0 < self.k < self.n:
            raise ConstructionError(
                f"need 0 < k < n, got n={self.n} with {self.m_rows} checks"
            )

        rows = [[int(v) for v in row] for row in rows]
        for j, row in enumerate(rows):
            if len(set(row)) != len(row):
                raise ConstructionError(f"row {j} repeats a column index")
            if any(not 0 <= v < self.n for v in row):
                raise ConstructionError(f"row {j} has a column index outside [0, {self.n})")

        check_of_edge = np.repeat(np.arange(self.m_rows), [len(row) for row in rows])
        var_of_edge = np.fromiter((v for row in rows for v in row), dtype=np.int64)
        self.H = sparse.csr_matrix(
            (np.ones(var_of_edge.size, dtype=np.int64), (check_of_edge, var_of_edge)),
            shape=(self.m_rows, self.n),
        )
        self.H.sort_indices()
        by_column = self.H.tocsc()
        by_column.sort_indices()

        self.row_ptr, self.row_index = _frozen(self.H.indptr), _frozen(self.H.indices)
        self.col_ptr, self.col_index = _frozen(by_column.indptr), _frozen(by_column.indices)

        if columns is not None:
            columns = [[int(c) for c in col] for col in columns]
            if len(columns) != self.n:
                raise ConstructionError(f"expected {self.n} columns, got {len(columns)}")
            for i, col in enumerate(columns):
                if len(set(col)) != len(col):
                    raise ConstructionError(f"column {i} repeats a row index")
                if sorted(col) != self.column(i).tolist():
                    raise ConstructionError(
                        f"column {i} disagrees with the row adjacency"
                    )

        self.R0 = Fraction(self.k, self.n)

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"ParityCheckCode({label}n={self.n}, m_rows={self.m_rows}, k={self.k})"

    @property
    def edge_count(self):
        return int(self.row_index.size)

    def row(self, j):
        return self.row_index[self.row_ptr[j]:self.row_ptr[j + 1]]

    def column(self, i):
        return self.col_index[self.col_ptr[i]:self.col_ptr[i + 1]]

    @property
    def row_adjacency(self):
        return [self.row(j) for j in range(self.m_rows)]

    @property
    def column_adjacency(self):
        return [self.column(i) for i in range(self.n)]

    @cached_property
    def row_degrees(self):
        return np.diff(self.row_ptr)

    @cached_property
    def col_degrees(self):
        return np.diff(self.col_ptr)

    @cached_property
    def edge_rows(self):
        """Check index of every edge, in row-major edge order."""
        rows = np.repeat(np.arange(self.m_rows, dtype=np.int64), self.row_degrees)
        rows.flags.writeable = False
        return rows

    @cached_property
    def identifier(self):
        """Content fingerprint: equal for equal matrices, whatever the source."""
        digest = hashlib.sha256()
        digest.update(f"{self.n} {self.m_rows}\n".encode("ascii"))
        for j in range(self.m_rows):
            digest.update(self.row(j).astype("<i8").tobytes())
            digest.update(b"|")
        return digest.hexdigest()[:16]

    def check_parities(self, bits):
        """Parity of every check over an unpacked 0/1 array."""
        return (self.H @ np.asarray(bits, dtype=np.int64)) % 2

    def to_dense(self):
        return self.H.toarray().astype(np.uint8)


def syndrome(code, x):
    """m(x) = H x^T over GF(2)."""
    if x.length != code.n:
        raise DimensionError(f"syndrome needs {code.n} bits, got {x.length}")
    return BitString.from_array(code.check_parities(x.to_array()))


def gf2_rank(code):
    """Rank of H over GF(2), by elimination on 64-bit packed rows."""
    n_words = -(-code.n // 64)
    packed = np.zeros((code.m_rows, n_words), dtype=np.uint64)
    cols = code.row_index.astype(np.uint64)
    np.bitwise_or.at(
        packed,
        (code.edge_rows, (cols >> np.uint64(6)).astype(np.int64)),
        np.left_shift(np.uint64(1), cols & np.uint64(63)),
    )

    rank = 0
    for col in range(code.n):
        if rank == code.m_rows:
            break
        word, bit = divmod(col, 64)
        mask = np.uint64(1 << bit)
        hits = np.flatnonzero(packed[rank:, word] & mask) + rank
        if hits.size == 0:
            continue
        pivot = hits[0]
        if pivot != rank:
            packed[[rank, pivot]] = packed[[pivot, rank]]
        # the row swapped down into ``pivot`` had a zero here, so hits[1:] is exact
        below = hits[1:]
        if below.size:
            packed[below] ^= packed[rank]
        rank += 1
    return rank


def require_full_rank(code):
    rank = gf2_rank(code)
    if rank != code.m_rows:
        raise RankDeficientError(
            f"parity-check matrix has rank {rank} < {code.m_rows} rows; "
            "k = n - m_rows would overstate the code dimension"
        )
    logger.debug(f"{code!r} is full rank")
