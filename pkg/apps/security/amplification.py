import numpy as np
from scipy.linalg import matmul_toeplitz

from apps.codes.bits import BitString
from sp_recon.exceptions import BudgetError
from sp_recon.utils.rng import make_rng


def toeplitz_seed_bits(length, out_len, hash_seed):
    return make_rng(hash_seed).integers(0, 2, size=length + out_len - 1, dtype=np.int64)


def amplify(key_material, out_len, hash_seed):
    """Toeplitz hash: out[i] = sum_j t[i - j + L - 1] x[j] mod 2, L = len(x).

    The diagonal bits t come from ``hash_seed``.
    """
    length = key_material.length
    if out_len < 0 or out_len > length:
        raise BudgetError(f"cannot extract {out_len} bits from {length}")
    if out_len == 0:
        return BitString.zeros(0)
    diagonals = toeplitz_seed_bits(length, out_len, hash_seed).astype(np.float64)
    first_col = diagonals[length - 1:]
    first_row = diagonals[length - 1::-1]
    x = key_material.to_array().astype(np.float64)
    counts = np.rint(matmul_toeplitz((first_col, first_row), x)).astype(np.int64)
    return BitString.from_array((counts % 2).astype(np.uint8))
