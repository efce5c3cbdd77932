# utils/numbers.py
from fractions import Fraction


def as_fraction(value):
    """Exact rational view of ``value``.

    Floats go through their shortest decimal repr, so ``0.05`` becomes 1/20
    rather than the binary double closest to it.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)
