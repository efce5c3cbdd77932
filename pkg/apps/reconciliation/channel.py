from dataclasses import dataclass

from apps.codes.bits import BitString
from sp_recon.exceptions import DomainError
from sp_recon.utils.rng import make_rng


@dataclass(frozen=True)
class BscChannel:
    """Binary symmetric channel flipping each bit independently with p_err."""

    p_err: float

    def __post_init__(self):
        if not 0 <= self.p_err <= 1:
            raise DomainError(f"crossover probability must lie in [0, 1], got {self.p_err}")

    def transmit(self, x, seed):
        return transmit(x, self, seed)


def transmit(x, channel, seed):
    flips = make_rng(seed).random(x.length) < channel.p_err
    return x ^ BitString.from_array(flips)
