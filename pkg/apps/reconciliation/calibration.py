"""
Empirical efficiency curve f(p_err) for a code.

For every grid point the calibration searches the smallest efficiency on the
lattice ``1 + i * granularity`` whose plan keeps the frame error rate at or
below the target. Tables are written as ``p_err f`` lines, with ``inf`` for
points the code cannot reach below the ceiling.
"""

import bisect
import logging
import math
from dataclasses import dataclass

from sp_recon.exceptions import ConfigError, InfeasibleRateError, PlanError
from sp_recon.utils.rng import mix_seed
from .channel import BscChannel
from .decoder import DEFAULT_MAX_ITERATIONS, LLR_MAX
from .plans import build_plan, select_sp
from .simulation import estimate_fer

logger = logging.getLogger(__name__)

DEFAULT_FER_TARGET = 0.05
DEFAULT_CEILING = 3.0
DEFAULT_GRANULARITY = 0.01


@dataclass(frozen=True)
class CalibrationPoint:
    p_err: float
    f_eff: float
    fer: float | None = None
    s: int | None = None
    p: int | None = None

    @property
    def reachable(self):
        return math.isfinite(self.f_eff)


class EfficiencyTable:
    """Piecewise-linear f(p_err), clamped to the end values outside the grid.

    Usable wherever select_sp accepts an efficiency.
    """

    def __init__(self, points):
        pairs = sorted((float(p_err), float(f)) for p_err, f in points)
        if not pairs:
            raise ConfigError({"f_eff": ["efficiency table is empty"]})
        for (a, _), (b, _) in zip(pairs, pairs[1:]):
            if a == b:
                raise ConfigError({"f_eff": [f"p_err {a} appears twice in the table"]})
        self._p = [p for p, _ in pairs]
        self._f = [f for _, f in pairs]

    @classmethod
    def from_points(cls, points):
        return cls((point.p_err, point.f_eff) for point in points)

    def __len__(self):
        return len(self._p)

    def items(self):
        return list(zip(self._p, self._f))

    def __call__(self, p_err):
        if p_err <= self._p[0]:
            return self._f[0]
        if p_err >= self._p[-1]:
            return self._f[-1]
        hi = bisect.bisect_left(self._p, p_err)
        if self._p[hi] == p_err:
            return self._f[hi]
        lo = hi - 1
        f_lo, f_hi = self._f[lo], self._f[hi]
        if math.isinf(f_lo) or math.isinf(f_hi):
            return math.inf
        weight = (p_err - self._p[lo]) / (self._p[hi] - self._p[lo])
        return f_lo + weight * (f_hi - f_lo)

    def __repr__(self):
        return f"EfficiencyTable({self.items()!r})"


def format_table(table):
    lines = []
    for p_err, f in table.items():
        value = "inf" if math.isinf(f) else f"{f:.2f}"
        lines.append(f"{p_err!r} {value}\n")
    return "".join(lines)


def parse_table(text):
    points = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ConfigError({"f_eff": [f"line {number}: expected 'p_err f', got {line!r}"]})
        try:
            p_err, f = float(fields[0]), float(fields[1])
        except ValueError:
            raise ConfigError({"f_eff": [f"line {number}: not a number in {line!r}"]})
        points.append((p_err, f))
    return EfficiencyTable(points)


def write_table(table, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_table(table))


def read_table(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_table(fh.read())
    except FileNotFoundError:
        raise ConfigError({"f_eff": [f"no efficiency table at {path}"]})


def efficiency_lattice(ceiling, granularity):
    return [1 + i * granularity for i in range(int(round((ceiling - 1) / granularity)) + 1)]


def _feasible_prefix(code, delta, p_err, lattice):
    """Index of the largest lattice efficiency select_sp can still honour."""
    lo, hi = -1, len(lattice) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        try:
            select_sp(code.n, code.k, delta, p_err, lattice[mid])
        except (InfeasibleRateError, PlanError):
            hi = mid - 1
        else:
            lo = mid
    return lo


def calibrate_point(
    code,
    delta,
    p_err,
    fer_target,
    frames,
    permutation_seed,
    frame_seed,
    ceiling=DEFAULT_CEILING,
    granularity=DEFAULT_GRANULARITY,
    workers=1,
    max_iterations=DEFAULT_MAX_ITERATIONS,
    llr_max=LLR_MAX,
):
    lattice = efficiency_lattice(ceiling, granularity)
    top = _feasible_prefix(code, delta, p_err, lattice)
    if top < 0:
        logger.warning(f"p_err={p_err}: no efficiency up to {ceiling} gives a feasible plan")
        return CalibrationPoint(p_err, math.inf)

    channel = BscChannel(p_err)
    measured = {}

    def fer_at(index):
        s, p = select_sp(code.n, code.k, delta, p_err, lattice[index])
        if (s, p) not in measured:
            plan = build_plan(code, s, p, permutation_seed)
            row = estimate_fer(
                code, plan, channel, frames, frame_seed,
                workers=workers, max_iterations=max_iterations, llr_max=llr_max,
            )
            measured[(s, p)] = row.fer
        return measured[(s, p)], s, p

    fer, s, p = fer_at(top)
    if fer > fer_target:
        logger.warning(
            f"p_err={p_err}: fer {fer:.4f} above target {fer_target} even at f={lattice[top]:.2f}"
        )
        return CalibrationPoint(p_err, math.inf, fer, s, p)

    lo, hi = 0, top
    while lo < hi:
        mid = (lo + hi) // 2
        if fer_at(mid)[0] <= fer_target:
            hi = mid
        else:
            lo = mid + 1
    fer, s, p = fer_at(lo)
    logger.info(f"p_err={p_err}: f_eff={lattice[lo]:.2f} (s={s}, p={p}, fer={fer:.4f})")
    return CalibrationPoint(p_err, round(lattice[lo], 2), fer, s, p)


def calibrate_efficiency(
    code,
    delta,
    grid,
    fer_target=DEFAULT_FER_TARGET,
    frames=100,
    master_seed=0,
    ceiling=DEFAULT_CEILING,
    granularity=DEFAULT_GRANULARITY,
    workers=1,
    max_iterations=DEFAULT_MAX_ITERATIONS,
    llr_max=LLR_MAX,
):
    """Calibrated points for every p_err of the grid, in grid order.

    Grid point i uses permutation seed mix(seed, 2i) and frame master seed
    mix(seed, 2i + 1), the same derivation the sweep uses.
    """
    if not 0 < fer_target < 1:
        raise ConfigError({"fer_target": [f"must lie in (0, 1), got {fer_target}"]})
    points = []
    for index, p_err in enumerate(grid):
        points.append(
            calibrate_point(
                code, delta, p_err, fer_target, frames,
                permutation_seed=mix_seed(master_seed, 2 * index),
                frame_seed=mix_seed(master_seed, 2 * index + 1),
                ceiling=ceiling, granularity=granularity, workers=workers,
                max_iterations=max_iterations, llr_max=llr_max,
            )
        )
    return points
