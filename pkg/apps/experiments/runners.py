"""
Grid experiments behind the sweep, calibrate and cascade commands.

Grid point i draws its permutation seed from mix(seed, 2i) and its frame
master seed from mix(seed, 2i + 1); Cascade sessions use mix(mix(seed, i), j).
Rows come back in grid order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from fractions import Fraction

from django.conf import settings
from django.db import transaction

from apps.cascade.protocol import cascade_reconcile
from apps.codes.bits import BitString
from apps.reconciliation.calibration import EfficiencyTable, calibrate_efficiency
from apps.reconciliation.channel import BscChannel
from apps.reconciliation.plans import adapted_rate, build_plan, choose_code
from apps.reconciliation.simulation import STATUS_OK, SweepRow, estimate_fer
from apps.security.entropy import binary_entropy
from sp_recon.exceptions import InfeasibleRateError, PlanError
from sp_recon.utils.rng import make_rng, mix_seed
from .models import ExperimentRun, SweepPoint

logger = logging.getLogger(__name__)


def default_workers():
    return settings.RECON["THREADS"]


def run_sweep(config, workers=None):
    workers = workers or default_workers()
    codes = config.codes()
    efficiency = config.efficiency()
    rows = []
    for index, p_err in enumerate(config.grid):
        try:
            code, s, p = choose_code(codes, config.delta, p_err, efficiency)
        except (InfeasibleRateError, PlanError) as exc:
            logger.warning(f"p_err={p_err}: {exc}")
            rows.append(SweepRow.infeasible(p_err, codes[0], config.seed))
            continue

        plan = build_plan(code, s, p, mix_seed(config.seed, 2 * index))
        logger.info(f"p_err={p_err}: {code.name or code.identifier} with s={s} p={p}")
        row = estimate_fer(
            code,
            plan,
            BscChannel(p_err),
            config.frames,
            mix_seed(config.seed, 2 * index + 1),
            workers=workers,
            max_iterations=config.max_iterations,
            llr_max=settings.RECON["LLR_MAX"],
            h_min_prior=config.h_min_prior,
            security_t=config.t,
        )
        rows.append(replace(row, master_seed=config.seed))
    return rows


def run_calibration(config, workers=None):
    """Calibrated points and the table built from them, for the first code."""
    code = config.codes()[0]
    points = calibrate_efficiency(
        code,
        config.delta,
        config.grid,
        fer_target=config.fer_target,
        frames=config.frames,
        master_seed=config.seed,
        ceiling=config.f_eff_ceiling,
        workers=workers or default_workers(),
        max_iterations=config.max_iterations,
        llr_max=settings.RECON["LLR_MAX"],
    )
    table = EfficiencyTable.from_points(points) if points else None
    return points, table


def calibration_rows(code, points, config):
    rows = []
    for point in points:
        measured = point.fer is not None
        rows.append(
            SweepRow(
                p_err=point.p_err, n=code.n, k=code.k, s=point.s, p=point.p,
                rate=adapted_rate(code.n, code.k, point.s, point.p) if point.s is not None else None,
                frames=config.frames if measured else 0,
                frame_errors=round(point.fer * config.frames) if measured else 0,
                leak_bits=None, f_code=None, f_orig=None, key_bound_bits=None,
                master_seed=config.seed,
                status=STATUS_OK if point.reachable else "unreachable",
            )
        )
    return rows


def cascade_session(length, p_err, session_seed):
    """(residual error?, disclosed parities) for one Cascade session."""
    x = BitString.random(length, make_rng(mix_seed(session_seed, 0)))
    y = BscChannel(p_err).transmit(x, mix_seed(session_seed, 1))
    corrected, leak_bits = cascade_reconcile(x, y, p_err, mix_seed(session_seed, 2))
    return corrected != x, leak_bits


def run_cascade_sweep(config, workers=None):
    workers = workers or default_workers()
    rows = []
    for index, p_err in enumerate(config.grid):
        point_seed = mix_seed(config.seed, index)
        seeds = [mix_seed(point_seed, j) for j in range(config.frames)]

        def session(seed, p_err=p_err):
            return cascade_session(config.length, p_err, seed)

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(session, seeds))
        else:
            outcomes = [session(seed) for seed in seeds]

        failures = sum(1 for failed, _ in outcomes if failed)
        mean_leak = Fraction(sum(leak for _, leak in outcomes), config.frames)
        prior = config.length if config.h_min_prior is None else config.h_min_prior
        key_bound = max(Fraction(0), Fraction(prior) - mean_leak - Fraction(config.t))
        f_orig = float(mean_leak) / (config.length * binary_entropy(p_err))
        logger.info(
            f"cascade p_err={p_err}: {failures}/{config.frames} residual errors, "
            f"mean leak {float(mean_leak):.1f}"
        )
        rows.append(
            SweepRow(
                p_err=p_err, n=config.length, k=None, s=None, p=None, rate=None,
                frames=config.frames, frame_errors=failures, leak_bits=float(mean_leak),
                f_code=None, f_orig=f_orig, key_bound_bits=float(key_bound),
                master_seed=config.seed,
            )
        )
    return rows


@transaction.atomic
def record_run(kind, config, output, rows=(), f_eff=None):
    """Store a finished run; ``f_eff`` maps grid positions to calibrated values."""
    run = ExperimentRun.objects.create(
        kind=kind,
        master_seed=str(config.seed),
        config=config.as_dict(),
        output=output,
    )
    SweepPoint.objects.bulk_create(
        SweepPoint(
            run=run,
            position=position,
            p_err=row.p_err,
            n=row.n,
            k=row.k,
            s=row.s,
            p=row.p,
            rate=None if row.rate is None else float(row.rate),
            frames=row.frames,
            frame_errors=row.frame_errors,
            leak_bits=row.leak_bits,
            f_code=row.f_code,
            f_orig=row.f_orig,
            f_eff=(f_eff or {}).get(position),
            key_bound_bits=row.key_bound_bits,
            status=row.status,
        )
        for position, row in enumerate(rows)
    )
    logger.info(f"recorded {kind} run #{run.pk} with {len(rows)} points")
    return run
