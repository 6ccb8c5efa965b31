"""
Monte Carlo service layer: disorder-averaged protocol sweeps.
"""
import math
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Sequence, Tuple

import numpy as np
import structlog

from spinnet.core.errors import NetworkValidationError
from spinnet.core.rng import RNG_ALGORITHM, RandomStream, substream
from spinnet.models import NetworkHamiltonian
from spinnet.schemas import (
    DisorderSpec,
    ProtocolKind,
    SweepConfig,
    SweepPoint,
    SweepResult,
)
from spinnet.services.network_service import NetworkService
from spinnet.services.protocol_service import ProtocolService
from spinnet.utils.helpers import SimulationLogger, create_run_metadata

__all__ = ["MonteCarloService", "RandomStream", "substream"]

logger = structlog.get_logger("spinnet.montecarlo")

# Column order of the per-realization sensor array.
_F1, _F2, _THETA1, _THETA2 = 0, 1, 2, 3


def _base_network(cfg: SweepConfig) -> NetworkHamiltonian:
    if cfg.network is not None:
        return NetworkService.from_config(cfg.network)
    return NetworkService.designed_network(cfg.coupling)


def _realization(
    cfg: SweepConfig, base: NetworkHamiltonian, spec: DisorderSpec, rng: RandomStream
) -> np.ndarray:
    """Per-realization statistic: one row of the sweep's result array."""
    device = NetworkService.apply_disorder(base, spec, rng)
    kick_site = cfg.kick_site - 1

    if cfg.protocol is ProtocolKind.ROUTER:
        n_periods = max(cfg.measurement_times) // 2
        routed = ProtocolService.run_router(device, n_periods, kick_site=kick_site)
        return np.array([routed.fidelities[m] for m in cfg.measurement_times])

    if cfg.protocol is ProtocolKind.ENTANGLER:
        n_periods = max(cfg.measurement_times) // 2
        pair = (cfg.pair[0] - 1, cfg.pair[1] - 1)
        result = ProtocolService.run_entangler(
            device, n_periods, pair=pair, kick_site=kick_site
        )
        return np.array([result.eof[m] for m in cfg.measurement_times])

    rows = np.empty((len(cfg.theta_grid), 4), dtype=np.float64)
    for g, theta in enumerate(cfg.theta_grid):
        sample = ProtocolService.sense_once(device, device, theta)
        estimate = ProtocolService.estimate_phase(sample)
        rows[g] = (sample.f1, sample.f2, estimate.theta1, estimate.theta2)
    return rows


def _run_chunk(task: Tuple[SweepConfig, int, int, int]) -> np.ndarray:
    """
    Evaluate realizations [start, stop) of one error scale.

    Top-level so that worker processes can unpickle it.
    """
    cfg, scale_index, start, stop = task
    base = _base_network(cfg)
    spec = DisorderSpec(
        error_scale=cfg.error_scales[scale_index],
        distribution=cfg.distribution,
        kind=cfg.kind,
    )
    rows = [
        _realization(cfg, base, spec, substream(cfg.base_seed, [scale_index, r]))
        for r in range(start, stop)
    ]
    return np.stack(rows)


def _chunks(realizations: int, workers: int) -> List[Tuple[int, int]]:
    size = int(math.ceil(realizations / workers))
    return [(lo, min(lo + size, realizations)) for lo in range(0, realizations, size)]


def _summary(values: np.ndarray) -> Tuple[float, float, float]:
    n = values.size
    mean = float(np.mean(values))
    std = float(np.std(values, ddof=1)) if n > 1 else 0.0
    return mean, std, std / math.sqrt(n)


class MonteCarloService:
    """Service class for disorder-averaged sweeps."""

    @staticmethod
    def realization_array(cfg: SweepConfig, scale_index: int) -> np.ndarray:
        """
        Per-realization statistics for one error scale, in realization order.

        Args:
            cfg: Sweep configuration
            scale_index: Position of the error scale in ``cfg.error_scales``

        Returns:
            Array of shape (realizations, times) for router/entangler sweeps or
            (realizations, thetas, 4) holding f1, f2, theta1, theta2 for sensor sweeps
        """
        chunks = _chunks(cfg.realizations, cfg.workers)
        tasks = [(cfg, scale_index, lo, hi) for lo, hi in chunks]
        if cfg.workers == 1 or len(tasks) == 1:
            parts = [_run_chunk(task) for task in tasks]
        else:
            with ProcessPoolExecutor(max_workers=len(tasks)) as pool:
                parts = list(pool.map(_run_chunk, tasks))
        return np.concatenate(parts, axis=0)

    @staticmethod
    def reduce(cfg: SweepConfig, scale_index: int, values: np.ndarray) -> List[SweepPoint]:
        """
        Aggregate one error scale's per-realization array into sweep points.

        Args:
            cfg: Sweep configuration
            scale_index: Position of the error scale
            values: Output of :meth:`realization_array`

        Returns:
            Points for this scale, ordered by coordinate then quantity
        """
        error_scale = cfg.error_scales[scale_index]
        points: List[SweepPoint] = []

        if cfg.protocol is not ProtocolKind.SENSOR:
            quantity = "fidelity" if cfg.protocol is ProtocolKind.ROUTER else "eof"
            for k, multiple in enumerate(cfg.measurement_times):
                mean, std, stderr = _summary(values[:, k])
                points.append(
                    SweepPoint(
                        error_scale=error_scale,
                        coordinate=float(multiple),
                        quantity=quantity,
                        mean=mean,
                        sample_std=std,
                        stderr=stderr,
                        n=values.shape[0],
                    )
                )
            return points

        n = values.shape[0]
        for g, theta in enumerate(cfg.theta_grid):
            block = values[:, g, :]
            for quantity, column in (("f1", _F1), ("f2", _F2)):
                mean, std, stderr = _summary(block[:, column])
                points.append(
                    SweepPoint(
                        error_scale=error_scale,
                        coordinate=theta,
                        quantity=quantity,
                        mean=mean,
                        sample_std=std,
                        stderr=stderr,
                        n=n,
                    )
                )
            aggregate = ProtocolService.aggregate_arrays(block[:, _THETA1], block[:, _THETA2])
            for quantity, mean, std, chosen in (
                ("theta1", aggregate.mean1, aggregate.std1, None),
                ("theta2", aggregate.mean2, aggregate.std2, None),
                ("estimate", aggregate.value, aggregate.chosen_std, aggregate.chosen),
            ):
                points.append(
                    SweepPoint(
                        error_scale=error_scale,
                        coordinate=theta,
                        quantity=quantity,
                        mean=mean,
                        sample_std=std,
                        stderr=std / math.sqrt(n),
                        n=n,
                        chosen=chosen,
                    )
                )
        return points

    @staticmethod
    def run_sweep(cfg: SweepConfig) -> SweepResult:
        """
        Average a protocol over static disorder realizations at every error scale.

        Realization r of scale s draws its disorder from substream(base_seed, [s, r]),
        so results depend only on the configuration, not on the worker count.

        Args:
            cfg: Validated sweep configuration

        Returns:
            Aggregated points plus run metadata

        Raises:
            NetworkValidationError: If the protocol is not supported
        """
        if not isinstance(cfg.protocol, ProtocolKind):
            raise NetworkValidationError(
                f"Unknown protocol: {cfg.protocol!r}", error_code="UNKNOWN_PROTOCOL"
            )

        started = time.perf_counter()
        SimulationLogger.log_run_start(
            "sweep",
            protocol=cfg.protocol.value,
            disorder_kind=cfg.kind.value,
            distribution=cfg.distribution.value,
            scales=len(cfg.error_scales),
            realizations=cfg.realizations,
            workers=cfg.workers,
        )

        points: List[SweepPoint] = []
        for s in range(len(cfg.error_scales)):
            values = MonteCarloService.realization_array(cfg, s)
            points.extend(MonteCarloService.reduce(cfg, s, values))
            SimulationLogger.log_progress(
                "error_scale",
                s + 1,
                len(cfg.error_scales),
                error_scale=cfg.error_scales[s],
            )

        elapsed = time.perf_counter() - started
        SimulationLogger.log_run_complete("sweep", elapsed, points=len(points))
        metadata = create_run_metadata(
            cfg.model_dump(mode="json"),
            RNG_ALGORITHM,
            {"numpy_version": np.__version__},
        )
        return SweepResult(config=cfg, points=points, metadata=metadata)

    @staticmethod
    def single_device(
        base: NetworkHamiltonian, spec: DisorderSpec, seed: int
    ) -> NetworkHamiltonian:
        """One disordered realization of ``base``; used by single-run commands."""
        return NetworkService.apply_disorder(base, spec, substream(seed, [0, 0]))

    @staticmethod
    def points_for(
        result: SweepResult, quantity: str, error_scale: float
    ) -> Sequence[SweepPoint]:
        """Points of one quantity at one error scale, in coordinate order."""
        return [
            p
            for p in result.points
            if p.quantity == quantity and p.error_scale == error_scale
        ]
