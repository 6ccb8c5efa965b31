"""
Protocol service layer: router, entanglement generator and phase sensor.
"""
import math
from typing import List, Sequence, Tuple

import numpy as np

from spinnet.core.errors import NetworkValidationError
from spinnet.core.linalg import StateVector
from spinnet.models import KickEvent, NetworkHamiltonian, Schedule
from spinnet.schemas import (
    AggregateEstimate,
    EntanglerResult,
    Estimator,
    PhaseEstimate,
    RouterResult,
    SenseSample,
)
from spinnet.services.dynamics_service import DynamicsService
from spinnet.services.entanglement_service import EntanglementService

# 0-based labels of the designed network's sites 1, 3, 4 and 6.
SITE_1, SITE_3, SITE_4, SITE_6 = 0, 2, 3, 5

SENSOR_SHIFT = -0.5 * math.pi


def _clamp_unit(x: float) -> float:
    return min(1.0, max(-1.0, x))


def _sample_std(values: np.ndarray) -> float:
    if values.size < 2:
        return 0.0
    return float(np.std(values, ddof=1))


class ProtocolService:
    """Service class for the three network protocols."""

    @staticmethod
    def run_router(
        network: NetworkHamiltonian, n_periods: int, kick_site: int = SITE_6
    ) -> RouterResult:
        """
        Route an excitation from site 1 to site 4 with one phase flip.

        The state starts on site 1; a single pi kick on ``kick_site`` at t_m
        moves it onto site 4 at 2t_m. Free evolution over 2t_m is the identity
        on the designed network, so it stays there at every even multiple of t_m.

        Args:
            network: Network Hamiltonian (possibly disordered)
            n_periods: Number of measurements at 2t_m, 4t_m, ...
            kick_site: 0-based site receiving the phase flip

        Returns:
            Fidelity against |r4> at each even multiple of t_m
        """
        if n_periods < 1:
            raise NetworkValidationError(
                f"n_periods must be at least 1, got {n_periods}",
                error_code="BAD_PERIODS",
            )
        t_m = DynamicsService.mirroring_time(network.base_scale)
        schedule = Schedule(
            initial=StateVector.basis(network.dim, SITE_1),
            hamiltonian=network,
            kicks=(KickEvent(time=t_m, site=kick_site, phase=math.pi),),
        )
        multiples = [2 * (k + 1) for k in range(n_periods)]
        samples = DynamicsService.state_at(schedule, [m * t_m for m in multiples])
        target = StateVector.basis(network.dim, SITE_4)
        return RouterResult(
            fidelities={
                m: DynamicsService.fidelity(target, sample.state)
                for m, sample in zip(multiples, samples)
            }
        )

    @staticmethod
    def run_entangler(
        network: NetworkHamiltonian,
        n_periods: int,
        pair: Tuple[int, int] = (SITE_1, SITE_4),
        kick_site: int = SITE_6,
    ) -> EntanglerResult:
        """
        Generate a maximally entangled state of sites 1 and 4.

        One pi/2 kick at t_m on ``kick_site``; the EOF of ``pair`` is recorded at
        2t_m, 4t_m, ...

        Args:
            network: Network Hamiltonian (possibly disordered)
            n_periods: Number of measurements
            pair: 0-based sites whose EOF is measured
            kick_site: 0-based site receiving the kick

        Returns:
            EOF at each even multiple of t_m
        """
        if n_periods < 1:
            raise NetworkValidationError(
                f"n_periods must be at least 1, got {n_periods}",
                error_code="BAD_PERIODS",
            )
        t_m = DynamicsService.mirroring_time(network.base_scale)
        schedule = Schedule(
            initial=StateVector.basis(network.dim, SITE_1),
            hamiltonian=network,
            kicks=(KickEvent(time=t_m, site=kick_site, phase=0.5 * math.pi),),
        )
        multiples = [2 * (k + 1) for k in range(n_periods)]
        samples = DynamicsService.state_at(schedule, [m * t_m for m in multiples])
        return EntanglerResult(
            pair=pair,
            eof={
                m: EntanglementService.pair_eof(sample.state, *pair)
                for m, sample in zip(multiples, samples)
            },
        )

    @staticmethod
    def return_fidelity(network: NetworkHamiltonian, theta: float) -> float:
        """Fidelity against |r1> at 2t_m after a kick theta on site 6 at t_m."""
        t_m = DynamicsService.mirroring_time(network.base_scale)
        schedule = Schedule(
            initial=StateVector.basis(network.dim, SITE_1),
            hamiltonian=network,
            kicks=(KickEvent(time=t_m, site=SITE_6, phase=theta),),
        )
        (sample,) = DynamicsService.state_at(schedule, [2.0 * t_m])
        return DynamicsService.fidelity(StateVector.basis(network.dim, SITE_1), sample.state)

    @staticmethod
    def sense_once(
        first: NetworkHamiltonian, second: NetworkHamiltonian, theta: float
    ) -> SenseSample:
        """
        Run both sensing experiments for an unknown phase theta.

        Args:
            first: Device used for F1 (kick theta)
            second: Device used for F2 (kick theta - pi/2)
            theta: Unknown phase in radians

        Returns:
            The pair (F1, F2)
        """
        return SenseSample(
            f1=ProtocolService.return_fidelity(first, theta),
            f2=ProtocolService.return_fidelity(second, theta + SENSOR_SHIFT),
        )

    @staticmethod
    def estimate_phase(sample: SenseSample) -> PhaseEstimate:
        """
        Recover two angle estimates from (F1, F2).

        theta1 comes from arccos(2F1 - 1), placed in [0, pi] or [pi, 2pi) by F2;
        theta2 comes from arcsin(2F2 - 1), placed in [-pi/2, pi/2] or
        [pi/2, 3pi/2] by F1. Ties at 0.5 take the first branch.

        Args:
            sample: Measured fidelities

        Returns:
            Both estimates in radians
        """
        f1 = min(1.0, max(0.0, sample.f1))
        f2 = min(1.0, max(0.0, sample.f2))

        base1 = math.acos(_clamp_unit(2.0 * f1 - 1.0))
        theta1 = base1 if f2 >= 0.5 else 2.0 * math.pi - base1
        if theta1 >= 2.0 * math.pi:
            theta1 -= 2.0 * math.pi

        base2 = math.asin(_clamp_unit(2.0 * f2 - 1.0))
        theta2 = base2 if f1 >= 0.5 else math.pi - base2
        return PhaseEstimate(theta1=theta1, theta2=theta2)

    @staticmethod
    def aggregate(estimates: Sequence[PhaseEstimate]) -> AggregateEstimate:
        """
        Average both estimators and keep the one with the smaller spread.

        A negative mean of theta2 is shifted by 2pi into [3pi/2, 2pi). On equal
        standard deviations estimator 1 is kept.

        Args:
            estimates: Per-realization estimates for one unknown phase

        Returns:
            Means, sample standard deviations and the chosen value

        Raises:
            NetworkValidationError: If no estimates are given
        """
        if not estimates:
            raise NetworkValidationError(
                "Cannot aggregate an empty list of estimates", error_code="EMPTY"
            )
        theta1 = np.array([e.theta1 for e in estimates], dtype=np.float64)
        theta2 = np.array([e.theta2 for e in estimates], dtype=np.float64)
        return ProtocolService.aggregate_arrays(theta1, theta2)

    @staticmethod
    def aggregate_arrays(theta1: np.ndarray, theta2: np.ndarray) -> AggregateEstimate:
        """Array form of :meth:`aggregate`, used by the sweep harness."""
        mean1 = float(np.mean(theta1))
        mean2 = float(np.mean(theta2))
        if mean2 < 0.0:
            mean2 += 2.0 * math.pi
        std1 = _sample_std(theta1)
        std2 = _sample_std(theta2)
        chosen = Estimator.ESTIMATOR1 if std1 <= std2 else Estimator.ESTIMATOR2
        return AggregateEstimate(
            mean1=mean1,
            mean2=mean2,
            std1=std1,
            std2=std2,
            n=int(theta1.size),
            chosen=chosen,
            value=mean1 if chosen is Estimator.ESTIMATOR1 else mean2,
        )

    @staticmethod
    def retrieve_phase(
        devices: Sequence[NetworkHamiltonian], theta: float
    ) -> Tuple[AggregateEstimate, List[SenseSample]]:
        """Full sensing protocol over a set of devices for one unknown phase."""
        samples = [ProtocolService.sense_once(h, h, theta) for h in devices]
        estimates = [ProtocolService.estimate_phase(s) for s in samples]
        return ProtocolService.aggregate(estimates), samples
