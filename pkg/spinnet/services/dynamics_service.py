"""
Dynamics service layer: fidelity, mirroring time, phase kicks and schedules.
"""
import math
from typing import List, Sequence

import numpy as np
import structlog

from spinnet.core.errors import NetworkValidationError
from spinnet.core.linalg import StateVector, linalg
from spinnet.models import KickEvent, Schedule, ScheduleSample

logger = structlog.get_logger("spinnet.dynamics")

# Relative tolerance for merging a grid point with a kick time.
_TIME_MERGE = 1e-9


class DynamicsService:
    """Service class for time evolution of single-excitation states."""

    @staticmethod
    def mirroring_time(coupling: float) -> float:
        """
        Mirroring time pi / (sqrt(2) J) of a uniform trimer.

        Args:
            coupling: Coupling J > 0

        Returns:
            t_m in units of 1/J

        Raises:
            NetworkValidationError: If J is not positive
        """
        if not coupling > 0:
            raise NetworkValidationError(
                f"Coupling must be positive to define t_m, got {coupling}",
                error_code="NON_POSITIVE_COUPLING",
            )
        return math.pi / (math.sqrt(2.0) * coupling)

    @staticmethod
    def phase_kick(psi: StateVector, site: int, theta: float) -> StateVector:
        """
        Multiply the amplitude on one site by e^{i theta}, instantaneously.

        Args:
            psi: State before the kick
            site: 0-based site index
            theta: Phase in radians

        Returns:
            State after the kick
        """
        if not 0 <= site < psi.dim:
            raise NetworkValidationError(
                f"Kick site {site} out of range for dimension {psi.dim}",
                error_code="SITE_OUT_OF_RANGE",
            )
        if theta == 0.0:
            return psi
        amplitudes = np.array(psi.amplitudes)
        amplitudes[site] *= np.exp(1j * theta)
        return StateVector(amplitudes)

    @staticmethod
    def fidelity(desired: StateVector, actual: StateVector) -> float:
        """
        Squared overlap |<desired|actual>|^2.

        Raises:
            NetworkValidationError: On dimension mismatch
        """
        if desired.dim != actual.dim:
            raise NetworkValidationError(
                f"Cannot compare states of dimension {desired.dim} and {actual.dim}",
                error_code="DIMENSION_MISMATCH",
            )
        overlap = np.vdot(desired.amplitudes, actual.amplitudes)
        return min(1.0, float(abs(overlap) ** 2))

    @staticmethod
    def state_at(schedule: Schedule, times: Sequence[float]) -> List[ScheduleSample]:
        """
        Evaluate a kick-interrupted evolution exactly at the requested times.

        Between kicks the state evolves freely under the schedule's Hamiltonian;
        a kick scheduled at or before a sample time has already been applied
        when that sample is taken.

        Args:
            schedule: Experiment definition
            times: Non-decreasing sample times (units of 1/J)

        Returns:
            One sample per requested time
        """
        operator = schedule.hamiltonian.operator
        kicks = schedule.kicks
        samples: List[ScheduleSample] = []

        anchor_time = 0.0
        anchor_state = schedule.initial
        next_kick = 0
        for t in times:
            if t < anchor_time:
                raise NetworkValidationError(
                    "Sample times must be non-decreasing", error_code="TIMES_UNORDERED"
                )
            while next_kick < len(kicks) and kicks[next_kick].time <= t:
                kick = kicks[next_kick]
                state = linalg.evolve(operator, anchor_state, kick.time - anchor_time)
                anchor_state = DynamicsService.phase_kick(state, kick.site, kick.phase)
                anchor_time = kick.time
                next_kick += 1
            state = linalg.evolve(operator, anchor_state, t - anchor_time)
            samples.append(ScheduleSample(time=float(t), state=state))
        return samples

    @staticmethod
    def run_schedule(schedule: Schedule, t_end: float, dt: float) -> List[ScheduleSample]:
        """
        Sample a schedule on the dt grid plus every kick time.

        Args:
            schedule: Experiment definition
            t_end: Last sample time
            dt: Grid spacing

        Returns:
            Time-ordered samples

        Raises:
            NetworkValidationError: If dt is not positive or a kick lies beyond t_end
        """
        if not dt > 0:
            raise NetworkValidationError(
                f"dt must be positive, got {dt}", error_code="BAD_TIME_STEP"
            )
        if t_end < 0:
            raise NetworkValidationError(
                f"t_end must be non-negative, got {t_end}", error_code="BAD_TIME_STEP"
            )
        for kick in schedule.kicks:
            if kick.time > t_end * (1.0 + _TIME_MERGE):
                raise NetworkValidationError(
                    f"Kick at t={kick.time} lies beyond t_end={t_end}",
                    error_code="KICK_AFTER_END",
                )

        steps = int(math.floor(t_end / dt * (1.0 + _TIME_MERGE)))
        times = [k * dt for k in range(steps + 1)]
        for kick in schedule.kicks:
            times.append(kick.time)
        times.sort()

        merged: List[float] = []
        for t in times:
            if merged and abs(t - merged[-1]) <= _TIME_MERGE * dt:
                # Snap to the kick time so the sample is the post-kick state.
                if any(k.time == t for k in schedule.kicks):
                    merged[-1] = t
                continue
            merged.append(t)

        logger.debug("schedule sampled", samples=len(merged), kicks=len(schedule.kicks))
        return DynamicsService.state_at(schedule, merged)

    @staticmethod
    def populations(samples: Sequence[ScheduleSample]) -> np.ndarray:
        """Occupation |a_i(t)|^2 as an array of shape (samples, sites)."""
        return np.array([sample.state.populations for sample in samples])

    @staticmethod
    def kick_train(
        t_m: float, site: int, phase: float, count: int, first: int = 1, step: int = 2
    ) -> List[KickEvent]:
        """Kicks at first*t_m, (first+step)*t_m, ... on one site."""
        return [
            KickEvent(time=(first + step * k) * t_m, site=site, phase=phase)
            for k in range(count)
        ]
