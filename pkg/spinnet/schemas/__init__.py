"""
Pydantic schemas for configuration, results and request/response bodies.
"""
import math
from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from spinnet.core.config import settings

GAUSSIAN_WIDTH = 1.0 / (2.0 * math.sqrt(3.0))


class Distribution(str, Enum):
    """Distribution of the random disorder numbers d."""

    FLAT = "flat"
    GAUSSIAN = "gaussian"


class DisorderKind(str, Enum):
    """Which Hamiltonian entries the disorder perturbs."""

    DIAGONAL = "diagonal"
    OFF_DIAGONAL = "off_diagonal"


class ProtocolKind(str, Enum):
    """Application protocol driven by a sweep."""

    ROUTER = "router"
    ENTANGLER = "entangler"
    SENSOR = "sensor"


class Estimator(str, Enum):
    """Phase estimator selected by the sensing protocol."""

    ESTIMATOR1 = "estimator1"
    ESTIMATOR2 = "estimator2"


def default_error_scales() -> List[float]:
    return [round(0.05 * k, 2) for k in range(9)]


def default_theta_grid() -> List[float]:
    step = settings.theta_step_degrees
    count = int(round(360.0 / step))
    return [math.radians(step * k) for k in range(count)]


# Network Schemas
class ChainSpec(BaseModel):
    """Nearest-neighbour chain: couplings J_{i,i+1} and on-site energies."""

    n_sites: int = Field(..., ge=1)
    couplings: List[float]
    onsite: Optional[List[float]] = None

    @field_validator("couplings")
    @classmethod
    def check_finite(cls, v: List[float]) -> List[float]:
        if not all(math.isfinite(x) for x in v):
            raise ValueError("couplings must be finite")
        return v

    @model_validator(mode="after")
    def check_lengths(self) -> "ChainSpec":
        if len(self.couplings) != max(self.n_sites - 1, 0):
            raise ValueError(
                f"expected {self.n_sites - 1} couplings, got {len(self.couplings)}"
            )
        if self.onsite is not None and len(self.onsite) != self.n_sites:
            raise ValueError(
                f"expected {self.n_sites} on-site energies, got {len(self.onsite)}"
            )
        return self

    @classmethod
    def uniform(cls, n_sites: int, coupling: float = 1.0) -> "ChainSpec":
        """Chain with J_{i,i+1} = coupling and zero on-site energies."""
        return cls(n_sites=n_sites, couplings=[coupling] * max(n_sites - 1, 0))


class DisorderSpec(BaseModel):
    """Static disorder: error scale E (units of max|J|), distribution and kind."""

    model_config = ConfigDict(frozen=True)

    error_scale: float = Field(..., ge=0.0, allow_inf_nan=False)
    distribution: Distribution = Distribution.GAUSSIAN
    kind: DisorderKind = DisorderKind.OFF_DIAGONAL

    @property
    def width(self) -> float:
        """Standard deviation of the Gaussian, matched to the flat window."""
        return GAUSSIAN_WIDTH


class CouplingEntry(BaseModel):
    """One coupling between two 1-based sites."""

    sites: Tuple[int, int]
    value: float = Field(..., allow_inf_nan=False)


class ConnectorEntry(BaseModel):
    """Connector unitary acting on two 1-based sites."""

    sites: Tuple[int, int]
    kind: Literal["hadamard"] = "hadamard"


class NetworkConfig(BaseModel):
    """Structured text description of a network (JSON)."""

    n_sites: int = Field(..., ge=2)
    couplings: List[CouplingEntry] = Field(default_factory=list)
    onsite: Optional[List[float]] = None
    connectors: List[ConnectorEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_sites(self) -> "NetworkConfig":
        pairs = [c.sites for c in self.couplings] + [c.sites for c in self.connectors]
        for i, j in pairs:
            if not (1 <= i <= self.n_sites and 1 <= j <= self.n_sites):
                raise ValueError(f"site pair ({i},{j}) outside 1..{self.n_sites}")
            if i == j:
                raise ValueError(f"site pair ({i},{j}) must join distinct sites")
        if self.onsite is not None and len(self.onsite) != self.n_sites:
            raise ValueError(
                f"expected {self.n_sites} on-site energies, got {len(self.onsite)}"
            )
        return self


# Protocol Schemas
class RouterResult(BaseModel):
    """Fidelity against |r4> keyed by the measurement time in units of t_m."""

    fidelities: Dict[int, float]

    @field_validator("fidelities")
    @classmethod
    def check_range(cls, v: Dict[int, float]) -> Dict[int, float]:
        if any(not 0.0 <= f <= 1.0 for f in v.values()):
            raise ValueError("fidelities must lie in [0, 1]")
        return v


class EntanglerResult(BaseModel):
    """EOF of the measured pair keyed by the measurement time in units of t_m."""

    pair: Tuple[int, int]
    eof: Dict[int, float]


class SenseSample(BaseModel):
    """Return fidelities of the two sensing experiments."""

    f1: float = Field(..., allow_inf_nan=False)
    f2: float = Field(..., allow_inf_nan=False)


class PhaseEstimate(BaseModel):
    """Angles recovered from one (F1, F2) pair, radians."""

    theta1: float = Field(..., ge=0.0, lt=2.0 * math.pi)
    theta2: float = Field(..., ge=-0.5 * math.pi, le=1.5 * math.pi)


class AggregateEstimate(BaseModel):
    """Means and spreads of both estimators and the selected value."""

    mean1: float
    mean2: float
    std1: float
    std2: float
    n: int = Field(..., ge=1)
    chosen: Estimator
    value: float

    @property
    def chosen_std(self) -> float:
        return self.std1 if self.chosen is Estimator.ESTIMATOR1 else self.std2

    @property
    def chosen_stderr(self) -> float:
        """Standard deviation of the mean of the chosen estimator."""
        return self.chosen_std / math.sqrt(self.n)


# Monte Carlo Schemas
class SweepConfig(BaseModel):
    """Disorder-averaging sweep definition."""

    protocol: ProtocolKind
    kind: DisorderKind = DisorderKind.OFF_DIAGONAL
    distribution: Distribution = Distribution.GAUSSIAN
    error_scales: List[float] = Field(default_factory=default_error_scales)
    realizations: int = Field(default_factory=lambda: settings.default_realizations, ge=1)
    base_seed: int = Field(default_factory=lambda: settings.default_seed, ge=0, lt=2**64)
    measurement_times: List[int] = Field(default_factory=lambda: [2, 4, 6])
    theta_grid: List[float] = Field(default_factory=default_theta_grid)
    coupling: float = Field(default_factory=lambda: settings.coupling, gt=0.0)
    kick_site: int = Field(6, ge=1)
    pair: Tuple[int, int] = (1, 4)
    workers: int = Field(default_factory=lambda: settings.default_workers, ge=1)
    network: Optional[NetworkConfig] = None

    @field_validator("error_scales")
    @classmethod
    def check_scales(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("at least one error scale is required")
        if any(not math.isfinite(e) or e < 0 for e in v):
            raise ValueError("error scales must be finite and non-negative")
        return v

    @field_validator("measurement_times")
    @classmethod
    def check_times(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("at least one measurement time is required")
        if any(t <= 0 or t % 2 for t in v):
            raise ValueError("measurement times must be positive even multiples of t_m")
        return sorted(set(v))

    @field_validator("theta_grid")
    @classmethod
    def check_grid(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("theta grid must not be empty")
        return v


class SweepPoint(BaseModel):
    """Aggregated statistic at one (error scale, time or angle, quantity)."""

    error_scale: float
    coordinate: float
    quantity: str
    mean: float
    sample_std: float
    stderr: float
    n: int
    chosen: Optional[Estimator] = None


class SweepResult(BaseModel):
    """Sweep output with its configuration echo and run metadata."""

    config: SweepConfig
    points: List[SweepPoint]
    metadata: Dict[str, Any]


# API Schemas
class SpectrumResponse(BaseModel):
    """Eigenvalues and eigenvectors (real and imaginary parts, columns)."""

    coupling: float
    eigenvalues: List[float]
    eigenvectors_real: List[List[float]]
    eigenvectors_imag: List[List[float]]


class ProtocolRequest(BaseModel):
    """Single-run protocol request, optionally on one disordered device."""

    coupling: float = Field(default_factory=lambda: settings.coupling, gt=0.0)
    n_periods: int = Field(3, ge=1, le=1000)
    disorder: Optional[DisorderSpec] = None
    seed: int = Field(default_factory=lambda: settings.default_seed, ge=0)


class SenseRequest(BaseModel):
    """Single phase-sensing request with the unknown angle in degrees."""

    theta_degrees: float = Field(..., allow_inf_nan=False)
    coupling: float = Field(default_factory=lambda: settings.coupling, gt=0.0)
    disorder: Optional[DisorderSpec] = None
    seed: int = Field(default_factory=lambda: settings.default_seed, ge=0)


class SenseResponse(BaseModel):
    """Fidelities and both recovered angles, in degrees."""

    f1: float
    f2: float
    theta1_degrees: float
    theta2_degrees: float


class ErrorResponse(BaseModel):
    """Error response schema."""

    detail: str
    error_code: Optional[str] = None
