"""
Unit tests for random substreams and disorder-averaged sweeps.
"""
import math

import numpy as np
import pytest
from pydantic import ValidationError

from spinnet.core.rng import RNG_ALGORITHM
from spinnet.schemas import DisorderKind, DisorderSpec, ProtocolKind, SweepConfig
from spinnet.services.montecarlo_service import MonteCarloService, substream
from spinnet.services.network_service import NetworkService
from spinnet.services.protocol_service import ProtocolService
from spinnet.utils.helpers import circular_distance

pytestmark = pytest.mark.unit


def _router_config(**overrides) -> SweepConfig:
    fields = {
        "protocol": ProtocolKind.ROUTER,
        "error_scales": [0.0, 0.1],
        "realizations": 8,
        "base_seed": 42,
        "workers": 1,
    }
    fields.update(overrides)
    return SweepConfig(**fields)


class TestSubstream:
    """Test counter-based random streams."""

    def test_same_key_same_draws(self):
        """A stream depends only on its seed and indices."""
        a = substream(42, [1, 7]).normal(size=16)
        b = substream(42, [1, 7]).normal(size=16)
        assert np.array_equal(a, b)

    def test_order_independent(self):
        """Drawing other streams first does not change a stream."""
        first = substream(42, [0, 3]).random(8)
        for r in range(3):
            substream(42, [0, r]).random(100)
        assert np.array_equal(substream(42, [0, 3]).random(8), first)

    def test_neighbours_uncorrelated(self):
        """Adjacent realization streams are statistically independent."""
        a = substream(42, [0, 0]).normal(size=20000)
        b = substream(42, [0, 1]).normal(size=20000)
        assert abs(np.corrcoef(a, b)[0, 1]) < 0.05

    def test_different_seeds_differ(self):
        """Different base seeds give different streams."""
        a = substream(1, [0, 0]).random(4)
        b = substream(2, [0, 0]).random(4)
        assert not np.array_equal(a, b)


class TestSweepConfig:
    """Test sweep validation."""

    def test_odd_time_rejected(self):
        """Measurement times are even multiples of t_m."""
        with pytest.raises(ValidationError):
            _router_config(measurement_times=[3])

    def test_times_sorted(self):
        """Duplicate and unordered times are normalised."""
        cfg = _router_config(measurement_times=[6, 2, 2])
        assert cfg.measurement_times == [2, 6]

    def test_negative_scale_rejected(self):
        """Error scales must be non-negative."""
        with pytest.raises(ValidationError):
            _router_config(error_scales=[-0.1])

    def test_zero_realizations_rejected(self):
        """At least one realization is required."""
        with pytest.raises(ValidationError):
            _router_config(realizations=0)


class TestRouterSweep:
    """Test router sweeps."""

    def test_zero_scale_is_ideal(self):
        """E = 0 gives mean 1 and no spread at every time."""
        result = MonteCarloService.run_sweep(_router_config(error_scales=[0.0]))
        assert len(result.points) == 3
        for point in result.points:
            assert point.quantity == "fidelity"
            assert point.mean == pytest.approx(1.0, abs=1e-10)
            assert point.sample_std == pytest.approx(0.0, abs=1e-10)
            assert point.n == 8

    def test_deterministic(self):
        """Two runs with the same seed are identical."""
        a = MonteCarloService.run_sweep(_router_config())
        b = MonteCarloService.run_sweep(_router_config())
        assert a.points == b.points

    def test_seed_changes_result(self):
        """A different base seed gives different disordered means."""
        a = MonteCarloService.run_sweep(_router_config(error_scales=[0.2]))
        b = MonteCarloService.run_sweep(_router_config(error_scales=[0.2], base_seed=43))
        assert a.points[0].mean != b.points[0].mean

    def test_parallel_matches_serial(self):
        """Worker count does not change the realization array."""
        serial = MonteCarloService.realization_array(_router_config(), 1)
        parallel = MonteCarloService.realization_array(_router_config(workers=2), 1)
        assert np.array_equal(serial, parallel)

    def test_realization_matches_single_device(self, designed):
        """Realization r of scale s uses substream(seed, [s, r])."""
        cfg = _router_config(error_scales=[0.3], realizations=3)
        values = MonteCarloService.realization_array(cfg, 0)
        spec = DisorderSpec(error_scale=0.3, kind=DisorderKind.OFF_DIAGONAL)
        device = NetworkService.apply_disorder(designed, spec, substream(42, [0, 2]))
        routed = ProtocolService.run_router(device, 3)
        assert values.shape == (3, 3)
        assert values[2, 0] == pytest.approx(routed.fidelities[2], abs=1e-12)

    def test_stderr(self):
        """stderr is the sample std over sqrt(n)."""
        result = MonteCarloService.run_sweep(_router_config(error_scales=[0.3]))
        for point in result.points:
            assert point.stderr == pytest.approx(point.sample_std / math.sqrt(8))

    def test_metadata(self):
        """Metadata records the seed, generator and configuration."""
        result = MonteCarloService.run_sweep(_router_config())
        assert result.metadata["seed"] == 42
        assert result.metadata["rng_algorithm"] == RNG_ALGORITHM
        assert result.metadata["config"]["protocol"] == "router"
        assert "numpy_version" in result.metadata

    def test_points_for(self):
        """points_for filters one quantity at one scale."""
        result = MonteCarloService.run_sweep(_router_config())
        points = MonteCarloService.points_for(result, "fidelity", 0.1)
        assert [p.coordinate for p in points] == [2.0, 4.0, 6.0]


class TestEntanglerSweep:
    """Test entanglement sweeps."""

    def test_zero_scale_is_maximal(self):
        """E = 0 gives EOF 1 at each requested time."""
        cfg = SweepConfig(
            protocol=ProtocolKind.ENTANGLER,
            error_scales=[0.0],
            realizations=2,
            measurement_times=[2, 4],
            workers=1,
        )
        result = MonteCarloService.run_sweep(cfg)
        assert [p.quantity for p in result.points] == ["eof", "eof"]
        for point in result.points:
            assert point.mean == pytest.approx(1.0, abs=1e-10)

    def test_diagonal_disorder_stays_bounded(self):
        """Disordered EOF lies in [0, 1]."""
        cfg = SweepConfig(
            protocol=ProtocolKind.ENTANGLER,
            kind=DisorderKind.DIAGONAL,
            error_scales=[0.3],
            realizations=10,
            workers=1,
        )
        values = MonteCarloService.realization_array(cfg, 0)
        assert np.all((values >= 0.0) & (values <= 1.0 + 1e-12))


class TestSensorSweep:
    """Test phase-sensor sweeps."""

    def test_point_structure(self):
        """Each angle yields f1, f2, theta1, theta2 and estimate points."""
        grid = [0.0, math.pi / 3, 4.0]
        cfg = SweepConfig(
            protocol=ProtocolKind.SENSOR,
            error_scales=[0.0],
            realizations=3,
            theta_grid=grid,
            workers=1,
        )
        result = MonteCarloService.run_sweep(cfg)
        assert len(result.points) == 15
        quantities = [p.quantity for p in result.points[:5]]
        assert quantities == ["f1", "f2", "theta1", "theta2", "estimate"]
        estimates = MonteCarloService.points_for(result, "estimate", 0.0)
        for point, theta in zip(estimates, grid):
            assert point.chosen is not None
            assert circular_distance(point.mean, theta) < 1e-6

    def test_f1_matches_forward_law(self):
        """Zero-disorder f1 is (1 + cos theta)/2."""
        cfg = SweepConfig(
            protocol=ProtocolKind.SENSOR,
            error_scales=[0.0],
            realizations=1,
            theta_grid=[2.0],
            workers=1,
        )
        result = MonteCarloService.run_sweep(cfg)
        (f1,) = MonteCarloService.points_for(result, "f1", 0.0)
        assert f1.mean == pytest.approx(0.5 * (1 + math.cos(2.0)), abs=1e-10)
