"""
Unit tests for angle helpers, run metadata and exporters.
"""
import io
import json
import math

import pytest

from spinnet.core.linalg import StateVector
from spinnet.models import Schedule
from spinnet.schemas import ProtocolKind, SweepConfig, SweepPoint, SweepResult
from spinnet.services.dynamics_service import DynamicsService
from spinnet.utils.exporters import write_metadata_json, write_sweep_csv, write_trace_csv
from spinnet.utils.helpers import (
    circular_distance,
    create_run_metadata,
    parse_angle,
    wrap_angle,
)
from tests.conftest import T_M

pytestmark = pytest.mark.unit


class TestParseAngle:
    """Test CLI angle parsing."""

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("90", math.pi / 2),
            ("-45.5", math.radians(-45.5)),
            ("pi", math.pi),
            ("-pi/2", -math.pi / 2),
            ("3pi/2", 3 * math.pi / 2),
            ("0.5*pi", math.pi / 2),
            (" 5 pi / 4 ", 5 * math.pi / 4),
        ],
    )
    def test_valid(self, text, expected):
        """Degrees and pi expressions parse to radians."""
        assert parse_angle(text) == pytest.approx(expected)

    @pytest.mark.parametrize("text", ["pie", "2pi/0", "abc", "pi/2/2"])
    def test_invalid(self, text):
        """Unrecognised angles raise ValueError."""
        with pytest.raises(ValueError):
            parse_angle(text)


class TestAngles:
    """Test angle folding and distances."""

    @pytest.mark.parametrize(
        "theta, expected",
        [(0.0, 0.0), (-math.pi / 2, 3 * math.pi / 2), (5 * math.pi, math.pi)],
    )
    def test_wrap(self, theta, expected):
        """Angles fold into [0, 2pi)."""
        assert wrap_angle(theta) == pytest.approx(expected)

    def test_wrap_upper_bound(self):
        """2pi itself folds to 0."""
        assert wrap_angle(2 * math.pi) == 0.0

    def test_circular_distance(self):
        """Distance goes the short way round."""
        assert circular_distance(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2)
        assert circular_distance(1.0, 1.0) == 0.0


class TestRunMetadata:
    """Test sweep metadata."""

    def test_fields(self):
        """Seed and generator are pulled out of the configuration."""
        metadata = create_run_metadata({"base_seed": 9}, "philox", {"extra": 1})
        assert metadata["seed"] == 9
        assert metadata["rng_algorithm"] == "philox"
        assert metadata["extra"] == 1
        assert "code_version" in metadata


class TestExporters:
    """Test CSV and JSON writers."""

    def test_trace_rows(self, designed):
        """One row per (sample, site) with 1-based sites and t in t_m."""
        schedule = Schedule(initial=StateVector.basis(6, 0), hamiltonian=designed)
        samples = DynamicsService.run_schedule(schedule, T_M, T_M / 2)
        stream = io.StringIO()
        assert write_trace_csv(samples, T_M, stream) == 18
        lines = stream.getvalue().splitlines()
        assert lines[0] == "t,site,population"
        t, site, population = lines[1].split(",")
        assert (t, site) == ("0.0", "1")
        assert float(population) == pytest.approx(1.0, abs=1e-12)
        assert lines[-1].split(",")[:2] == ["1.0", "6"]

    def test_sweep_rows(self):
        """Angles are written in degrees for sensor sweeps."""
        cfg = SweepConfig(protocol=ProtocolKind.SENSOR, theta_grid=[math.pi])
        point = SweepPoint(
            error_scale=0.1,
            coordinate=math.pi,
            quantity="estimate",
            mean=math.pi,
            sample_std=0.0,
            stderr=0.0,
            n=4,
        )
        result = SweepResult(config=cfg, points=[point], metadata={})
        stream = io.StringIO()
        assert write_sweep_csv(result, stream) == 1
        row = stream.getvalue().splitlines()[1].split(",")
        assert row[:6] == ["sensor", "off_diagonal", "gaussian", "0.1", "180.0", "estimate"]
        assert row[6] == "180.0"
        assert row[-1] == "4"

    def test_metadata_sorted(self):
        """Keys are written in sorted order."""
        stream = io.StringIO()
        write_metadata_json({"b": 1, "a": 2}, stream)
        text = stream.getvalue()
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(text) == {"a": 2, "b": 1}
