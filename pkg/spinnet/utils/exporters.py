"""
CSV and JSON writers for traces and sweep results.
"""
import csv
import json
import math
from typing import Any, Dict, Sequence, TextIO

from spinnet.models import ScheduleSample
from spinnet.schemas import ProtocolKind, SweepResult

TRACE_HEADER = ["t", "site", "population"]
SWEEP_HEADER = [
    "protocol",
    "disorder_kind",
    "distribution",
    "error_scale",
    "time_or_theta",
    "quantity",
    "mean",
    "sample_std",
    "stderr",
    "n",
]

_ANGLE_QUANTITIES = {"theta1", "theta2", "estimate"}


def _fmt(value: float) -> str:
    # Shortest round-trip representation keeps output byte-stable.
    return repr(float(value))


def write_trace_csv(samples: Sequence[ScheduleSample], t_m: float, stream: TextIO) -> int:
    """
    Write per-site populations of a sampled schedule.

    Args:
        samples: Output of DynamicsService.run_schedule
        t_m: Mirroring time used to express t in units of t_m
        stream: Text stream to write to

    Returns:
        Number of data rows written
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    rows = 0
    for sample in samples:
        t = sample.time / t_m
        for site, population in enumerate(sample.state.populations, start=1):
            writer.writerow([_fmt(t), site, _fmt(population)])
            rows += 1
    return rows


def write_sweep_csv(result: SweepResult, stream: TextIO) -> int:
    """
    Write a sweep result as CSV.

    Sensor coordinates and angle statistics are written in degrees; router
    and entangler coordinates are multiples of t_m.

    Args:
        result: Sweep result
        stream: Text stream to write to

    Returns:
        Number of data rows written
    """
    cfg = result.config
    is_sensor = cfg.protocol is ProtocolKind.SENSOR
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for point in result.points:
        coordinate = math.degrees(point.coordinate) if is_sensor else point.coordinate
        mean, std, stderr = point.mean, point.sample_std, point.stderr
        if point.quantity in _ANGLE_QUANTITIES:
            mean, std, stderr = (math.degrees(x) for x in (mean, std, stderr))
        writer.writerow(
            [
                cfg.protocol.value,
                cfg.kind.value,
                cfg.distribution.value,
                _fmt(point.error_scale),
                _fmt(coordinate),
                point.quantity,
                _fmt(mean),
                _fmt(std),
                _fmt(stderr),
                point.n,
            ]
        )
    return len(result.points)


def write_metadata_json(metadata: Dict[str, Any], stream: TextIO) -> None:
    """Write the metadata sidecar with stable key order."""
    json.dump(metadata, stream, indent=2, sort_keys=True)
    stream.write("\n")
