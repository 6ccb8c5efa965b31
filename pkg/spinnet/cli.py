"""
Command-line front end for the spin network simulator.
"""
import argparse
import json
import math
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, TextIO

from pydantic import ValidationError

from spinnet import __version__
from spinnet.core.config import settings
from spinnet.core.errors import SpinNetworkError
from spinnet.core.linalg import StateVector, linalg
from spinnet.models import KickEvent, NetworkHamiltonian, Schedule
from spinnet.schemas import (
    DisorderKind,
    DisorderSpec,
    Distribution,
    ProtocolKind,
    SweepConfig,
)
from spinnet.services.dynamics_service import DynamicsService
from spinnet.services.montecarlo_service import MonteCarloService
from spinnet.services.network_service import NetworkService
from spinnet.services.protocol_service import ProtocolService
from spinnet.utils.exporters import write_metadata_json, write_sweep_csv, write_trace_csv
from spinnet.utils.helpers import SimulationLogger, configure_logging, parse_angle

DISORDER_KINDS = {"diag": DisorderKind.DIAGONAL, "offdiag": DisorderKind.OFF_DIAGONAL}
DISTRIBUTIONS = {"flat": Distribution.FLAT, "gauss": Distribution.GAUSSIAN}


def parse_kick(text: str) -> Dict[str, float]:
    """Parse ``site=S,phase=P,at=T`` (1-based site, phase in degrees or pi, T in t_m)."""
    fields: Dict[str, str] = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected key=value in kick {text!r}")
        fields[key.strip().lower()] = value.strip()
    missing = {"site", "phase", "at"} - fields.keys()
    if missing:
        raise argparse.ArgumentTypeError(
            f"kick {text!r} is missing {', '.join(sorted(missing))}"
        )
    try:
        site = int(fields["site"])
        phase = parse_angle(fields["phase"])
        at = float(fields["at"])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad kick {text!r}: {exc}") from exc
    if site < 1 or at < 0 or not math.isfinite(at):
        raise argparse.ArgumentTypeError(f"bad kick {text!r}: site >= 1 and at >= 0")
    return {"site": site, "phase": phase, "at": at}


def parse_pair(text: str) -> List[int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected two sites like 1,4, got {text!r}") from exc
    return [a, b]


def angle_type(text: str) -> float:
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_network_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--j", type=float, default=settings.coupling, help="Coupling J")
    parser.add_argument("--config", type=Path, help="JSON network description")


def _add_single_disorder_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--disorder", choices=sorted(DISORDER_KINDS), default="offdiag")
    parser.add_argument("--dist", choices=sorted(DISTRIBUTIONS), default="gauss")
    parser.add_argument(
        "--scale", type=float, default=0.0, help="Error scale E in units of max|J|"
    )
    parser.add_argument("--seed", type=int, default=settings.default_seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinnet",
        description="Single-excitation spin network simulator.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=settings.log_level, help="Log level")
    sub = parser.add_subparsers(dest="command", required=True)

    spectrum = sub.add_parser("spectrum", help="Eigenvalues and eigenvectors")
    _add_network_flags(spectrum)

    trace = sub.add_parser("trace", help="Per-site occupation time series (CSV)")
    _add_network_flags(trace)
    trace.add_argument("--initial", type=int, default=1, help="1-based initial site")
    trace.add_argument(
        "--kick", type=parse_kick, action="append", default=[], help="site=S,phase=P,at=T"
    )
    trace.add_argument("--tmax", type=float, default=6.0, help="End time in units of t_m")
    trace.add_argument(
        "--dt",
        type=float,
        default=1.0 / settings.trace_samples_per_tm,
        help="Sampling step in units of t_m",
    )
    trace.add_argument("--output", type=Path, help="CSV path (stdout if omitted)")

    route = sub.add_parser("route", help="Run the router once")
    _add_network_flags(route)
    _add_single_disorder_flags(route)
    route.add_argument("--periods", type=int, default=3)
    route.add_argument("--kick-site", type=int, default=6)

    entangle = sub.add_parser("entangle", help="Run the entanglement generator once")
    _add_network_flags(entangle)
    _add_single_disorder_flags(entangle)
    entangle.add_argument("--periods", type=int, default=3)
    entangle.add_argument("--kick-site", type=int, default=6)
    entangle.add_argument("--pair", type=parse_pair, default=[1, 4])

    sense = sub.add_parser("sense", help="Estimate an unknown phase")
    _add_network_flags(sense)
    _add_single_disorder_flags(sense)
    sense.add_argument(
        "--theta", type=angle_type, required=True, help="Degrees or pi expression"
    )
    sense.add_argument("--realizations", type=int, default=1)

    sweep = sub.add_parser("sweep", help="Disorder-averaged Monte Carlo sweep (CSV)")
    _add_network_flags(sweep)
    sweep.add_argument("--protocol", choices=[p.value for p in ProtocolKind], required=True)
    sweep.add_argument("--disorder", choices=sorted(DISORDER_KINDS), default="offdiag")
    sweep.add_argument("--dist", choices=sorted(DISTRIBUTIONS), default="gauss")
    sweep.add_argument("--scale", type=float, nargs="+", help="Error scales E/J")
    sweep.add_argument("--realizations", type=int, default=settings.default_realizations)
    sweep.add_argument("--seed", type=int, default=settings.default_seed)
    sweep.add_argument(
        "--times", type=int, nargs="+", default=[2, 4, 6], help="Multiples of t_m"
    )
    sweep.add_argument("--theta-step", type=float, default=settings.theta_step_degrees)
    sweep.add_argument("--kick-site", type=int, default=6)
    sweep.add_argument("--pair", type=parse_pair, default=[1, 4])
    sweep.add_argument("--workers", type=int, default=settings.default_workers)
    sweep.add_argument("--output", type=Path, help="CSV path (stdout if omitted)")
    sweep.add_argument("--metadata", type=Path, help="Metadata JSON path")

    serve = sub.add_parser("serve", help="Start the HTTP API")
    serve.add_argument("--host", default=settings.host)
    serve.add_argument("--port", type=int, default=settings.port)
    return parser


@contextmanager
def _open_output(path: Optional[Path]) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        yield handle


def _network(args: argparse.Namespace) -> NetworkHamiltonian:
    if args.config is not None:
        return NetworkService.from_config(NetworkService.load_config(args.config))
    return NetworkService.designed_network(args.j)


def _device(args: argparse.Namespace) -> NetworkHamiltonian:
    base = _network(args)
    if args.scale == 0.0:
        return base
    spec = DisorderSpec(
        error_scale=args.scale,
        distribution=DISTRIBUTIONS[args.dist],
        kind=DISORDER_KINDS[args.disorder],
    )
    return MonteCarloService.single_device(base, spec, args.seed)


def _print_json(payload: object) -> None:
    print(json.dumps(payload, indent=2))


def cmd_spectrum(args: argparse.Namespace) -> int:
    network = _network(args)
    spectrum = linalg.eig_hermitian(network.operator)
    _print_json(
        {
            "eigenvalues": [float(x) for x in spectrum.eigenvalues],
            "eigenvectors": [
                [[float(z.real), float(z.imag)] for z in spectrum.eigenvectors[:, k]]
                for k in range(network.dim)
            ],
        }
    )
    return 0


def cmd_trace(args: argparse.Namespace) -> int:
    network = _network(args)
    t_m = DynamicsService.mirroring_time(network.base_scale)
    kicks = sorted(
        (
            KickEvent(time=k["at"] * t_m, site=int(k["site"]) - 1, phase=k["phase"])
            for k in args.kick
        ),
        key=lambda kick: kick.time,
    )
    schedule = Schedule(
        initial=StateVector.basis(network.dim, args.initial - 1),
        hamiltonian=network,
        kicks=tuple(kicks),
    )
    samples = DynamicsService.run_schedule(schedule, args.tmax * t_m, args.dt * t_m)
    with _open_output(args.output) as stream:
        write_trace_csv(samples, t_m, stream)
    return 0


def cmd_route(args: argparse.Namespace) -> int:
    result = ProtocolService.run_router(
        _device(args), args.periods, kick_site=args.kick_site - 1
    )
    _print_json({"fidelity": {f"{m}t_m": f for m, f in result.fidelities.items()}})
    return 0


def cmd_entangle(args: argparse.Namespace) -> int:
    a, b = args.pair
    result = ProtocolService.run_entangler(
        _device(args), args.periods, pair=(a - 1, b - 1), kick_site=args.kick_site - 1
    )
    _print_json({"pair": [a, b], "eof": {f"{m}t_m": e for m, e in result.eof.items()}})
    return 0


def cmd_sense(args: argparse.Namespace) -> int:
    if args.realizations < 1:
        raise ValueError("--realizations must be at least 1")
    base = _network(args)
    spec = DisorderSpec(
        error_scale=args.scale,
        distribution=DISTRIBUTIONS[args.dist],
        kind=DISORDER_KINDS[args.disorder],
    )
    devices = [
        MonteCarloService.single_device(base, spec, args.seed + r)
        for r in range(args.realizations)
    ]
    aggregate, samples = ProtocolService.retrieve_phase(devices, args.theta)
    _print_json(
        {
            "theta_degrees": math.degrees(args.theta),
            "f1": sum(s.f1 for s in samples) / len(samples),
            "f2": sum(s.f2 for s in samples) / len(samples),
            "theta1_degrees": math.degrees(aggregate.mean1),
            "theta2_degrees": math.degrees(aggregate.mean2),
            "chosen": aggregate.chosen.value,
            "estimate_degrees": math.degrees(aggregate.value),
            "std_degrees": math.degrees(aggregate.chosen_std),
            "n": aggregate.n,
        }
    )
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    fields: Dict[str, object] = {
        "protocol": args.protocol,
        "kind": DISORDER_KINDS[args.disorder],
        "distribution": DISTRIBUTIONS[args.dist],
        "realizations": args.realizations,
        "base_seed": args.seed,
        "measurement_times": args.times,
        "coupling": args.j,
        "kick_site": args.kick_site,
        "pair": tuple(args.pair),
        "workers": args.workers,
    }
    if args.scale:
        fields["error_scales"] = args.scale
    if args.theta_step <= 0 or args.theta_step > 360:
        raise ValueError("--theta-step must lie in (0, 360]")
    count = int(round(360.0 / args.theta_step))
    fields["theta_grid"] = [math.radians(args.theta_step * k) for k in range(count)]
    if args.config is not None:
        fields["network"] = NetworkService.load_config(args.config)

    cfg = SweepConfig.model_validate(fields)
    result = MonteCarloService.run_sweep(cfg)
    with _open_output(args.output) as stream:
        write_sweep_csv(result, stream)

    metadata_path = args.metadata
    if metadata_path is None and args.output is not None:
        metadata_path = args.output.with_suffix(".json")
    if metadata_path is not None:
        with open(metadata_path, "w", encoding="utf-8") as handle:
            write_metadata_json(result.metadata, handle)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run(
        "spinnet.main:app",
        host=args.host,
        port=args.port,
        reload=settings.debug,
        log_level=settings.log_level.lower(),
        access_log=True,
    )
    return 0


COMMANDS = {
    "spectrum": cmd_spectrum,
    "trace": cmd_trace,
    "route": cmd_route,
    "entangle": cmd_entangle,
    "sense": cmd_sense,
    "sweep": cmd_sweep,
    "serve": cmd_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        0 on success, 1 on a simulation failure; bad flags exit with status 2
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)

    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "input"
        parser.error(f"{location}: {first['msg']}")
    except SpinNetworkError as exc:
        SimulationLogger.log_error(exc.message, {"error_code": exc.error_code})
        print(f"spinnet: error: {exc.message}", file=sys.stderr)
        return 1
    except ValueError as exc:
        parser.error(str(exc))
    except OSError as exc:
        parser.error(f"cannot read {exc.filename}: {exc.strerror}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
