"""INI-style config files for the CLI.

Flat key-value sections, one per module: [system], [traffic], [link],
[reliability], [sim], [sweep], [modes]. Grammar:

    [system]
    frame_duration_s = 5e-4
    bandwidth_hz = 1e5
    packet_size_bytes = 15      ; or packet_size_bits
    tx_phase_s = 3e-4
    noise_psd = 1.0
    delay_bound_s = 8e-4

    [traffic]
    mean_arrivals_per_frame = 0.01

    [link]
    h1_sq = 2.0
    h2_sq = 1.0
    alpha1 = 0.2
    alpha2 = 0.8

    [reliability]
    eps_d = 1e-5
    split = equal               ; equal | fixed:<ratio> | optimized

    [modes]
    mode = paper                ; paper | corrected

    [sim]
    seed = 42
    num_frames = 10000000
    service_packets_per_frame = 1.0
    warmup_frames = -1          ; -1 = 1% of num_frames
    mean_arrivals_per_frame = 0.5

    [sweep]
    variable = eps_c            ; eps_c | theta | u_bytes | phi
    spacing = log
    start = 1e-5
    stop = 1e-3
    points = 20
    overlay = u_bytes           ; optional
    overlay_values = 5, 15, 25  ; optional
    theta = 0.1
    eps_c = 1e-5
    oma = false
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

from .errors import ConfigError
from .fbl import DispersionMode, SystemConfig
from .noma import SinrMode
from .planner import EqualSplit, FixedSplit, OptimizedSplit, SplitPolicy
from .sim import QueueSimConfig
from .sweep import SweepSpec
from .traffic import DelayBound, TrafficModel


def _read(path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    return parser


def _get(parser, section: str, key: str, convert=float, default=None):
    if not parser.has_section(section):
        if default is not None:
            return default
        raise ConfigError(f"missing section [{section}]")
    if not parser.has_option(section, key):
        if default is not None:
            return default
        raise ConfigError(f"missing field '{key}' in section [{section}]")
    raw = parser.get(section, key)
    try:
        return convert(raw)
    except ValueError as exc:
        raise ConfigError(
            f"field '{key}' in section [{section}]: cannot parse {raw!r}"
        ) from exc


def _bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def parse_modes(parser) -> tuple[DispersionMode, SinrMode]:
    name = _get(parser, "modes", "mode", str, default="paper").strip().lower()
    if name == "paper":
        return DispersionMode.PAPER_LITERAL, SinrMode.PAPER_LITERAL
    if name == "corrected":
        return DispersionMode.STANDARD, SinrMode.CORRECTED
    raise ConfigError(f"field 'mode' in section [modes]: must be paper|corrected")


def parse_split(raw: str) -> SplitPolicy:
    low = raw.strip().lower()
    if low == "equal":
        return EqualSplit()
    if low == "optimized":
        return OptimizedSplit()
    if low.startswith("fixed:"):
        return FixedSplit(float(low.split(":", 1)[1]))
    raise ValueError(f"not a split policy: {raw!r}")


def parse_system(parser) -> SystemConfig:
    if parser.has_option("system", "packet_size_bits"):
        bits = _get(parser, "system", "packet_size_bits")
    else:
        bits = 8.0 * _get(parser, "system", "packet_size_bytes")
    return SystemConfig(
        frame_duration_s=_get(parser, "system", "frame_duration_s"),
        bandwidth_hz=_get(parser, "system", "bandwidth_hz"),
        packet_size_bits=bits,
        tx_phase_s=_get(parser, "system", "tx_phase_s"),
        noise_psd=_get(parser, "system", "noise_psd", default=1.0),
        delay_bound_s=_get(parser, "system", "delay_bound_s", default=8e-4),
    )


def parse_traffic(parser, frame_duration_s: float) -> TrafficModel:
    lam = _get(parser, "traffic", "mean_arrivals_per_frame")
    return TrafficModel(lam, frame_duration_s)


@dataclass(frozen=True)
class PlanConfig:
    system: SystemConfig
    traffic: TrafficModel
    h1_sq: float
    h2_sq: float
    alpha1: float
    alpha2: float
    eps_d: float
    bound: DelayBound
    split: SplitPolicy
    dispersion_mode: DispersionMode
    sinr_mode: SinrMode


def load_plan_config(path) -> PlanConfig:
    parser = _read(path)
    system = parse_system(parser)
    dmode, smode = parse_modes(parser)
    return PlanConfig(
        system=system,
        traffic=parse_traffic(parser, system.frame_duration_s),
        h1_sq=_get(parser, "link", "h1_sq"),
        h2_sq=_get(parser, "link", "h2_sq"),
        alpha1=_get(parser, "link", "alpha1", default=0.2),
        alpha2=_get(parser, "link", "alpha2", default=0.8),
        eps_d=_get(parser, "reliability", "eps_d"),
        bound=DelayBound(system.delay_bound_s),
        split=_get(parser, "reliability", "split", parse_split,
                   default=EqualSplit()),
        dispersion_mode=dmode,
        sinr_mode=smode,
    )


@dataclass(frozen=True)
class SimulateConfig:
    queue: QueueSimConfig
    delay_bound_s: float


def load_sim_config(path) -> SimulateConfig:
    parser = _read(path)
    frame = _get(parser, "sim", "frame_duration_s", default=5e-4)
    traffic = TrafficModel(
        _get(parser, "sim", "mean_arrivals_per_frame"), frame
    )
    queue = QueueSimConfig(
        seed=_get(parser, "sim", "seed", int),
        num_frames=_get(parser, "sim", "num_frames", int),
        service_packets_per_frame=_get(parser, "sim", "service_packets_per_frame"),
        traffic=traffic,
        warmup_frames=_get(parser, "sim", "warmup_frames", int, default=-1),
    )
    bound = _get(parser, "sim", "delay_bound_s", default=8e-4)
    return SimulateConfig(queue=queue, delay_bound_s=bound)


def load_sweep_spec(path) -> SweepSpec:
    parser = _read(path)
    dmode, _ = parse_modes(parser)
    overlay = _get(parser, "sweep", "overlay", str, default="") or None
    if overlay:
        raw = _get(parser, "sweep", "overlay_values", str)
        values = tuple(float(v) for v in raw.split(","))
    else:
        values = ()
    kwargs = dict(
        variable=_get(parser, "sweep", "variable", str),
        spacing=_get(parser, "sweep", "spacing", str, default="log"),
        start=_get(parser, "sweep", "start"),
        stop=_get(parser, "sweep", "stop"),
        points=_get(parser, "sweep", "points", int),
        overlay_param=overlay,
        overlay_values=values,
        theta=_get(parser, "sweep", "theta", default=0.1),
        eps_c=_get(parser, "sweep", "eps_c", default=1e-5),
        oma=_get(parser, "sweep", "oma", _bool, default=False),
        mode=dmode,
    )
    if parser.has_section("system"):
        system = parse_system(parser)
        kwargs.update(
            frame_duration_s=system.frame_duration_s,
            bandwidth_hz=system.bandwidth_hz,
            packet_size_bytes=system.packet_size_bits / 8.0,
            tx_phase_s=system.tx_phase_s,
            noise_psd=system.noise_psd,
            delay_bound_s=system.delay_bound_s,
        )
    if parser.has_section("traffic"):
        kwargs["mean_arrivals_per_frame"] = _get(
            parser, "traffic", "mean_arrivals_per_frame"
        )
    return SweepSpec(**kwargs)
