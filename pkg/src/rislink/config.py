"""Scenario configuration: domain types, presets, validation, and file I/O.

All external inputs (config files, CLI flags) are in engineering units
(GHz, dBm, meters, wavelengths); everything downstream computes in SI +
linear watts.  `validate_config` is the single place where derived
quantities are produced and invariants enforced.

Config files are flat ``key = value`` text, one scenario per file.  Lists
use commas, multi-RIS entries are separated by ``;``::

    environment = inh
    frequency_ghz = 28
    tx_position = 0, 25, 2
    rx_position = 45, 45, 1
    ris_position = 40, 50, 2 ; 60, 30, 2
    ris_plane = xz ; yz
    n_elements = 64
    nt = 4
    nr = 4
    pt_dbm = 20, 30, 40
    realizations = 500
    seed = 7

See the README for the full key reference.
"""

from __future__ import annotations

import dataclasses
import hashlib
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (ConfigError, EmptySweep, NearFieldViolation, NearFieldWarning,
                     NonPositiveCount, UnknownEnvironment)
from .geometry import GLOBAL_FRAME, frame_from_plane

SPEED_OF_LIGHT = 299792458.0


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts) + 30.0


def near_square_grid(count: int) -> tuple[int, int]:
    """Factor `count` into the most square (rows, cols) grid, rows <= cols."""
    rows = 1
    for r in range(int(math.isqrt(count)), 0, -1):
        if count % r == 0:
            rows = r
            break
    return rows, count // rows


@lru_cache(maxsize=None)
def _array_elements(grid_shape: tuple[int, int], spacing_m: float,
                    centered: bool) -> np.ndarray:
    """Local coordinates of a planar element grid (cached; treat as read-only)."""
    rows, cols = grid_shape
    r, c = np.divmod(np.arange(rows * cols), cols)
    if centered:
        horiz = (c - (cols - 1) / 2.0) * spacing_m
        vert = ((rows - 1) / 2.0 - r) * spacing_m
    else:
        horiz = c * spacing_m
        vert = r * spacing_m
    out = np.column_stack([np.zeros(rows * cols), horiz, vert])
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class PathLossTable:
    """Coefficients of PL[dB] = A + B*log10(d[m]) + C*log10(f[GHz]) + X_sigma."""

    intercept_db: float
    distance_coeff_db: float
    frequency_coeff_db: float
    shadow_sigma_db: float


@dataclass(frozen=True)
class Environment:
    """Propagation environment preset; every field is user-overridable."""

    name: str
    cluster_intensity: float                 # Poisson mean of the cluster count
    pl_los: PathLossTable
    pl_nlos: PathLossTable
    los_model: str = "inh"                   # inh | umi | always | never
    scatterers_min: int = 1
    scatterers_max: int = 30
    cluster_azimuth_deg: float = 90.0        # half-width of cluster departure azimuth
    cluster_elevation_deg: float = 45.0      # half-width of cluster departure elevation
    scatter_spread_deg: float = 5.0          # half-width of per-scatterer angle offset
    footprint: tuple[float, float] | None = None  # room extent (x, y) for coverage grids


_FSPL_INTERCEPT = 20.0 * math.log10(4.0 * math.pi * 1e9 / SPEED_OF_LIGHT)

ENVIRONMENTS: dict[str, Environment] = {
    "inh": Environment(
        name="inh",
        cluster_intensity=1.8,
        pl_los=PathLossTable(32.4, 17.3, 20.0, 3.0),
        pl_nlos=PathLossTable(17.3, 38.3, 24.9, 8.03),
        los_model="inh",
        footprint=(75.0, 50.0),
    ),
    "umi": Environment(
        name="umi",
        cluster_intensity=1.9,
        pl_los=PathLossTable(32.4, 21.0, 20.0, 4.0),
        pl_nlos=PathLossTable(22.4, 35.3, 21.3, 7.82),
        los_model="umi",
    ),
    # Free-space reference: exact Friis attenuation, no shadowing, LOS certain.
    "freespace": Environment(
        name="freespace",
        cluster_intensity=1.8,
        pl_los=PathLossTable(_FSPL_INTERCEPT, 20.0, 20.0, 0.0),
        pl_nlos=PathLossTable(_FSPL_INTERCEPT, 20.0, 20.0, 0.0),
        los_model="always",
    ),
}


@dataclass(frozen=True)
class ArraySpec:
    """Tx or Rx antenna array: layout, element count, placement, orientation."""

    layout: str                       # "ula" | "upa"
    count: int
    position: tuple[float, float, float]
    spacing_wl: float = 0.5
    orientation: str = "global"       # global | xz+ | xz- | yz+ | yz-

    @property
    def grid_shape(self) -> tuple[int, int]:
        if self.layout == "ula":
            return (1, self.count)
        return near_square_grid(self.count)

    @property
    def frame(self) -> np.ndarray:
        if self.orientation == "global":
            return GLOBAL_FRAME
        return frame_from_plane(self.orientation[:2], +1 if self.orientation[2] == "+" else -1)

    def element_positions(self, wavelength: float) -> np.ndarray:
        """Local element coordinates (n, 3); element 0 is the phase reference."""
        return _array_elements(self.grid_shape, self.spacing_wl * wavelength, False)


@dataclass(frozen=True)
class RisSpec:
    """One reflecting surface: element grid, mounting plane, radiation exponent."""

    count: int
    position: tuple[float, float, float]
    plane: str = "xz"                 # mounting plane: xz | yz
    facing: int | None = None         # +1/-1 along the plane normal; None = towards Tx
    gain_exponent: float = 0.285      # q of the cos^(2q) element pattern
    spacing_wl: float = 0.5
    shape: tuple[int, int] | None = None  # explicit (rows, cols); None = near-square

    @property
    def grid_shape(self) -> tuple[int, int]:
        return self.shape if self.shape is not None else near_square_grid(self.count)

    @property
    def frame(self) -> np.ndarray:
        facing = self.facing if self.facing is not None else 1
        return frame_from_plane(self.plane, facing)

    def element_positions(self, wavelength: float) -> np.ndarray:
        """Local element coordinates (n, 3), row-major over the grid.

        Rows run down the vertical in-plane axis, columns along the
        horizontal one; the grid is centered on the surface position.
        """
        return _array_elements(self.grid_shape, self.spacing_wl * wavelength, True)

    def aperture_diagonal(self, wavelength: float) -> float:
        rows, cols = self.grid_shape
        s = self.spacing_wl * wavelength
        return math.hypot((rows - 1) * s, (cols - 1) * s)


@dataclass(frozen=True)
class SimConfig:
    """Full scenario description; immutable after construction."""

    environment: Environment
    frequency_hz: float
    tx: ArraySpec
    rx: ArraySpec
    ris: tuple[RisSpec, ...]
    pt_dbm: tuple[float, ...] = (40.0,)
    noise_dbm: float = -100.0
    realizations: int = 500
    seed: int = 1
    direct_mode: str = "auto"            # auto | blocked | present
    blocked_keeps_scatter: bool = False  # keep D's scattered paths when blocked
    ris_links: str = "auto"              # auto | los (force Tx-RIS / RIS-Rx LOS)
    shared_clusters: bool = False        # RIS-Rx link reuses Tx-RIS cluster geometry
    scatter_paths: bool = True           # disable for pure-LOS studies
    rx_orientation: str = "random-azimuth"  # random-azimuth | fixed
    algorithm: str = "pinv"              # pinv | siso | random | zero
    phase_bits: int | None = None        # quantize phases to 2**bits levels
    idle_ris: str = "absent"             # absent | random (non-selected surfaces)
    strict_near_field: bool = False


@dataclass(frozen=True)
class ValidatedConfig:
    """A `SimConfig` with invariants checked and derived quantities attached."""

    config: SimConfig
    wavelength: float
    pt_watts: tuple[float, ...]
    noise_watts: float
    config_hash: str


_DIRECT_MODES = ("auto", "blocked", "present")
_RIS_LINK_MODES = ("auto", "los")
_RX_ORIENTATIONS = ("random-azimuth", "fixed")
_ALGORITHMS = ("pinv", "siso", "random", "zero")
_IDLE_MODES = ("absent", "random")
_LOS_MODELS = ("inh", "umi", "always", "never")


def _check_point(name: str, p: tuple[float, float, float]) -> None:
    if len(p) != 3 or not all(math.isfinite(v) for v in p):
        raise ConfigError(f"{name} must be three finite coordinates, got {p!r}")
    if p[2] < 0:
        raise ConfigError(f"{name} must be above the ground plane (z >= 0), got z={p[2]}")


def _check_environment(env: Environment) -> None:
    if env.cluster_intensity <= 0:
        raise ConfigError("cluster_intensity must be > 0")
    if env.scatterers_min < 1 or env.scatterers_max < env.scatterers_min:
        raise ConfigError("scatterer count range must satisfy 1 <= min <= max")
    if env.los_model not in _LOS_MODELS:
        raise UnknownEnvironment(f"unknown los_model {env.los_model!r}")
    for tag, table in (("pl_los", env.pl_los), ("pl_nlos", env.pl_nlos)):
        if table.shadow_sigma_db < 0:
            raise ConfigError(f"{tag}: shadow sigma must be >= 0")
        if table.distance_coeff_db <= 0:
            raise ConfigError(f"{tag}: distance coefficient must be > 0")


def _resolve_facing(ris: RisSpec, tx_position: tuple[float, float, float]) -> RisSpec:
    if ris.facing is not None:
        return ris
    axis = 1 if ris.plane == "xz" else 0
    delta = tx_position[axis] - ris.position[axis]
    return dataclasses.replace(ris, facing=-1 if delta < 0 else 1)


def validate_config(cfg: SimConfig | ValidatedConfig) -> ValidatedConfig:
    """Check all invariants and return the config with derived quantities.

    Re-validating a ValidatedConfig is idempotent.  Raises subclasses of
    ConfigError on violations; near-field geometry warns unless
    `strict_near_field` is set.
    """
    if isinstance(cfg, ValidatedConfig):
        cfg = cfg.config
    if not isinstance(cfg.environment, Environment):
        raise UnknownEnvironment(f"environment must be an Environment, got {cfg.environment!r}")
    _check_environment(cfg.environment)

    if cfg.frequency_hz <= 0:
        raise ConfigError("frequency must be positive")
    if cfg.realizations < 1:
        raise NonPositiveCount("realizations must be >= 1")
    if len(cfg.pt_dbm) == 0:
        raise EmptySweep("pt_dbm sweep list is empty")

    for name, spec in (("tx", cfg.tx), ("rx", cfg.rx)):
        if spec.count < 1:
            raise NonPositiveCount(f"{name} antenna count must be >= 1")
        if spec.spacing_wl <= 0:
            raise ConfigError(f"{name} element spacing must be > 0")
        if spec.layout not in ("ula", "upa"):
            raise ConfigError(f"{name} layout must be 'ula' or 'upa', got {spec.layout!r}")
        if spec.orientation != "global" and (len(spec.orientation) != 3
                                             or spec.orientation[:2] not in ("xz", "yz")
                                             or spec.orientation[2] not in "+-"):
            raise ConfigError(f"{name} orientation {spec.orientation!r} not recognized")
        _check_point(f"{name} position", spec.position)

    if len(cfg.ris) == 0 and cfg.direct_mode == "blocked":
        raise ConfigError("a scene with no RIS cannot also block the direct path")

    for mode, allowed, key in ((cfg.direct_mode, _DIRECT_MODES, "direct_path"),
                               (cfg.ris_links, _RIS_LINK_MODES, "ris_links"),
                               (cfg.rx_orientation, _RX_ORIENTATIONS, "rx_orientation"),
                               (cfg.algorithm, _ALGORITHMS, "algorithm"),
                               (cfg.idle_ris, _IDLE_MODES, "idle_ris")):
        if mode not in allowed:
            raise ConfigError(f"{key} must be one of {allowed}, got {mode!r}")
    if cfg.phase_bits is not None and cfg.phase_bits < 1:
        raise ConfigError("phase_bits must be >= 1 when set")

    wavelength = SPEED_OF_LIGHT / cfg.frequency_hz

    resolved = []
    for i, ris in enumerate(cfg.ris):
        if ris.count < 1:
            raise NonPositiveCount(f"ris[{i}] element count must be >= 1")
        if ris.spacing_wl <= 0 or ris.gain_exponent < 0:
            raise ConfigError(f"ris[{i}] needs spacing > 0 and gain exponent >= 0")
        if ris.plane not in ("xz", "yz"):
            raise ConfigError(f"ris[{i}] mounting plane must be 'xz' or 'yz'")
        if ris.shape is not None and ris.shape[0] * ris.shape[1] != ris.count:
            raise ConfigError(f"ris[{i}] grid shape {ris.shape} does not hold {ris.count} elements")
        _check_point(f"ris[{i}] position", ris.position)
        ris = _resolve_facing(ris, cfg.tx.position)
        resolved.append(ris)

        fraunhofer = 2.0 * ris.aperture_diagonal(wavelength) ** 2 / wavelength
        for term, pos in (("tx", cfg.tx.position), ("rx", cfg.rx.position)):
            dist = math.dist(pos, ris.position)
            if dist < fraunhofer:
                msg = (f"{term}-ris[{i}] distance {dist:.2f} m is inside the Fraunhofer "
                       f"distance {fraunhofer:.2f} m; the far-field model does not apply")
                if cfg.strict_near_field:
                    raise NearFieldViolation(msg)
                warnings.warn(msg, NearFieldWarning, stacklevel=2)

    cfg = dataclasses.replace(cfg, ris=tuple(resolved))
    return ValidatedConfig(
        config=cfg,
        wavelength=wavelength,
        pt_watts=tuple(dbm_to_watts(p) for p in cfg.pt_dbm),
        noise_watts=dbm_to_watts(cfg.noise_dbm),
        config_hash=config_hash(cfg),
    )


# ---------------------------------------------------------------------------
# Config file parsing / serialization
# ---------------------------------------------------------------------------

_KNOWN_KEYS = {
    "environment", "frequency_ghz", "frequency_hz",
    "tx_position", "rx_position", "tx_array", "rx_array", "nt", "nr",
    "element_spacing",
    "ris_position", "ris_plane", "ris_facing", "n_elements", "ris_shape",
    "ris_spacing", "ris_gain_exponent",
    "pt_dbm", "noise_dbm", "realizations", "seed",
    "direct_path", "blocked_keeps_scatter", "ris_links", "shared_clusters",
    "scatter_paths", "rx_orientation", "algorithm", "phase_bits", "idle_ris",
    "strict_near_field",
    "cluster_intensity", "scatterers_min", "scatterers_max", "los_model",
    "pl_los", "pl_nlos", "cluster_azimuth_deg", "cluster_elevation_deg",
    "scatter_spread_deg", "footprint",
}


def _parse_scalar(text: str):
    text = text.strip()
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    if low == "none":
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _parse_bool(text: str, key: str) -> bool:
    value = _parse_scalar(text)
    if not isinstance(value, bool):
        raise ConfigError(f"{key} must be true or false, got {text!r}")
    return value


def _parse_list(text: str) -> list:
    return [_parse_scalar(part) for part in text.split(",")]


def _parse_point(text: str, key: str) -> tuple[float, float, float]:
    vals = _parse_list(text)
    if len(vals) != 3 or not all(isinstance(v, (int, float)) for v in vals):
        raise ConfigError(f"{key} must be 'x, y, z', got {text!r}")
    return tuple(float(v) for v in vals)


def parse_config_text(text: str) -> SimConfig:
    """Parse the flat key = value scenario format into a SimConfig."""
    kv: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip().lower().replace("-", "_")
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        kv[key] = value.strip()
    return config_from_mapping(kv)


def config_from_mapping(kv: dict[str, str]) -> SimConfig:
    """Build a SimConfig from raw string key/values (file or CLI overrides)."""
    kv = dict(kv)

    def pop(key: str, default=None):
        return kv.pop(key, default)

    env_name = str(pop("environment", "inh")).lower()
    if env_name not in ENVIRONMENTS:
        raise UnknownEnvironment(
            f"unknown environment {env_name!r}; available: {sorted(ENVIRONMENTS)}")
    env = ENVIRONMENTS[env_name]

    env_over = {}
    for key in ("cluster_intensity", "scatterers_min", "scatterers_max",
                "cluster_azimuth_deg", "cluster_elevation_deg", "scatter_spread_deg"):
        if (raw := pop(key)) is not None:
            env_over[key] = _parse_scalar(raw)
    if (raw := pop("los_model")) is not None:
        env_over["los_model"] = str(raw).lower()
    for key in ("pl_los", "pl_nlos"):
        if (raw := pop(key)) is not None:
            vals = _parse_list(raw)
            if len(vals) != 4:
                raise ConfigError(f"{key} must be 'A, B, C_f, sigma', got {raw!r}")
            env_over[key] = PathLossTable(*(float(v) for v in vals))
    if (raw := pop("footprint")) is not None:
        if raw.strip().lower() == "none":
            env_over["footprint"] = None
        else:
            vals = _parse_list(raw)
            if len(vals) != 2:
                raise ConfigError(f"footprint must be 'x_extent, y_extent', got {raw!r}")
            env_over["footprint"] = (float(vals[0]), float(vals[1]))
    if env_over:
        env = dataclasses.replace(env, **env_over)

    if (raw := pop("frequency_hz")) is not None:
        frequency = float(_parse_scalar(raw))
    else:
        frequency = float(_parse_scalar(pop("frequency_ghz", "28"))) * 1e9

    spacing = float(_parse_scalar(pop("element_spacing", "0.5")))
    tx = ArraySpec(layout=str(pop("tx_array", "upa")).lower(),
                   count=int(_parse_scalar(pop("nt", "4"))),
                   position=_parse_point(pop("tx_position", "0, 25, 2"), "tx_position"),
                   spacing_wl=spacing)
    rx = ArraySpec(layout=str(pop("rx_array", "upa")).lower(),
                   count=int(_parse_scalar(pop("nr", "4"))),
                   position=_parse_point(pop("rx_position", "45, 45, 1"), "rx_position"),
                   spacing_wl=spacing)

    raw_ris = str(pop("ris_position", "40, 50, 2"))
    if raw_ris.strip().lower() == "none":
        raw_ris = ""
    ris_positions = [p.strip() for p in raw_ris.split(";") if p.strip()]

    def per_ris(key: str, default: str) -> list[str]:
        parts = [p.strip() for p in str(pop(key, default)).split(";") if p.strip()]
        if len(parts) == 1:
            parts = parts * len(ris_positions)
        if len(parts) != len(ris_positions):
            raise ConfigError(f"{key} lists {len(parts)} entries for {len(ris_positions)} surfaces")
        return parts

    planes = per_ris("ris_plane", "xz")
    facings = per_ris("ris_facing", "auto")
    counts = per_ris("n_elements", "64")
    shapes = per_ris("ris_shape", "auto")
    ris_spacing = float(_parse_scalar(pop("ris_spacing", repr(spacing))))
    q = float(_parse_scalar(pop("ris_gain_exponent", "0.285")))
    ris = []
    for pos, plane, facing, count, shape in zip(ris_positions, planes, facings, counts, shapes):
        facing_val = None if facing.lower() == "auto" else int(_parse_scalar(facing))
        if facing_val not in (None, 1, -1):
            raise ConfigError(f"ris_facing must be auto, 1 or -1, got {facing!r}")
        shape_val = None
        if shape.lower() != "auto":
            dims = _parse_list(shape.replace("x", ","))
            if len(dims) != 2:
                raise ConfigError(f"ris_shape must be 'rows x cols' or auto, got {shape!r}")
            shape_val = (int(dims[0]), int(dims[1]))
        ris.append(RisSpec(count=int(_parse_scalar(count)),
                           position=_parse_point(pos, "ris_position"),
                           plane=plane.lower(), facing=facing_val,
                           gain_exponent=q, spacing_wl=ris_spacing, shape=shape_val))

    raw_pt = pop("pt_dbm", "40")
    pt = tuple(float(v) for v in _parse_list(raw_pt))
    bits_raw = _parse_scalar(pop("phase_bits", "none"))

    cfg = SimConfig(
        environment=env,
        frequency_hz=frequency,
        tx=tx, rx=rx, ris=tuple(ris),
        pt_dbm=pt,
        noise_dbm=float(_parse_scalar(pop("noise_dbm", "-100"))),
        realizations=int(_parse_scalar(pop("realizations", "500"))),
        seed=int(_parse_scalar(pop("seed", "1"))),
        direct_mode=str(pop("direct_path", "auto")).lower(),
        blocked_keeps_scatter=_parse_bool(pop("blocked_keeps_scatter", "false"),
                                          "blocked_keeps_scatter"),
        ris_links=str(pop("ris_links", "auto")).lower(),
        shared_clusters=_parse_bool(pop("shared_clusters", "false"), "shared_clusters"),
        scatter_paths=_parse_bool(pop("scatter_paths", "true"), "scatter_paths"),
        rx_orientation=str(pop("rx_orientation", "random-azimuth")).lower(),
        algorithm=str(pop("algorithm", "pinv")).lower(),
        phase_bits=None if bits_raw is None else int(bits_raw),
        idle_ris=str(pop("idle_ris", "absent")).lower(),
        strict_near_field=_parse_bool(pop("strict_near_field", "false"),
                                      "strict_near_field"),
    )
    if kv:
        raise ConfigError(f"unrecognized keys: {sorted(kv)}")
    return cfg


def load_config(path) -> SimConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if value is None:
        return "none"
    return str(value)


def _fmt_list(values) -> str:
    return ", ".join(_fmt(v) for v in values)


def serialize_config(cfg: SimConfig) -> str:
    """Canonical text form of a config; parsing it back reproduces `cfg`."""
    env = cfg.environment
    lines = [
        f"environment = {env.name}",
        f"cluster_intensity = {_fmt(env.cluster_intensity)}",
        f"scatterers_min = {env.scatterers_min}",
        f"scatterers_max = {env.scatterers_max}",
        f"los_model = {env.los_model}",
        f"pl_los = {_fmt_list(dataclasses.astuple(env.pl_los))}",
        f"pl_nlos = {_fmt_list(dataclasses.astuple(env.pl_nlos))}",
        f"cluster_azimuth_deg = {_fmt(env.cluster_azimuth_deg)}",
        f"cluster_elevation_deg = {_fmt(env.cluster_elevation_deg)}",
        f"scatter_spread_deg = {_fmt(env.scatter_spread_deg)}",
        f"frequency_hz = {_fmt(cfg.frequency_hz)}",
        f"tx_position = {_fmt_list(cfg.tx.position)}",
        f"rx_position = {_fmt_list(cfg.rx.position)}",
        f"tx_array = {cfg.tx.layout}",
        f"rx_array = {cfg.rx.layout}",
        f"nt = {cfg.tx.count}",
        f"nr = {cfg.rx.count}",
        f"element_spacing = {_fmt(cfg.tx.spacing_wl)}",
        f"ris_position = {' ; '.join(_fmt_list(r.position) for r in cfg.ris)}",
        f"ris_plane = {' ; '.join(r.plane for r in cfg.ris)}",
        f"ris_facing = {' ; '.join('auto' if r.facing is None else _fmt(r.facing) for r in cfg.ris)}",
        f"n_elements = {' ; '.join(str(r.count) for r in cfg.ris)}",
        f"ris_shape = {' ; '.join('auto' if r.shape is None else f'{r.shape[0]} x {r.shape[1]}' for r in cfg.ris)}",
        f"ris_spacing = {_fmt(cfg.ris[0].spacing_wl if cfg.ris else 0.5)}",
        f"ris_gain_exponent = {_fmt(cfg.ris[0].gain_exponent if cfg.ris else 0.285)}",
        f"pt_dbm = {_fmt_list(cfg.pt_dbm)}",
        f"noise_dbm = {_fmt(cfg.noise_dbm)}",
        f"realizations = {cfg.realizations}",
        f"seed = {cfg.seed}",
        f"direct_path = {cfg.direct_mode}",
        f"blocked_keeps_scatter = {_fmt(cfg.blocked_keeps_scatter)}",
        f"ris_links = {cfg.ris_links}",
        f"shared_clusters = {_fmt(cfg.shared_clusters)}",
        f"scatter_paths = {_fmt(cfg.scatter_paths)}",
        f"rx_orientation = {cfg.rx_orientation}",
        f"algorithm = {cfg.algorithm}",
        f"phase_bits = {_fmt(cfg.phase_bits)}",
        f"idle_ris = {cfg.idle_ris}",
        f"strict_near_field = {_fmt(cfg.strict_near_field)}",
    ]
    if env.footprint is not None:
        lines.insert(10, f"footprint = {_fmt_list(env.footprint)}")
    return "\n".join(lines) + "\n"


def config_hash(cfg: SimConfig) -> str:
    """Stable hash of the full scenario; changes iff any config field changes."""
    return hashlib.sha256(serialize_config(cfg).encode("utf-8")).hexdigest()[:16]
