"""Channel matrix assembly from geometry and cluster draws.

The three matrices of a scene are built from the same primitive: a sum of
outer products of array responses over scattered paths, plus an optional
LOS rank-one term.  The surface's element radiation pattern multiplies the
surface-side leg of each path; transmitter and receiver elements are
isotropic.  Paths leaving behind a surface's aperture get zero gain rather
than raising an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import ValidatedConfig
from .errors import DimensionMismatch
from .geometry import (azimuth_rotation_frame, element_gain_from_cos,
                       local_directions, steering_matrix)
from .propagation import ClusterSet, LinkState, draw_clusters, draw_link_state
from .rng import LinkTag, spawn_rng


@dataclass(frozen=True)
class DeviceView:
    """One terminal or surface as the assembler sees it."""

    position: np.ndarray
    frame: np.ndarray
    elements: np.ndarray            # local element coordinates (n, 3), meters
    gain_exponent: float | None = None  # None = isotropic elements

    @property
    def count(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class Scene:
    """All device views of one realization, sharing one wavelength."""

    wavelength: float
    tx: DeviceView
    rx: DeviceView
    ris: tuple[DeviceView, ...]


@dataclass(frozen=True)
class PhaseVector:
    """Per-element surface phases in [0, 2*pi)."""

    phases: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "phases", np.mod(np.asarray(self.phases, float), 2.0 * np.pi))

    def __len__(self) -> int:
        return len(self.phases)


@dataclass(frozen=True)
class ChannelTriple:
    """The three matrices of a single-surface realization."""

    tx_ris: np.ndarray    # (N, Nt)
    ris_rx: np.ndarray    # (Nr, N)
    direct: np.ndarray    # (Nr, Nt)
    meta: dict = field(default_factory=dict)


def build_scene(vc: ValidatedConfig, rx_position=None,
                rx_frame: np.ndarray | None = None) -> Scene:
    """Device views for one realization; `rx_position`/`rx_frame` override the config."""
    cfg = vc.config
    lam = vc.wavelength
    tx = DeviceView(np.asarray(cfg.tx.position, float), cfg.tx.frame,
                    cfg.tx.element_positions(lam))
    rx = DeviceView(
        np.asarray(cfg.rx.position if rx_position is None else rx_position, float),
        cfg.rx.frame if rx_frame is None else rx_frame,
        cfg.rx.element_positions(lam))
    ris = tuple(DeviceView(np.asarray(r.position, float), r.frame,
                           r.element_positions(lam), r.gain_exponent)
                for r in cfg.ris)
    return Scene(lam, tx, rx, ris)


def _link_matrix(row: DeviceView, col: DeviceView, gain_side: str | None,
                 clusters: ClusterSet, link: LinkState, wavelength: float) -> np.ndarray:
    """Sum of path outer-products a_row * a_col^T with the LOS term added.

    `gain_side` names the device ("row"/"col"/None) whose element pattern
    weights each path; directions are always evaluated from each device
    towards the path point in that device's own frame.
    """
    matrix = np.zeros((row.count, col.count), dtype=complex)

    def pattern(u_row: np.ndarray, u_col: np.ndarray) -> np.ndarray:
        if gain_side is None:
            return np.ones(len(u_row))
        device, u = (row, u_row) if gain_side == "row" else (col, u_col)
        return element_gain_from_cos(u[:, 0], device.gain_exponent)

    if clusters.total_paths:
        u_row, _ = local_directions(row.position, clusters.positions, row.frame)
        u_col, _ = local_directions(col.position, clusters.positions, col.frame)
        weights = clusters.gains * np.sqrt(pattern(u_row, u_col) * clusters.attenuations)
        a_row = steering_matrix(row.elements, u_row, wavelength)
        a_col = steering_matrix(col.elements, u_col, wavelength)
        # normalization keeps total scattered power independent of the path count
        matrix += (a_row * weights) @ a_col.T / np.sqrt(clusters.total_paths)

    if link.los:
        u_row, _ = local_directions(row.position, col.position[None, :], row.frame)
        u_col, _ = local_directions(col.position, row.position[None, :], col.frame)
        a_row = steering_matrix(row.elements, u_row, wavelength)[:, 0]
        a_col = steering_matrix(col.elements, u_col, wavelength)[:, 0]
        amp = np.sqrt(pattern(u_row, u_col)[0] * link.attenuation)
        matrix += amp * np.exp(1j * link.phase) * np.outer(a_row, a_col)

    return matrix


def assemble_link_channel(side: str, clusters: ClusterSet, link: LinkState,
                          scene: Scene, ris_index: int = 0) -> np.ndarray:
    """One surface leg: 'tx-ris' gives the (N, Nt) matrix, 'ris-rx' the (Nr, N) one."""
    surface = scene.ris[ris_index]
    if side == "tx-ris":
        return _link_matrix(surface, scene.tx, "row", clusters, link, scene.wavelength)
    if side == "ris-rx":
        return _link_matrix(scene.rx, surface, "col", clusters, link, scene.wavelength)
    raise ValueError(f"side must be 'tx-ris' or 'ris-rx', got {side!r}")


def assemble_direct_channel(clusters: ClusterSet, link: LinkState,
                            scene: Scene) -> np.ndarray:
    """The (Nr, Nt) terminal-to-terminal matrix; no element pattern applies."""
    return _link_matrix(scene.rx, scene.tx, None, clusters, link, scene.wavelength)


def phase_matrix(phases: PhaseVector | np.ndarray) -> np.ndarray:
    """Diagonal unit-modulus response matrix induced by the phase vector."""
    if isinstance(phases, PhaseVector):
        phases = phases.phases
    return np.diag(np.exp(1j * np.asarray(phases, float)))


def composite_channel(triple: ChannelTriple, phases: PhaseVector | np.ndarray) -> np.ndarray:
    """End-to-end matrix: surface cascade with the given phases plus the direct term."""
    if isinstance(phases, PhaseVector):
        phases = phases.phases
    phases = np.asarray(phases, float)
    n = triple.tx_ris.shape[0]
    if triple.ris_rx.shape[1] != n or len(phases) != n:
        raise DimensionMismatch(
            f"phase vector of length {len(phases)} does not match the {n}-element surface")
    return (triple.ris_rx * np.exp(1j * phases)) @ triple.tx_ris + triple.direct


@dataclass(frozen=True)
class RealizationChannels:
    """All channel matrices of one realization, possibly with several surfaces."""

    tx_ris: tuple[np.ndarray, ...]   # per surface, (N_k, Nt)
    ris_rx: tuple[np.ndarray, ...]   # per surface, (Nr, N_k)
    direct: np.ndarray               # (Nr, Nt)
    realization: int
    los: dict = field(default_factory=dict)
    clusters: dict = field(default_factory=dict)  # ClusterSet per link key

    def triple(self, ris_index: int = 0) -> ChannelTriple:
        return ChannelTriple(self.tx_ris[ris_index], self.ris_rx[ris_index],
                             self.direct, meta={"realization": self.realization,
                                                "los": dict(self.los)})


def composite_multi(channels: RealizationChannels,
                    phase_sets: list[Optional[np.ndarray]]) -> np.ndarray:
    """Sum the cascades of all active surfaces plus the direct term.

    `phase_sets[k] is None` models surface k as absent.  With one surface
    this reduces exactly to `composite_channel`.
    """
    total = channels.direct.astype(complex, copy=True)
    for tx_ris, ris_rx, phases in zip(channels.tx_ris, channels.ris_rx, phase_sets):
        if phases is None:
            continue
        if isinstance(phases, PhaseVector):
            phases = phases.phases
        total += (ris_rx * np.exp(1j * np.asarray(phases, float))) @ tx_ris
    return total


def realize_channels(vc: ValidatedConfig, realization: int,
                     rx_position=None) -> RealizationChannels:
    """Draw one full channel realization from the config's seeded substreams.

    The receiver's random orientation (when enabled) is drawn once and
    shared by every link that arrives at it.  Each surface gets its own
    link substreams so scenes with different surface counts stay paired
    on the surfaces they share.
    """
    cfg = vc.config
    env = cfg.environment
    f_hz = cfg.frequency_hz
    seed = cfg.seed

    rx_frame = None
    if cfg.rx_orientation == "random-azimuth":
        rng = spawn_rng(seed, realization, LinkTag.RX_FRAME)
        rx_frame = azimuth_rotation_frame(rng.uniform(0.0, 2.0 * np.pi))
    scene = build_scene(vc, rx_position=rx_position, rx_frame=rx_frame)

    force = True if cfg.ris_links == "los" else None
    tx_ris, ris_rx, los_meta, cluster_meta = [], [], {}, {}
    for k, surface in enumerate(scene.ris):
        rng_h = spawn_rng(seed, realization, LinkTag.TX_RIS, k)
        d1 = float(np.linalg.norm(surface.position - scene.tx.position))
        link_h = draw_link_state(d1, f_hz, env, rng_h, force_los=force)
        clusters_h = (draw_clusters(scene.tx.position, surface.position, env, f_hz,
                                    rng_h, near_frame=scene.tx.frame)
                      if cfg.scatter_paths else ClusterSet.empty())
        tx_ris.append(assemble_link_channel("tx-ris", clusters_h, link_h, scene, k))

        rng_g = spawn_rng(seed, realization, LinkTag.RIS_RX, k)
        d2 = float(np.linalg.norm(scene.rx.position - surface.position))
        link_g = draw_link_state(d2, f_hz, env, rng_g, force_los=force)
        if not cfg.scatter_paths:
            clusters_g = ClusterSet.empty()
        else:
            clusters_g = draw_clusters(surface.position, scene.rx.position, env, f_hz,
                                       rng_g, near_frame=surface.frame,
                                       geometry_from=clusters_h if cfg.shared_clusters else None)
        ris_rx.append(assemble_link_channel("ris-rx", clusters_g, link_g, scene, k))
        los_meta[f"tx_ris_{k}"] = link_h.los
        los_meta[f"ris_rx_{k}"] = link_g.los
        cluster_meta[f"tx_ris_{k}"] = clusters_h
        cluster_meta[f"ris_rx_{k}"] = clusters_g

    nr, nt = scene.rx.count, scene.tx.count
    if cfg.direct_mode == "blocked" and not cfg.blocked_keeps_scatter:
        direct = np.zeros((nr, nt), dtype=complex)
        los_meta["direct"] = False
    else:
        rng_d = spawn_rng(seed, realization, LinkTag.DIRECT)
        d_direct = float(np.linalg.norm(scene.rx.position - scene.tx.position))
        if cfg.direct_mode == "blocked":
            link_d = LinkState(False, 0.0, 0.0)
        else:
            force_d = True if cfg.direct_mode == "present" else None
            link_d = draw_link_state(d_direct, f_hz, env, rng_d, force_los=force_d)
        clusters_d = (draw_clusters(scene.tx.position, scene.rx.position, env, f_hz,
                                    rng_d, near_frame=scene.tx.frame)
                      if cfg.scatter_paths else ClusterSet.empty())
        direct = assemble_direct_channel(clusters_d, link_d, scene)
        los_meta["direct"] = link_d.los
        cluster_meta["direct"] = clusters_d

    return RealizationChannels(tx_ris=tuple(tx_ris), ris_rx=tuple(ris_rx),
                               direct=direct, realization=realization, los=los_meta,
                               clusters=cluster_meta)
