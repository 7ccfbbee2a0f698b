"""Deterministic random-stream management.

Every stochastic draw in the simulator comes from a substream derived from
(master seed, realization index, link tag).  Substreams are independent of
each other and of evaluation order, so campaigns parallelize without
changing results.
"""

from __future__ import annotations

from enum import IntEnum

import numpy as np


class LinkTag(IntEnum):
    """Identifies which part of a realization a substream feeds."""

    TX_RIS = 0   # transmitter -> surface link
    RIS_RX = 1   # surface -> receiver link
    DIRECT = 2   # transmitter -> receiver link
    RX_FRAME = 3  # receiver orientation draw
    PHASES = 4   # random phase baselines / idle surfaces


def spawn_rng(master_seed: int, realization: int, link_tag: LinkTag | int,
              *extra: int) -> np.random.Generator:
    """Return the deterministic generator for one (realization, link) unit.

    Identical arguments always produce an identical draw sequence; any
    change to the realization index, tag, or extra keys (e.g. the RIS
    index in multi-surface scenes) yields an independent stream.
    """
    key = (int(link_tag), int(realization)) + tuple(int(x) for x in extra)
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=key)
    return np.random.default_rng(seq)
