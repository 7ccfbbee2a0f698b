"""Ready-made scenes: the reference indoor office and street-canyon setups.

Both scenes place the surface so the Tx-RIS and RIS-Rx links are
line-of-sight and block the direct Tx-Rx path, the regime where a
reconfigurable surface is actually useful.
"""

from __future__ import annotations

from .config import ENVIRONMENTS, ArraySpec, RisSpec, SimConfig
from .errors import ConfigError


def scene_preset(name: str) -> SimConfig:
    """Return the named demo scene ('indoor' or 'outdoor')."""
    if name == "indoor":
        return SimConfig(
            environment=ENVIRONMENTS["inh"],
            frequency_hz=28e9,
            tx=ArraySpec("upa", 4, (0.0, 25.0, 2.0)),
            rx=ArraySpec("upa", 4, (45.0, 45.0, 1.0)),
            ris=(RisSpec(64, (40.0, 50.0, 2.0), plane="xz"),),
            pt_dbm=(40.0,),
            direct_mode="blocked",
            ris_links="los",
        )
    if name == "outdoor":
        return SimConfig(
            environment=ENVIRONMENTS["umi"],
            frequency_hz=28e9,
            tx=ArraySpec("ula", 4, (0.0, 25.0, 20.0)),
            rx=ArraySpec("ula", 4, (50.0, 50.0, 1.0)),
            ris=(RisSpec(64, (40.0, 60.0, 10.0), plane="xz"),),
            pt_dbm=(40.0,),
            direct_mode="blocked",
            ris_links="los",
        )
    raise ConfigError(f"unknown scene preset {name!r}; available: indoor, outdoor")


SCENE_PRESETS = ("indoor", "outdoor")
