"""Wire-format payload builders shared by the CLI and the HTTP service."""

from __future__ import annotations

import json

from .engine import SimulationResult, simulate_full
from .flow import edge_key_str
from .model import GridDesign


def dump_json(payload) -> str:
    """Canonical JSON encoding; both front ends emit identical bytes."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def simulate_payload(
    design: GridDesign, include_profiles: bool
) -> tuple[dict, SimulationResult]:
    """Run a simulation and shape its wire-format response."""
    result = simulate_full(design)
    payload = result.report.as_dict()
    payload["edgeVelocities"] = {
        edge_key_str(e): de.speed for e, de in sorted(result.grid.edges.items())
    }
    if include_profiles:
        payload["edgeProfiles"] = {
            edge_key_str(e): result.exit_profiles[e].as_dict()
            for e in sorted(result.exit_profiles)
        }
    return payload, result
