"""End-to-end simulation: prune, validate, solve, orient, plan, propagate.

Propagation walks the stage plan in order.  Straight runs advance their entry
profile edge by edge (recording a profile at every lattice edge boundary for
tracing and monotonicity checks), joins merge the exit profiles of their
inflows, splits slice them; outlet concentrations are the areas under the
final stub profiles divided by the channel width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidDesignError
from .flow import (
    DirectedGrid,
    EdgeId,
    FlowSolution,
    JoinNode,
    JoinSplitNode,
    SplitNode,
    StagePlan,
    StraightChannel,
    orient,
    plan_stages,
    solve_flow,
)
from .model import GridDesign, prune_dead_ends, validate
from .profiles import SPProfile, diffuse, join_profiles, join_split, split_profile


@dataclass(frozen=True)
class OutletResult:
    """Concentration and flow velocity delivered at one outlet.

    An outlet that receives no flow reports velocity 0 and concentration NaN.
    """

    concentration: float
    velocity: float


@dataclass(frozen=True)
class OutletReport:
    outlets: tuple[OutletResult, ...]

    def concentrations(self) -> tuple[float, ...]:
        return tuple(o.concentration for o in self.outlets)

    def velocities(self) -> tuple[float, ...]:
        return tuple(o.velocity for o in self.outlets)

    def as_dict(self) -> dict:
        return {
            "outlets": [
                {
                    "concentration": None if math.isnan(o.concentration) else o.concentration,
                    "velocity": o.velocity,
                }
                for o in self.outlets
            ]
        }


@dataclass(frozen=True)
class SimulationResult:
    """Full pipeline output for tracing, debugging, and verification."""

    design: GridDesign  # pruned
    flow: FlowSolution
    grid: DirectedGrid
    plan: StagePlan
    entry_profiles: dict[EdgeId, SPProfile]
    exit_profiles: dict[EdgeId, SPProfile]
    report: OutletReport

    def edge_profiles(self) -> dict[EdgeId, tuple[SPProfile, SPProfile]]:
        return {
            e: (self.entry_profiles[e], self.exit_profiles[e]) for e in self.exit_profiles
        }


def prepare_design(design: GridDesign) -> GridDesign:
    """Prune dead ends and insist the result is simulation-ready."""
    pruned = prune_dead_ends(design)
    report = validate(pruned, assume_pruned=True)
    if report.errors:
        raise InvalidDesignError(report)
    return pruned


def simulate_full(design: GridDesign) -> SimulationResult:
    pruned = prepare_design(design)
    flow = solve_flow(pruned)
    dg = orient(pruned, flow)
    plan = plan_stages(dg)

    width = pruned.channel_width
    diffusivity = pruned.fluid.diffusion_coefficient
    entry: dict[EdgeId, SPProfile] = {}
    exit_: dict[EdgeId, SPProfile] = {}

    for i, inlet in enumerate(pruned.inlets):
        stub = ("si", i)
        if stub in dg.edges:
            entry[stub] = SPProfile.uniform(inlet.concentration, width)

    for part in plan.parts:
        if isinstance(part, StraightChannel):
            profile = entry[part.edges[0]]
            last = len(part.edges) - 1
            for k, edge in enumerate(part.edges):
                length = dg.edges[edge].length
                if k == last:
                    length += 0.5 * width  # node-mixing correction, once per run
                profile_out = diffuse(profile, length / part.velocity, diffusivity)
                entry.setdefault(edge, profile)
                exit_[edge] = profile_out
                profile = profile_out
                if k < last:
                    entry[part.edges[k + 1]] = profile
        elif isinstance(part, JoinNode):
            inflows = [(exit_[e], dg.edges[e].speed) for e in part.inflows]
            entry[part.outflow] = join_profiles(inflows, width)
        elif isinstance(part, SplitNode):
            speeds = [dg.edges[e].speed for e in part.outflows]
            for edge, piece in zip(part.outflows, split_profile(exit_[part.inflow], speeds)):
                entry[edge] = piece
        else:  # JoinSplitNode
            inflows = [(exit_[e], dg.edges[e].speed) for e in part.inflows]
            speeds = [dg.edges[e].speed for e in part.outflows]
            for edge, piece in zip(part.outflows, join_split(inflows, speeds)):
                entry[edge] = piece

    results = []
    for j in range(len(pruned.outlets)):
        stub = ("so", j)
        if stub in dg.edges:
            results.append(OutletResult(exit_[stub].mean(), dg.edges[stub].speed))
        else:
            results.append(OutletResult(math.nan, 0.0))
    report = OutletReport(tuple(results))
    return SimulationResult(pruned, flow, dg, plan, entry, exit_, report)


def simulate(design: GridDesign) -> OutletReport:
    """Predict outlet concentrations and velocities for a design."""
    return simulate_full(design).report
