"""Flow solve and DAG orientation for pruned grid designs.

Every channel has the same cross-section and unit hydraulic resistance, so the
pressure drop along a lattice edge equals its flow velocity.  Unknowns are the
node pressures; inlet stubs carry prescribed velocities and outlet terminals
are pinned to zero pressure.  Channel velocities follow from pressure
differences, the grid is oriented into a DAG by velocity sign, and the DAG is
partitioned into ordered parts (straight runs and join/split nodes).

Node ids: ``("g", row, col)`` grid vertices, ``("in", i)`` / ``("out", j)``
inlet/outlet terminals.  Edge ids: ``("h", r, c)``, ``("v", r, c)`` lattice
channels, ``("si", i)`` / ``("so", j)`` terminal stubs.  Reference orientation
is rightward for horizontal edges and downward for vertical edges and stubs;
velocities are signed against it.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import CycleError, SingularSystemError, UnclassifiableNodeError
from .model import GridDesign

# Fraction of the largest inlet velocity below which a channel counts as
# carrying no flow (solver residual scale).
ZERO_FLOW_FRACTION = 1e-9

NodeId = tuple
EdgeId = tuple


def edge_key_str(edge: EdgeId) -> str:
    return ":".join(str(p) for p in edge)


def node_key_str(node: NodeId) -> str:
    return ":".join(str(p) for p in node)


def design_edges(design: GridDesign) -> dict[EdgeId, tuple[NodeId, NodeId]]:
    """All channels of a design with their reference-oriented endpoints."""
    edges: dict[EdgeId, tuple[NodeId, NodeId]] = {}
    for r, c in design.horizontal_channels:
        edges[("h", r, c)] = (("g", r, c), ("g", r, c + 1))
    for r, c in design.vertical_channels:
        edges[("v", r, c)] = (("g", r, c), ("g", r + 1, c))
    for i, inlet in enumerate(design.inlets):
        edges[("si", i)] = (("in", i), ("g", 0, inlet.col))
    for j, col in enumerate(design.outlets):
        edges[("so", j)] = (("g", design.rows, col), ("out", j))
    return edges


@dataclass(frozen=True)
class FlowSolution:
    """Node pressures (relative units, R=1) and signed channel velocities (mm/s)."""

    pressures: dict[NodeId, float]
    velocities: dict[EdgeId, float]
    max_inlet_velocity: float

    def node_residuals(self, design: GridDesign) -> dict[NodeId, float]:
        """Net outflow at every interior node; zero for a conserved solution."""
        residual: dict[NodeId, float] = {}
        for edge, (tail, head) in design_edges(design).items():
            v = self.velocities[edge]
            residual[tail] = residual.get(tail, 0.0) + v
            residual[head] = residual.get(head, 0.0) - v
        for node in list(residual):
            if node[0] != "g":
                del residual[node]
        return residual


def solve_flow(design: GridDesign) -> FlowSolution:
    """Solve conservation + unit-resistance pressure-drop equations.

    Expects a pruned, validated design.  Raises :class:`SingularSystemError`
    if the linear system cannot be solved reliably (a bug signal for pruned
    connected designs).
    """
    edges = design_edges(design)
    nodes: list[NodeId] = sorted({n for pair in edges.values() for n in pair})
    index = {n: i for i, n in enumerate(nodes)}
    n = len(nodes)

    matrix = np.zeros((n, n))
    rhs = np.zeros(n)
    outlet_rows = {("out", j) for j in range(len(design.outlets))}
    inlet_rows = {("in", i): design.inlets[i] for i in range(len(design.inlets))}

    for node in nodes:
        i = index[node]
        if node in outlet_rows:
            matrix[i, i] = 1.0  # outlet pressure pinned to 0
        elif node in inlet_rows:
            inlet = inlet_rows[node]
            attach = index[("g", 0, inlet.col)]
            matrix[i, i] = 1.0  # stub velocity prescribed: P_in - P_attach = v
            matrix[i, attach] = -1.0
            rhs[i] = inlet.velocity
    for tail, head in edges.values():
        ti, hi = index[tail], index[head]
        if tail not in outlet_rows and tail not in inlet_rows:
            matrix[ti, ti] += 1.0
            matrix[ti, hi] -= 1.0
        if head not in outlet_rows and head not in inlet_rows:
            matrix[hi, hi] += 1.0
            matrix[hi, ti] -= 1.0

    try:
        pressures_vec = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"flow system is singular: {exc}") from exc
    residual = np.abs(matrix @ pressures_vec - rhs).max()
    scale = max(abs(rhs).max(), 1.0)
    if not np.isfinite(pressures_vec).all() or residual > 1e-8 * scale:
        raise SingularSystemError(f"flow system solved with residual {residual:.3e}")

    pressures = {node: float(pressures_vec[index[node]]) for node in nodes}
    velocities = {
        edge: pressures[tail] - pressures[head] for edge, (tail, head) in edges.items()
    }
    vmax = max(inlet.velocity for inlet in design.inlets)
    return FlowSolution(pressures, velocities, vmax)


# ----------------------------------------------------------------------------
# Orientation and node classification
# ----------------------------------------------------------------------------

# Compass slots around a node in clockwise order starting north.
_CLOCKWISE = ("N", "E", "S", "W")


@dataclass(frozen=True)
class DirectedEdge:
    edge: EdgeId
    tail: NodeId
    head: NodeId
    speed: float  # mm/s, positive
    length: float  # mm


@dataclass(frozen=True)
class NodeInfo:
    node: NodeId
    kind: str  # inlet | outlet | straight | join | split | join_split
    inflows: tuple[EdgeId, ...]  # ordered left to right across the outflow profile
    outflows: tuple[EdgeId, ...]  # ordered left to right


@dataclass(frozen=True)
class DirectedGrid:
    """The flow-oriented design: an acyclic planar digraph of live channels."""

    design: GridDesign
    edges: dict[EdgeId, DirectedEdge]
    nodes: dict[NodeId, NodeInfo]
    topo_nodes: tuple[NodeId, ...]


def _direction_at(edge: EdgeId, node: NodeId, design: GridDesign) -> str:
    """Compass direction in which ``edge`` leaves ``node`` geometrically."""
    kind = edge[0]
    if kind == "h":
        _, r, c = edge
        return "E" if node == ("g", r, c) else "W"
    if kind == "v":
        _, r, c = edge
        return "S" if node == ("g", r, c) else "N"
    if kind == "si":
        return "S" if node[0] == "in" else "N"
    # "so"
    return "S" if node[0] == "g" else "N"


def node_position(node: NodeId, design: GridDesign) -> tuple[float, float]:
    """Planar embedding in lattice units; x grows east, y grows north."""
    if node[0] == "g":
        return float(node[2]), -float(node[1])
    if node[0] == "in":
        return float(design.inlets[node[1]].col), 1.0
    return float(design.outlets[node[1]]), -float(design.rows) - 1.0


def orient(design: GridDesign, flow: FlowSolution) -> DirectedGrid:
    """Orient channels by flow sign, drop zero-flow channels, classify nodes.

    Raises :class:`CycleError` / :class:`UnclassifiableNodeError` on outcomes
    the physics forbids (bug signals).
    """
    eps = ZERO_FLOW_FRACTION * flow.max_inlet_velocity
    all_edges = design_edges(design)
    edges: dict[EdgeId, DirectedEdge] = {}
    for edge, (tail, head) in all_edges.items():
        v = flow.velocities[edge]
        if abs(v) <= eps:
            continue
        if v < 0:
            tail, head = head, tail
        edges[edge] = DirectedEdge(edge, tail, head, abs(v), design.channel_length)

    incoming: dict[NodeId, list[EdgeId]] = {}
    outgoing: dict[NodeId, list[EdgeId]] = {}
    for de in edges.values():
        outgoing.setdefault(de.tail, []).append(de.edge)
        incoming.setdefault(de.head, []).append(de.edge)
        incoming.setdefault(de.tail, [])
        outgoing.setdefault(de.head, [])

    nodes: dict[NodeId, NodeInfo] = {}
    for node in incoming:
        n_in = len(incoming[node])
        n_out = len(outgoing[node])
        if node[0] == "in":
            if (n_in, n_out) != (0, 1):
                raise UnclassifiableNodeError(f"inlet terminal {node} has degree ({n_in}, {n_out})")
            kind = "inlet"
        elif node[0] == "out":
            if (n_in, n_out) != (1, 0):
                raise UnclassifiableNodeError(f"outlet terminal {node} has degree ({n_in}, {n_out})")
            kind = "outlet"
        elif (n_in, n_out) == (1, 1):
            kind = "straight"
        elif n_out == 1 and n_in in (2, 3):
            kind = "join"
        elif n_in == 1 and n_out in (2, 3):
            kind = "split"
        elif (n_in, n_out) == (2, 2):
            kind = "join_split"
        else:
            raise UnclassifiableNodeError(f"node {node} has unsupported degree ({n_in}, {n_out})")
        inflows, outflows = _ordered_flows(node, incoming[node], outgoing[node], design, kind)
        nodes[node] = NodeInfo(node, kind, inflows, outflows)

    topo = _topological_nodes(nodes, edges, design)
    return DirectedGrid(design, edges, nodes, topo)


def _ordered_flows(node, inflow_edges, outflow_edges, design, kind):
    """Order a node's inflows and outflows left-to-right across the profile.

    Around a node, inflows are taken clockwise starting just after the outflow
    block, outflows counter-clockwise starting just after the inflow block;
    with the profile axis fixed counter-clockwise to the flow this is exactly
    left-to-right order on the joined/split profile.  Join-split nodes must
    have their two inflows adjacent in the cyclic order (flow circulation is
    impossible), which this ordering requires and checks.
    """
    if len(inflow_edges) <= 1 and len(outflow_edges) <= 1:
        # terminals and straight nodes are trivially ordered
        return tuple(inflow_edges), tuple(outflow_edges)

    by_dir = {}
    for e in inflow_edges:
        by_dir[_direction_at(e, node, design)] = ("in", e)
    for e in outflow_edges:
        d = _direction_at(e, node, design)
        if d in by_dir:
            raise UnclassifiableNodeError(f"node {node} has two live channels in direction {d}")
        by_dir[d] = ("out", e)

    occupied_cw = [d for d in _CLOCKWISE if d in by_dir]
    k = len(occupied_cw)

    def contiguous_block(role: str, order: list[str]) -> list[EdgeId] | None:
        """Edges of ``role`` if they form one cyclic block in ``order``, else None."""
        flags = [by_dir[d][0] == role for d in order]
        count = sum(flags)
        for start in range(k):
            if flags[start] and not flags[(start - 1) % k]:
                block = [order[(start + i) % k] for i in range(count)]
                if all(by_dir[d][0] == role for d in block):
                    return [by_dir[d][1] for d in block]
        return None

    inflows = contiguous_block("in", occupied_cw)
    occupied_ccw = list(reversed(occupied_cw))
    outflows = contiguous_block("out", occupied_ccw)
    if inflows is None or outflows is None:
        raise UnclassifiableNodeError(
            f"{kind} node {node} has interleaved inflows and outflows; flow circulation is impossible"
        )
    return tuple(inflows), tuple(outflows)


def _topological_nodes(nodes, edges, design) -> tuple[NodeId, ...]:
    indegree = {n: len(info.inflows) for n, info in nodes.items()}
    ready = [(_node_sort_key(n, design), n) for n, d in indegree.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        _, node = heapq.heappop(ready)
        order.append(node)
        for e in nodes[node].outflows:
            head = edges[e].head
            indegree[head] -= 1
            if indegree[head] == 0:
                heapq.heappush(ready, (_node_sort_key(head, design), head))
    if len(order) != len(nodes):
        raise CycleError("oriented flow graph contains a cycle")
    return tuple(order)


def _node_sort_key(node: NodeId, design: GridDesign):
    x, y = node_position(node, design)
    return (-y, x)  # row-major: top to bottom, then left to right


# ----------------------------------------------------------------------------
# Stage planning
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class StraightChannel:
    """A maximal run of edges through 1-in/1-out nodes, advanced as one channel."""

    edges: tuple[EdgeId, ...]
    velocity: float
    length: float
    start_node: NodeId
    end_node: NodeId


@dataclass(frozen=True)
class JoinNode:
    node: NodeId
    inflows: tuple[EdgeId, ...]
    outflow: EdgeId


@dataclass(frozen=True)
class SplitNode:
    node: NodeId
    inflow: EdgeId
    outflows: tuple[EdgeId, ...]


@dataclass(frozen=True)
class JoinSplitNode:
    node: NodeId
    inflows: tuple[EdgeId, ...]
    outflows: tuple[EdgeId, ...]


Part = StraightChannel | JoinNode | SplitNode | JoinSplitNode


@dataclass(frozen=True)
class StagePlan:
    """Parts in an order where every part appears after all parts feeding it."""

    parts: tuple[Part, ...]


def plan_stages(dg: DirectedGrid) -> StagePlan:
    """Partition the directed grid into parts and sort them by flow order.

    Deterministic: node processing follows the row-major topological order of
    :func:`orient`, and straight runs start from their source part.
    """
    parts: list[Part] = []
    for node in dg.topo_nodes:
        info = dg.nodes[node]
        if info.kind == "join":
            parts.append(JoinNode(node, info.inflows, info.outflows[0]))
        elif info.kind == "split":
            parts.append(SplitNode(node, info.inflows[0], info.outflows))
        elif info.kind == "join_split":
            parts.append(JoinSplitNode(node, info.inflows, info.outflows))
        if info.kind in ("inlet", "join", "split", "join_split"):
            for out_edge in info.outflows:
                parts.append(_walk_straight(dg, out_edge))
    return StagePlan(tuple(parts))


def _walk_straight(dg: DirectedGrid, first_edge: EdgeId) -> StraightChannel:
    run = [first_edge]
    node = dg.edges[first_edge].head
    while dg.nodes[node].kind == "straight":
        nxt = dg.nodes[node].outflows[0]
        run.append(nxt)
        node = dg.edges[nxt].head
    length = sum(dg.edges[e].length for e in run)
    return StraightChannel(
        edges=tuple(run),
        velocity=dg.edges[first_edge].speed,
        length=length,
        start_node=dg.edges[first_edge].tail,
        end_node=node,
    )


def flow_debug_dump(design: GridDesign, flow: FlowSolution) -> dict:
    """JSON-ready dump of the solved linear system's unknowns."""
    return {
        "pressures": {node_key_str(n): p for n, p in sorted(flow.pressures.items())},
        "velocities": {edge_key_str(e): v for e, v in sorted(flow.velocities.items())},
    }
