"""Planar dual of the oriented grid and the induced channel partial order.

The oriented design is drawn in the plane and enclosed in a rectangle slightly
wider than the grid, with inlet terminals on the rectangle's top edge and
outlet terminals on its bottom edge.  The drawing partitions the rectangle
into regions; each region becomes a dual vertex, and each live channel
contributes one dual edge crossing it from the region on its right (looking
along the flow) to the region on its left.  The resulting dual digraph is
acyclic with a unique source (the region left of the grid) and a unique sink
(the region right of it).

Two channels are *related* when some inlet-to-outlet path uses both;
otherwise exactly one of them *dually precedes* the other: its dual edge
appears first on a source-to-sink dual path.  Along this order, concentration
values can only decrease — the monotonicity checker turns that guarantee into
a machine-checkable property of simulation output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DualOrderError
from .flow import DirectedGrid, EdgeId, NodeId, edge_key_str, node_position
from .profiles import SPProfile

MONOTONICITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DualGraph:
    """Regions of the enclosed drawing and the dual edge per live channel."""

    face_count: int
    source: int  # region left of the grid
    sink: int  # region right of the grid
    # channel -> (tail region, head region), directed right-of-flow -> left-of-flow
    dual_edges: dict[EdgeId, tuple[int, int]]
    # region -> cyclic boundary walk (node ids), for debugging/rendering
    face_walks: tuple[tuple[NodeId, ...], ...]


def build_dual(dg: DirectedGrid) -> DualGraph:
    """Enumerate regions by face tracing and attach one dual edge per channel."""
    design = dg.design
    rows, cols = design.rows, design.cols

    corners = {
        "NW": (-0.5, 1.0),
        "NE": (cols + 0.5, 1.0),
        "SE": (cols + 0.5, -float(rows) - 1.0),
        "SW": (-0.5, -float(rows) - 1.0),
    }
    positions: dict[NodeId, tuple[float, float]] = {}
    adjacency: dict[NodeId, list[NodeId]] = {}

    def add_node(node: NodeId, pos: tuple[float, float]):
        positions.setdefault(node, pos)
        adjacency.setdefault(node, [])

    def add_segment(u: NodeId, v: NodeId):
        adjacency[u].append(v)
        adjacency[v].append(u)

    for node in dg.nodes:
        add_node(node, node_position(node, design))
    for name in corners:
        add_node(("corner", name), corners[name])

    for de in dg.edges.values():
        add_segment(de.tail, de.head)

    # boundary chains: top (west->east), right (north->south), bottom, left
    top = [("corner", "NW")] + sorted(
        (n for n in dg.nodes if n[0] == "in"), key=lambda n: positions[n][0]
    ) + [("corner", "NE")]
    bottom = [("corner", "SW")] + sorted(
        (n for n in dg.nodes if n[0] == "out"), key=lambda n: positions[n][0]
    ) + [("corner", "SE")]
    for chain in (top, bottom):
        for u, v in zip(chain, chain[1:]):
            add_segment(u, v)
    add_segment(("corner", "NE"), ("corner", "SE"))
    add_segment(("corner", "NW"), ("corner", "SW"))

    # rotation system: neighbors in counter-clockwise order around each node
    order: dict[NodeId, list[NodeId]] = {}
    for node, nbrs in adjacency.items():
        x0, y0 = positions[node]
        order[node] = sorted(
            nbrs, key=lambda m: math.atan2(positions[m][1] - y0, positions[m][0] - x0)
        )
    rank = {
        node: {m: i for i, m in enumerate(nbrs)} for node, nbrs in order.items()
    }

    # trace left-face orbits: the successor of half-edge (u, v) leaves v along
    # the neighbor just before u in counter-clockwise order
    face_of: dict[tuple[NodeId, NodeId], int] = {}
    walks: list[tuple[NodeId, ...]] = []
    areas: list[float] = []
    for start_u, nbrs in adjacency.items():
        for start_v in nbrs:
            if (start_u, start_v) in face_of:
                continue
            face_id = len(walks)
            walk = []
            u, v = start_u, start_v
            while (u, v) not in face_of:
                face_of[(u, v)] = face_id
                walk.append(u)
                nxt = order[v][(rank[v][u] - 1) % len(order[v])]
                u, v = v, nxt
            walks.append(tuple(walk))
            area = 0.0
            for a, b in zip(walk, walk[1:] + walk[:1]):
                xa, ya = positions[a]
                xb, yb = positions[b]
                area += xa * yb - xb * ya
            areas.append(0.5 * area)

    outer = min(range(len(walks)), key=lambda i: areas[i])
    source = face_of[(("corner", "NW"), ("corner", "SW"))]
    sink = face_of[(("corner", "SE"), ("corner", "NE"))]
    if source == outer or sink == outer or source == sink:
        raise DualOrderError("degenerate region structure around the enclosing rectangle")

    dual_edges = {}
    for de in dg.edges.values():
        left = face_of[(de.tail, de.head)]
        right = face_of[(de.head, de.tail)]
        if left == outer or right == outer:
            raise DualOrderError(f"channel {de.edge} borders the exterior region")
        dual_edges[de.edge] = (right, left)

    return DualGraph(
        face_count=len(walks),
        source=source,
        sink=sink,
        dual_edges=dual_edges,
        face_walks=tuple(walks),
    )


# ----------------------------------------------------------------------------
# Order queries
# ----------------------------------------------------------------------------

PRECEDES = "precedes"
SUCCEEDS = "succeeds"
RELATED = "related"


class DualOrderQuery:
    """Precomputed reachability answering relatedness and dual precedence.

    Channels are related when one can reach the other through the flow DAG
    (any directed path extends to an inlet-to-outlet path in a pruned design);
    unrelated channels are ordered by reachability between their dual edges'
    endpoints.
    """

    def __init__(self, dg: DirectedGrid, dual: DualGraph | None = None):
        self.dual = dual if dual is not None else build_dual(dg)
        self.edges: list[EdgeId] = sorted(dg.edges)
        self._edge_index = {e: i for i, e in enumerate(self.edges)}

        nodes = list(dg.topo_nodes)
        node_index = {n: i for i, n in enumerate(nodes)}
        nv = len(nodes)
        node_reach = np.eye(nv, dtype=bool)
        for node in reversed(nodes):
            i = node_index[node]
            for e in dg.nodes[node].outflows:
                node_reach[i] |= node_reach[node_index[dg.edges[e].head]]

        nf = self.dual.face_count
        dual_succ: list[list[int]] = [[] for _ in range(nf)]
        indeg = [0] * nf
        for tail, head in self.dual.dual_edges.values():
            dual_succ[tail].append(head)
            indeg[head] += 1
        stack = [f for f in range(nf) if indeg[f] == 0]
        topo_faces = []
        while stack:
            f = stack.pop()
            topo_faces.append(f)
            for g in dual_succ[f]:
                indeg[g] -= 1
                if indeg[g] == 0:
                    stack.append(g)
        if len(topo_faces) != nf:
            raise DualOrderError("dual graph contains a cycle")
        face_reach = np.eye(nf, dtype=bool)
        for f in reversed(topo_faces):
            for g in dual_succ[f]:
                face_reach[f] |= face_reach[g]

        ne = len(self.edges)
        tails = np.array([node_index[dg.edges[e].tail] for e in self.edges])
        heads = np.array([node_index[dg.edges[e].head] for e in self.edges])
        dtails = np.array([self.dual.dual_edges[e][0] for e in self.edges])
        dheads = np.array([self.dual.dual_edges[e][1] for e in self.edges])

        related = node_reach[np.ix_(heads, tails)] | node_reach[np.ix_(heads, tails)].T
        np.fill_diagonal(related, True)
        self.related_matrix = related
        # edge i precedes edge j when i's dual head reaches j's dual tail
        self.precedes_matrix = face_reach[np.ix_(dheads, dtails)]
        self._ne = ne

    def edge_index(self, edge: EdgeId) -> int:
        return self._edge_index[edge]

    def dually_precedes(self, edge: EdgeId, other: EdgeId) -> str:
        """Classify an edge pair as related, preceding, or succeeding."""
        i, j = self._edge_index[edge], self._edge_index[other]
        if self.related_matrix[i, j]:
            return RELATED
        before = self.precedes_matrix[i, j]
        after = self.precedes_matrix[j, i]
        if before and not after:
            return PRECEDES
        if after and not before:
            return SUCCEEDS
        raise DualOrderError(
            f"dual order gave no verdict for unrelated channels {edge} and {other}"
        )


@dataclass(frozen=True)
class MonotonicityViolation:
    kind: str  # "within_profile" | "across_channels"
    edge: EdgeId
    other: EdgeId | None
    detail: str


def check_monotonicity(
    dg: DirectedGrid,
    query: DualOrderQuery,
    profiles: Mapping[EdgeId, Sequence[SPProfile]],
    tolerance: float = MONOTONICITY_TOLERANCE,
) -> list[MonotonicityViolation]:
    """Verify both profile-monotonicity guarantees on recorded profiles.

    Within every profile the concentration must be non-increasing, and for
    unrelated channels where one dually precedes the other, every value seen
    on the former must be at least every value seen on the latter.  Returns
    one violation record per offence; simulation output must yield none.
    """
    violations: list[MonotonicityViolation] = []
    ne = len(query.edges)
    mins = np.empty(ne)
    maxs = np.empty(ne)
    for i, edge in enumerate(query.edges):
        profs = profiles.get(edge, ())
        lo, hi = math.inf, -math.inf
        for p in profs:
            if p.value_right > p.value_left + tolerance:
                violations.append(
                    MonotonicityViolation(
                        "within_profile",
                        edge,
                        None,
                        f"profile increases: left {p.value_left} < right {p.value_right}",
                    )
                )
            lo = min(lo, p.value_right)
            hi = max(hi, p.value_left)
        mins[i] = lo
        maxs[i] = hi

    bad = query.precedes_matrix & ~query.related_matrix
    bad &= mins[:, None] < maxs[None, :] - tolerance
    for i, j in zip(*np.nonzero(bad)):
        violations.append(
            MonotonicityViolation(
                "across_channels",
                query.edges[i],
                query.edges[j],
                f"min {mins[i]} on preceding channel below max {maxs[j]} on later one",
            )
        )
    return violations


def dual_debug_dump(dg: DirectedGrid, dual: DualGraph) -> dict:
    """JSON-ready dump of regions and dual edges."""
    return {
        "faceCount": dual.face_count,
        "source": dual.source,
        "sink": dual.sink,
        "faces": [
            [":".join(str(p) for p in node) for node in walk] for walk in dual.face_walks
        ],
        "dualEdges": {
            edge_key_str(e): {"tail": t, "head": h}
            for e, (t, h) in sorted(dual.dual_edges.items())
        },
    }
