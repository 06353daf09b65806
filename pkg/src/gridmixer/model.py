"""Grid mixer designs: types, JSON serialization, validation, and dead-end pruning.

A design is a rectilinear grid of ``rows x cols`` cells.  Grid vertices are
indexed ``(row, col)`` with ``row in 0..rows`` (top to bottom) and
``col in 0..cols`` (left to right).  Channels occupy lattice edges:

* horizontal channel ``(r, c)``: vertex ``(r, c)`` -- ``(r, c+1)``
* vertical channel ``(r, c)``:   vertex ``(r, c)`` -- ``(r+1, c)``

Inlets hang above top-row vertices and outlets below bottom-row vertices;
both are connected through implicit vertical stub channels of ordinary
length, so they need no special treatment anywhere downstream.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace

from .errors import DesignError, NoPathError

DEFAULT_CHANNEL_WIDTH = 0.2  # mm
DEFAULT_CHANNEL_LENGTH = 1.5  # mm
DEFAULT_DIFFUSION_COEFFICIENT = 1.33e-4  # mm^2/s (sodium)


@dataclass(frozen=True)
class FluidSpec:
    """Physical fluid parameters; only diffusivity matters for mixing."""

    diffusion_coefficient: float = DEFAULT_DIFFUSION_COEFFICIENT


@dataclass(frozen=True)
class Inlet:
    """An inflow attached above top-row vertex ``(0, col)``."""

    col: int
    concentration: float
    velocity: float


@dataclass(frozen=True)
class GridDesign:
    """Immutable description of one grid mixer chip."""

    rows: int
    cols: int
    channel_width: float
    channel_length: float
    horizontal_channels: frozenset[tuple[int, int]]
    vertical_channels: frozenset[tuple[int, int]]
    inlets: tuple[Inlet, ...]
    outlets: tuple[int, ...]
    fluid: FluidSpec

    def channel_count(self) -> int:
        return len(self.horizontal_channels) + len(self.vertical_channels)

    def content_hash(self) -> str:
        return hashlib.sha256(serialize_design(self).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Issue:
    """One validation finding; ``location`` names the edge/node/field concerned."""

    severity: str  # "error" | "warning"
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[Issue, ...]

    @property
    def errors(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "error")

    @property
    def warnings(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "warning")

    def ok(self) -> bool:
        """True iff the design is simulation-ready (no issues at all)."""
        return not self.issues

    def as_dict(self) -> dict:
        return {
            "issues": [
                {"severity": i.severity, "location": i.location, "message": i.message}
                for i in self.issues
            ]
        }


# ----------------------------------------------------------------------------
# JSON design files
# ----------------------------------------------------------------------------

_TOP_LEVEL_KEYS = {
    "rows",
    "cols",
    "channelWidth",
    "channelLength",
    "horizontalChannels",
    "verticalChannels",
    "inlets",
    "outlets",
    "fluid",
}


def _require_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DesignError(f"{what} must be an integer, got {value!r}")
    return value


def _require_number(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DesignError(f"{what} must be a number, got {value!r}")
    return float(value)


def _parse_channel_list(raw, what: str) -> frozenset[tuple[int, int]]:
    if not isinstance(raw, list):
        raise DesignError(f"{what} must be a list of [row, col] pairs")
    seen = set()
    for item in raw:
        if not (isinstance(item, list) and len(item) == 2):
            raise DesignError(f"{what} entries must be [row, col] pairs, got {item!r}")
        key = (_require_int(item[0], f"{what} row"), _require_int(item[1], f"{what} col"))
        if key in seen:
            raise DesignError(f"duplicate channel {key} in {what}")
        seen.add(key)
    return frozenset(seen)


def parse_design(text: str) -> GridDesign:
    """Parse a design file into a structurally valid :class:`GridDesign`.

    Raises :class:`DesignError` with line/column for JSON syntax errors, and
    without position for semantic errors (out-of-range indices, bad
    concentrations, inlet monotonicity violations, ...).
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DesignError(f"design file is not valid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(raw, dict):
        raise DesignError("design file must contain a JSON object")
    unknown = set(raw) - _TOP_LEVEL_KEYS
    if unknown:
        raise DesignError(f"unknown design keys: {sorted(unknown)}")
    for key in ("rows", "cols", "inlets", "outlets"):
        if key not in raw:
            raise DesignError(f"missing required design key {key!r}")

    rows = _require_int(raw["rows"], "rows")
    cols = _require_int(raw["cols"], "cols")
    if rows < 1 or cols < 1:
        raise DesignError(f"grid must be at least 1x1, got {rows}x{cols}")

    width = _require_number(raw.get("channelWidth", DEFAULT_CHANNEL_WIDTH), "channelWidth")
    length = _require_number(raw.get("channelLength", DEFAULT_CHANNEL_LENGTH), "channelLength")
    if width <= 0 or length <= 0:
        raise DesignError("channelWidth and channelLength must be positive")

    fluid_raw = raw.get("fluid", {})
    if not isinstance(fluid_raw, dict):
        raise DesignError("fluid must be an object")
    diffusion = _require_number(
        fluid_raw.get("diffusionCoefficient", DEFAULT_DIFFUSION_COEFFICIENT),
        "fluid.diffusionCoefficient",
    )
    if diffusion <= 0:
        raise DesignError("fluid.diffusionCoefficient must be positive")

    horizontal = _parse_channel_list(raw.get("horizontalChannels", []), "horizontalChannels")
    vertical = _parse_channel_list(raw.get("verticalChannels", []), "verticalChannels")
    for r, c in horizontal:
        if not (0 <= r <= rows and 0 <= c <= cols - 1):
            raise DesignError(f"horizontal channel ({r}, {c}) out of range for {rows}x{cols} grid")
    for r, c in vertical:
        if not (0 <= r <= rows - 1 and 0 <= c <= cols):
            raise DesignError(f"vertical channel ({r}, {c}) out of range for {rows}x{cols} grid")

    inlets_raw = raw["inlets"]
    if not isinstance(inlets_raw, list) or not inlets_raw:
        raise DesignError("inlets must be a non-empty list")
    inlets = []
    for entry in inlets_raw:
        if not isinstance(entry, dict):
            raise DesignError(f"inlet entries must be objects, got {entry!r}")
        col = _require_int(entry.get("col"), "inlet col")
        conc = _require_number(entry.get("concentration"), "inlet concentration")
        vel = _require_number(entry.get("velocity"), "inlet velocity")
        if not (0 <= col <= cols):
            raise DesignError(f"inlet col {col} out of range 0..{cols}")
        if not (0.0 <= conc <= 1.0):
            raise DesignError(f"inlet concentration {conc} outside [0, 1]")
        if vel <= 0:
            raise DesignError(f"inlet velocity {vel} must be positive")
        inlets.append(Inlet(col, conc, vel))
    cols_seq = [i.col for i in inlets]
    if any(b <= a for a, b in zip(cols_seq, cols_seq[1:])):
        raise DesignError("inlet columns must be strictly increasing")
    concs = [i.concentration for i in inlets]
    if any(b > a for a, b in zip(concs, concs[1:])):
        raise DesignError("inlet monotonicity violated: concentrations must be non-increasing left to right")

    outlets_raw = raw["outlets"]
    if not isinstance(outlets_raw, list) or not outlets_raw:
        raise DesignError("outlets must be a non-empty list")
    outlets = tuple(_require_int(c, "outlet col") for c in outlets_raw)
    if any(not (0 <= c <= cols) for c in outlets):
        raise DesignError(f"outlet columns must lie in 0..{cols}")
    if any(b <= a for a, b in zip(outlets, outlets[1:])):
        raise DesignError("outlet columns must be strictly increasing")

    return GridDesign(
        rows=rows,
        cols=cols,
        channel_width=width,
        channel_length=length,
        horizontal_channels=horizontal,
        vertical_channels=vertical,
        inlets=tuple(inlets),
        outlets=outlets,
        fluid=FluidSpec(diffusion),
    )


def serialize_design(design: GridDesign) -> str:
    """Serialize a design to its canonical JSON form.

    Byte-stable: equal designs serialize to identical bytes, and
    ``parse_design(serialize_design(d))`` structurally equals ``d``.
    """
    doc = {
        "rows": design.rows,
        "cols": design.cols,
        "channelWidth": design.channel_width,
        "channelLength": design.channel_length,
        "horizontalChannels": [list(k) for k in sorted(design.horizontal_channels)],
        "verticalChannels": [list(k) for k in sorted(design.vertical_channels)],
        "inlets": [
            {"col": i.col, "concentration": i.concentration, "velocity": i.velocity}
            for i in design.inlets
        ],
        "outlets": list(design.outlets),
        "fluid": {"diffusionCoefficient": design.fluid.diffusion_coefficient},
    }
    return json.dumps(doc, indent=2) + "\n"


def design_from_dict(raw: dict) -> GridDesign:
    """Parse a design from an already-decoded JSON object."""
    return parse_design(json.dumps(raw))


# ----------------------------------------------------------------------------
# Liveness (dead-end channels) and pruning
# ----------------------------------------------------------------------------


def _channel_endpoints(kind: str, r: int, c: int) -> tuple[tuple, tuple]:
    if kind == "h":
        return ("g", r, c), ("g", r, c + 1)
    return ("g", r, c), ("g", r + 1, c)


def _biconnected_edge_groups(adjacency: dict) -> list[set]:
    """Group undirected edges by biconnected component (iterative Hopcroft-Tarjan).

    ``adjacency`` maps node -> list of (neighbor, edge_key).  Returns a list of
    sets of edge keys.
    """
    index = {}
    low = {}
    components: list[set] = []
    edge_stack: list = []
    visited_edges: set = set()
    counter = 0

    for root in adjacency:
        if root in index:
            continue
        stack = [(root, None, iter(adjacency[root]))]
        index[root] = low[root] = counter
        counter += 1
        while stack:
            node, parent_edge, it = stack[-1]
            advanced = False
            for nbr, ekey in it:
                if ekey == parent_edge or ekey in visited_edges:
                    continue
                visited_edges.add(ekey)
                edge_stack.append(ekey)
                if nbr not in index:
                    index[nbr] = low[nbr] = counter
                    counter += 1
                    stack.append((nbr, ekey, iter(adjacency[nbr])))
                    advanced = True
                    break
                low[node] = min(low[node], index[nbr])
            if advanced:
                continue
            stack.pop()
            if stack:
                pnode = stack[-1][0]
                low[pnode] = min(low[pnode], low[node])
                if low[node] >= index[pnode]:
                    # node's subtree hangs off an articulation point: pop its
                    # component, delimited by the tree edge into node
                    comp = set()
                    while edge_stack:
                        e = edge_stack.pop()
                        comp.add(e)
                        if e == parent_edge:
                            break
                    if comp:
                        components.append(comp)
    if edge_stack:
        components.append(set(edge_stack))
    return components


def live_channels(design: GridDesign) -> set[tuple[str, int, int]]:
    """Channels lying on at least one (undirected) inlet-to-outlet simple path.

    An edge is on a simple source-to-sink path iff it shares a biconnected
    component with a virtual sink-to-source edge, so liveness reduces to one
    biconnected-components pass over the design graph augmented with a
    super-source S (joined to all inlets), a super-sink T (all outlets), and
    the virtual edge S--T.
    """
    adjacency: dict = {}

    def add_edge(u, v, key):
        adjacency.setdefault(u, []).append((v, key))
        adjacency.setdefault(v, []).append((u, key))

    for r, c in design.horizontal_channels:
        u, v = _channel_endpoints("h", r, c)
        add_edge(u, v, ("h", r, c))
    for r, c in design.vertical_channels:
        u, v = _channel_endpoints("v", r, c)
        add_edge(u, v, ("v", r, c))
    for i, inlet in enumerate(design.inlets):
        add_edge(("in", i), ("g", 0, inlet.col), ("si", i))
        add_edge("S", ("in", i), ("vs", i))
    for j, col in enumerate(design.outlets):
        add_edge(("g", design.rows, col), ("out", j), ("so", j))
        add_edge(("out", j), "T", ("vt", j))
    add_edge("S", "T", "st")

    for comp in _biconnected_edge_groups(adjacency):
        if "st" in comp:
            return {e for e in comp if isinstance(e, tuple) and e[0] in ("h", "v")}
    return set()


def has_inlet_outlet_path(design: GridDesign) -> bool:
    """True iff some inlet can reach some outlet through the design's channels."""
    targets = {("g", design.rows, col) for col in design.outlets}
    adjacency: dict = {}
    for r, c in design.horizontal_channels:
        u, v = _channel_endpoints("h", r, c)
        adjacency.setdefault(u, []).append(v)
        adjacency.setdefault(v, []).append(u)
    for r, c in design.vertical_channels:
        u, v = _channel_endpoints("v", r, c)
        adjacency.setdefault(u, []).append(v)
        adjacency.setdefault(v, []).append(u)
    frontier = [("g", 0, inlet.col) for inlet in design.inlets]
    seen = set(frontier)
    while frontier:
        node = frontier.pop()
        if node in targets:
            return True
        for nbr in adjacency.get(node, ()):
            if nbr not in seen:
                seen.add(nbr)
                frontier.append(nbr)
    return False


def prune_dead_ends(design: GridDesign) -> GridDesign:
    """Remove every channel that lies on no inlet-to-outlet path.

    Idempotent; preserves the inlet/outlet lists.  Raises :class:`NoPathError`
    if no inlet-to-outlet path exists at all.
    """
    live = live_channels(design)
    if not live:
        raise NoPathError("no inlet-to-outlet path exists in the design")
    return replace(
        design,
        horizontal_channels=frozenset(k[1:] for k in live if k[0] == "h"),
        vertical_channels=frozenset(k[1:] for k in live if k[0] == "v"),
    )


def validate(design: GridDesign, assume_pruned: bool = False) -> ValidationReport:
    """Collect every invariant violation (errors) and dead-end channel (warnings).

    An empty report means the design is simulation-ready as it stands.  With
    ``assume_pruned`` the liveness pass is skipped: every present channel is
    taken to be on an inlet-to-outlet path, which :func:`prune_dead_ends`
    guarantees for its output.
    """
    issues: list[Issue] = []

    def error(location: str, message: str):
        issues.append(Issue("error", location, message))

    def warning(location: str, message: str):
        issues.append(Issue("warning", location, message))

    structure_ok = True
    if design.rows < 1 or design.cols < 1:
        error("design", f"grid must be at least 1x1, got {design.rows}x{design.cols}")
        structure_ok = False
    if design.channel_width <= 0:
        error("design", "channel width must be positive")
    if design.channel_length <= 0:
        error("design", "channel length must be positive")
    if design.fluid.diffusion_coefficient <= 0:
        error("design", "diffusion coefficient must be positive")

    for r, c in sorted(design.horizontal_channels):
        if not (0 <= r <= design.rows and 0 <= c <= design.cols - 1):
            error(f"h:{r}:{c}", "horizontal channel out of range")
            structure_ok = False
    for r, c in sorted(design.vertical_channels):
        if not (0 <= r <= design.rows - 1 and 0 <= c <= design.cols):
            error(f"v:{r}:{c}", "vertical channel out of range")
            structure_ok = False

    if not design.inlets:
        error("inlets", "at least one inlet is required")
        structure_ok = False
    if not design.outlets:
        error("outlets", "at least one outlet is required")
        structure_ok = False

    for i, inlet in enumerate(design.inlets):
        if not (0 <= inlet.col <= design.cols):
            error(f"inlet:{i}", f"inlet column {inlet.col} out of range")
            structure_ok = False
        if not (0.0 <= inlet.concentration <= 1.0):
            error(f"inlet:{i}", f"concentration {inlet.concentration} outside [0, 1]")
        if inlet.velocity <= 0:
            error(f"inlet:{i}", f"velocity {inlet.velocity} must be positive")
    cols_seq = [i.col for i in design.inlets]
    if any(b <= a for a, b in zip(cols_seq, cols_seq[1:])):
        error("inlets", "inlet columns must be strictly increasing")
        structure_ok = False
    concs = [i.concentration for i in design.inlets]
    if any(b > a for a, b in zip(concs, concs[1:])):
        error("inlets", "inlet monotonicity violated: concentrations must be non-increasing")

    if any(b <= a for a, b in zip(design.outlets, design.outlets[1:])):
        error("outlets", "outlet columns must be strictly increasing")
        structure_ok = False
    for j, col in enumerate(design.outlets):
        if not (0 <= col <= design.cols):
            error(f"outlet:{j}", f"outlet column {col} out of range")
            structure_ok = False

    if not structure_ok:
        return ValidationReport(tuple(issues))

    # Liveness-based checks need a well-formed graph.
    if assume_pruned:
        live = {("h", r, c) for r, c in design.horizontal_channels}
        live |= {("v", r, c) for r, c in design.vertical_channels}
    else:
        if not has_inlet_outlet_path(design):
            error("design", "no inlet-to-outlet path exists")
            return ValidationReport(tuple(issues))
        live = live_channels(design)
    for i, inlet in enumerate(design.inlets):
        below = (0, inlet.col)
        if below not in design.vertical_channels:
            error(f"inlet:{i}", f"inlet at column {inlet.col} has no vertical channel below it")
        elif ("v", 0, inlet.col) not in live:
            error(
                f"inlet:{i}",
                f"vertical channel below inlet column {inlet.col} is on no inlet-to-outlet path",
            )
    for j, col in enumerate(design.outlets):
        attach = ("g", design.rows, col)
        attached_live = any(
            k in live
            for k in (
                ("v", design.rows - 1, col),
                ("h", design.rows, col - 1),
                ("h", design.rows, col),
            )
        )
        if not attached_live:
            warning(f"outlet:{j}", f"outlet at column {col} receives no flow (no live channel reaches it)")

    for kind, chans in (("h", design.horizontal_channels), ("v", design.vertical_channels)):
        for r, c in sorted(chans):
            if (kind, r, c) not in live:
                warning(f"{kind}:{r}:{c}", "dead-end channel: on no inlet-to-outlet path")

    return ValidationReport(tuple(issues))
