"""Independent numerical oracles used by the test suite.

Nothing here may share algorithms with the package under test: diffusion is
solved by finite differences (Crank-Nicolson), chip transport by a fine-mesh
2-D finite-volume discretization, and network flow by least squares over the
full equation set.  These exist to catch engine bugs, so they intentionally
take the slow, direct road.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg


# ----------------------------------------------------------------------------
# 1-D diffusion with no-flux walls (Crank-Nicolson finite differences)
# ----------------------------------------------------------------------------


def diffusion_fd_1d(
    initial: np.ndarray,
    width: float,
    diffusivity: float,
    times: list[float],
    dt: float | None = None,
) -> list[np.ndarray]:
    """Diffuse ``initial`` (cell-centered samples) and snapshot at ``times``.

    Crank-Nicolson in time, second-order central in space, reflecting walls.
    Steps grow with elapsed time (the solution's time scales do too) unless a
    fixed ``dt`` is given.
    """
    cells = len(initial)
    h = width / cells

    def solve_step(c: np.ndarray, step: float) -> np.ndarray:
        r = diffusivity * step / (2.0 * h * h)
        ab = np.zeros((3, cells))
        ab[0, 1:] = -r
        ab[1, :] = 1.0 + 2.0 * r
        ab[1, 0] = ab[1, -1] = 1.0 + r  # no-flux: ghost cell mirrors the wall cell
        ab[2, :-1] = -r
        return scipy.linalg.solve_banded((1, 1), ab, c + r * _lap_reflect(c))

    c = initial.astype(float).copy()
    snapshots = []
    t = 0.0
    for target in sorted(times):
        while t < target - 1e-12:
            step = dt if dt is not None else min(4.0, max(2e-3, 0.02 * t))
            step = min(step, target - t)
            c = solve_step(c, step)
            t += step
        snapshots.append(c.copy())
    return snapshots


def _lap_reflect(c: np.ndarray) -> np.ndarray:
    lap = np.empty_like(c)
    lap[1:-1] = c[:-2] - 2.0 * c[1:-1] + c[2:]
    lap[0] = c[1] - c[0]
    lap[-1] = c[-2] - c[-1]
    return lap


def diffusion_series_1d(
    initial: np.ndarray, width: float, diffusivity: float, time: float, modes: int = 200
) -> np.ndarray:
    """Exact cosine-series solution of the same problem; used to vet the FD oracle."""
    cells = len(initial)
    x = (np.arange(cells) + 0.5) * (width / cells)
    result = np.full(cells, initial.mean())
    for n in range(1, modes + 1):
        basis = np.cos(n * math.pi * x / width)
        coeff = 2.0 * (initial * basis).mean()
        result += coeff * basis * math.exp(-((n * math.pi / width) ** 2) * diffusivity * time)
    return result


# ----------------------------------------------------------------------------
# Independent network flow solve (full equation set, least squares)
# ----------------------------------------------------------------------------


def flow_lstsq(design) -> dict:
    """Solve the flow network from scratch: all unknowns, all equations.

    Unknowns are node pressures and channel velocities; equations are the
    unit-resistance pressure-drop law per channel, conservation at every grid
    node, prescribed stub velocities, and zero outlet pressures.  Solved by
    least squares so any redundancy is harmless; the residual is checked.
    """
    edges = {}
    for r, c in design.horizontal_channels:
        edges[("h", r, c)] = (("g", r, c), ("g", r, c + 1))
    for r, c in design.vertical_channels:
        edges[("v", r, c)] = (("g", r, c), ("g", r + 1, c))
    for i, inlet in enumerate(design.inlets):
        edges[("si", i)] = (("in", i), ("g", 0, inlet.col))
    for j, col in enumerate(design.outlets):
        edges[("so", j)] = (("g", design.rows, col), ("out", j))

    nodes = sorted({n for pair in edges.values() for n in pair})
    edge_list = sorted(edges)
    ni = {n: i for i, n in enumerate(nodes)}
    ei = {e: len(nodes) + i for i, e in enumerate(edge_list)}
    n_unknowns = len(nodes) + len(edge_list)

    rows = []
    rhs = []
    for e in edge_list:  # pressure drop = velocity
        tail, head = edges[e]
        row = np.zeros(n_unknowns)
        row[ni[tail]] = 1.0
        row[ni[head]] = -1.0
        row[ei[e]] = -1.0
        rows.append(row)
        rhs.append(0.0)
    for n in nodes:  # conservation at grid nodes
        if n[0] != "g":
            continue
        row = np.zeros(n_unknowns)
        for e in edge_list:
            tail, head = edges[e]
            if tail == n:
                row[ei[e]] += 1.0
            if head == n:
                row[ei[e]] -= 1.0
        rows.append(row)
        rhs.append(0.0)
    for i, inlet in enumerate(design.inlets):  # prescribed inflow
        row = np.zeros(n_unknowns)
        row[ei[("si", i)]] = 1.0
        rows.append(row)
        rhs.append(inlet.velocity)
    for j in range(len(design.outlets)):  # grounded outlets
        row = np.zeros(n_unknowns)
        row[ni[("out", j)]] = 1.0
        rows.append(row)
        rhs.append(0.0)

    matrix = np.array(rows)
    rhs = np.array(rhs)
    solution, *_ = np.linalg.lstsq(matrix, rhs, rcond=None)
    residual = np.abs(matrix @ solution - rhs).max()
    assert residual < 1e-9, f"oracle flow residual {residual}"
    return {
        "pressures": {n: solution[ni[n]] for n in nodes},
        "velocities": {e: solution[ei[e]] for e in edge_list},
    }


# ----------------------------------------------------------------------------
# Brute-force liveness (exhaustive path enumeration; small designs only)
# ----------------------------------------------------------------------------


def live_channels_bruteforce(design) -> set:
    """Channels on at least one simple inlet-to-outlet path, by DFS enumeration."""
    adjacency: dict = {}

    def add(u, v, key):
        adjacency.setdefault(u, []).append((v, key))
        adjacency.setdefault(v, []).append((u, key))

    for r, c in design.horizontal_channels:
        add(("g", r, c), ("g", r, c + 1), ("h", r, c))
    for r, c in design.vertical_channels:
        add(("g", r, c), ("g", r + 1, c), ("v", r, c))
    sources = [("g", 0, inlet.col) for inlet in design.inlets]
    sinks = {("g", design.rows, col) for col in design.outlets}

    live: set = set()

    def dfs(node, visited, path_edges):
        if node in sinks:
            live.update(path_edges)
            # continue: longer paths through this sink vertex may exist
        for nbr, key in adjacency.get(node, ()):
            if nbr not in visited:
                visited.add(nbr)
                path_edges.append(key)
                dfs(nbr, visited, path_edges)
                path_edges.pop()
                visited.remove(nbr)

    for s in set(sources):
        dfs(s, {s}, [])
    return live


# ----------------------------------------------------------------------------
# 2-D steady advection-diffusion on the real chip geometry (finite volume)
# ----------------------------------------------------------------------------


class ChipTransportFD:
    """Fine-mesh finite-volume model of a grid chip.

    The channel network is rasterized to square cells of size ``w / refine``.
    A potential-flow (Darcy) pressure solve with prescribed uniform inlet
    velocity and grounded outlets yields a divergence-free plug-flow velocity
    field, matching the frictionless-wall assumption.  Steady transport then
    uses upwind advection and central diffusion.  Outlet concentrations are
    flux-weighted means over the outlet openings.
    """

    def __init__(self, design, refine: int = 20):
        self.design = design
        self.w = design.channel_width
        self.h = self.w / refine
        self.length = design.channel_length
        self._build_mask()

    def _stripe(self, x0, y0, x1, y1):
        """Mark a channel rectangle between two lattice points (lattice units)."""
        half = self.w / 2.0
        sx0 = min(x0, x1) * self.length - half
        sx1 = max(x0, x1) * self.length + half
        sy0 = min(y0, y1) * self.length - half
        sy1 = max(y0, y1) * self.length + half
        i0 = int(round((sx0 - self.ox) / self.h))
        i1 = int(round((sx1 - self.ox) / self.h))
        j0 = int(round((sy0 - self.oy) / self.h))
        j1 = int(round((sy1 - self.oy) / self.h))
        self.mask[j0:j1, i0:i1] = True

    def _build_mask(self):
        d = self.design
        # lattice coordinates: x = col, y = row index downward; inlet stubs at y=-1,
        # outlet stubs end at y=rows+1
        xs = [c for _, c in d.vertical_channels] + [c for _, c in d.horizontal_channels]
        xs += [c + 1 for _, c in d.horizontal_channels]
        xs += [i.col for i in d.inlets] + list(d.outlets)
        lo_x = min(xs) * self.length - self.w
        hi_x = (max(xs)) * self.length + self.w
        lo_y = -1.0 * self.length - self.w
        hi_y = (d.rows + 1.0) * self.length + self.w
        self.ox = lo_x
        self.oy = lo_y
        nx = int(math.ceil((hi_x - lo_x) / self.h))
        ny = int(math.ceil((hi_y - lo_y) / self.h))
        self.mask = np.zeros((ny, nx), dtype=bool)
        for r, c in d.horizontal_channels:
            self._stripe(c, r, c + 1, r)
        for r, c in d.vertical_channels:
            self._stripe(c, r, c, r + 1)
        for inlet in d.inlets:
            self._stripe(inlet.col, -1, inlet.col, 0)
        for col in d.outlets:
            self._stripe(col, d.rows, col, d.rows + 1)

        # column index range of each inlet/outlet opening
        self.inlet_cells = []
        for inlet in d.inlets:
            self.inlet_cells.append(self._opening_columns(inlet.col))
        self.outlet_cells = [self._opening_columns(col) for col in d.outlets]
        # trim stubs so openings sit exactly on the mask boundary rows
        self.top_row = int(round((-1.0 * self.length - self.oy) / self.h))
        self.bottom_row = int(round(((self.design.rows + 1.0) * self.length - self.oy) / self.h))
        self.mask[: self.top_row, :] = False
        self.mask[self.bottom_row:, :] = False

    def _opening_columns(self, col):
        x0 = col * self.length - self.w / 2.0
        i0 = int(round((x0 - self.ox) / self.h))
        i1 = i0 + int(round(self.w / self.h))
        return list(range(i0, i1))

    def solve(self):
        d = self.design
        ny, nx = self.mask.shape
        idx = -np.ones((ny, nx), dtype=int)
        fluid = np.argwhere(self.mask)
        for k, (j, i) in enumerate(fluid):
            idx[j, i] = k
        n = len(fluid)

        # --- pressure: Laplace with Neumann walls, influx at inlets, P=0 at outlets
        rows, cols, vals = [], [], []
        rhs = np.zeros(n)
        outlet_set = set()
        for cells in self.outlet_cells:
            for i in cells:
                outlet_set.add((self.bottom_row - 1, i))
        inlet_flux = {}
        for inlet, cells in zip(d.inlets, self.inlet_cells):
            for i in cells:
                inlet_flux[(self.top_row, i)] = (inlet.velocity, inlet.concentration)

        for k, (j, i) in enumerate(fluid):
            diag = 0.0
            for dj, di in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                jj, ii = j + dj, i + di
                if 0 <= jj < ny and 0 <= ii < nx and self.mask[jj, ii]:
                    diag += 1.0
                    rows.append(k)
                    cols.append(idx[jj, ii])
                    vals.append(-1.0)
            if (j, i) in outlet_set:
                diag += 2.0  # ghost cell at P=0 across the outlet face
            if (j, i) in inlet_flux:
                rhs[k] += inlet_flux[(j, i)][0] * self.h  # prescribed influx
            rows.append(k)
            cols.append(k)
            vals.append(diag)
        lap = scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
        pressure = scipy.sparse.linalg.spsolve(lap, rhs)

        # face velocities from pressure differences (Darcy, K = 1)
        # u_face between cell k and its neighbor toward +x / +y
        def face_u(j, i, dj, di):
            jj, ii = j + dj, i + di
            if not (0 <= jj < ny and 0 <= ii < nx) or not self.mask[jj, ii]:
                return 0.0
            return (pressure[idx[j, i]] - pressure[idx[jj, ii]]) / self.h

        # --- transport: upwind advection + central diffusion
        D = d.fluid.diffusion_coefficient
        rows, cols, vals = [], [], []
        rhs_c = np.zeros(n)
        for k, (j, i) in enumerate(fluid):
            diag = 0.0
            for dj, di in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                jj, ii = j + dj, i + di
                inside = 0 <= jj < ny and 0 <= ii < nx and self.mask[jj, ii]
                if inside:
                    u = face_u(j, i, dj, di)  # positive = outflow through this face
                    flux_out = max(u, 0.0) * self.h
                    flux_in = max(-u, 0.0) * self.h
                    diag += flux_out + D
                    rows.append(k)
                    cols.append(idx[jj, ii])
                    vals.append(-(flux_in + D))
            if (j, i) in inlet_flux:
                v_in, c_in = inlet_flux[(j, i)]
                rhs_c[k] += v_in * self.h * c_in  # advective inflow carries inlet fluid
            if (j, i) in outlet_set:
                u_out = 2.0 * pressure[idx[j, i]] / self.h  # toward the ghost outlet
                diag += max(u_out, 0.0) * self.h  # pure advective outflow
            rows.append(k)
            cols.append(k)
            vals.append(diag)
        system = scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
        conc = scipy.sparse.linalg.spsolve(system, rhs_c)

        # flux-weighted outlet concentrations and mean outlet velocities
        results = []
        for cells in self.outlet_cells:
            flux = 0.0
            mass = 0.0
            for i in cells:
                j = self.bottom_row - 1
                if not self.mask[j, i]:
                    continue
                u_out = 2.0 * pressure[idx[j, i]] / self.h
                flux += u_out * self.h
                mass += u_out * self.h * conc[idx[j, i]]
            mean_c = mass / flux if flux > 0 else float("nan")
            mean_v = flux / self.w if flux > 0 else 0.0
            results.append((mean_c, mean_v))
        return results
