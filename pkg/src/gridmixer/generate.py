"""Random grid generation and concentration-library population.

The generator samples lattice edges independently at a density target,
prunes everything not on an inlet-to-outlet path, and retries until the
pruned design validates cleanly and every outlet receives flow.  Libraries
collect outlet concentration vectors of simulated designs, dropping any new
vector within a max-norm threshold of an accepted one (greedy, first wins),
so any two library entries differ meaningfully.
"""

from __future__ import annotations

import concurrent.futures
import json
import logging
import math
import random
from dataclasses import dataclass, field, replace

from .engine import simulate
from .errors import DesignError, GenerationFailure, GridMixerError, NoPathError
from .model import FluidSpec, GridDesign, Inlet, prune_dead_ends, serialize_design, validate

logger = logging.getLogger(__name__)

LIBRARY_SCHEMA_VERSION = 1
DEFAULT_DEDUP_THRESHOLD = 0.01


@dataclass(frozen=True)
class InletSpec:
    """Inlet fluid for generated designs; column drawn randomly when None."""

    concentration: float
    velocity: float = 1.0
    col: int | None = None


@dataclass(frozen=True)
class GeneratorParams:
    rows: int = 12
    cols: int = 12
    density: float = 0.65
    inlets: tuple[InletSpec, ...] = (InletSpec(1.0), InletSpec(0.0))
    n_outlets: int = 3
    outlet_cols: tuple[int, ...] | None = None
    seed: int = 0
    channel_width: float | None = None
    channel_length: float | None = None
    diffusion_coefficient: float | None = None
    max_attempts: int = 1000


def random_grid(params: GeneratorParams) -> GridDesign:
    """Generate one connected, redundancy-free design; deterministic per seed.

    Inlet placement is all-or-nothing: if any inlet spec leaves its column
    unset, all inlet columns are drawn randomly and the specs are assigned
    left to right by falling concentration.
    """
    if not (0.0 < params.density <= 1.0):
        raise GenerationFailure(f"density {params.density} outside (0, 1]")
    if len(params.inlets) < 1 or params.n_outlets < 1:
        raise GenerationFailure("need at least one inlet and one outlet")
    if len(params.inlets) > params.cols + 1 or params.n_outlets > params.cols + 1:
        raise GenerationFailure("more inlets/outlets than grid columns")

    rng = random.Random(params.seed)
    rows, cols = params.rows, params.cols
    # with random placement, specs are laid out left to right by falling
    # concentration so any velocity assignment yields a monotone inlet row;
    # explicit columns are taken exactly as given
    fixed_cols = [s.col for s in params.inlets]
    random_placement = any(c is None for c in fixed_cols)
    specs = (
        sorted(params.inlets, key=lambda s: -s.concentration)
        if random_placement
        else list(params.inlets)
    )

    for _ in range(params.max_attempts):
        if random_placement:
            inlet_cols = sorted(rng.sample(range(cols + 1), len(params.inlets)))
        else:
            inlet_cols = fixed_cols
        if params.outlet_cols is not None:
            outlet_cols = list(params.outlet_cols)
        else:
            outlet_cols = sorted(rng.sample(range(cols + 1), params.n_outlets))

        horizontal = set()
        vertical = set()
        for r in range(rows + 1):
            for c in range(cols):
                if rng.random() < params.density:
                    horizontal.add((r, c))
        for r in range(rows):
            for c in range(cols + 1):
                if rng.random() < params.density:
                    vertical.add((r, c))
        for col in inlet_cols:
            vertical.add((0, col))  # inlets must have the channel below them

        inlets = tuple(
            Inlet(col, spec.concentration, spec.velocity)
            for col, spec in zip(inlet_cols, specs)
        )
        design = GridDesign(
            rows=rows,
            cols=cols,
            channel_width=params.channel_width or 0.2,
            channel_length=params.channel_length or 1.5,
            horizontal_channels=frozenset(horizontal),
            vertical_channels=frozenset(vertical),
            inlets=inlets,
            outlets=tuple(outlet_cols),
            fluid=FluidSpec(params.diffusion_coefficient or 1.33e-4),
        )
        try:
            pruned = prune_dead_ends(design)
        except NoPathError:
            continue
        report = validate(pruned, assume_pruned=True)
        if report.errors or report.warnings:
            continue  # warnings include outlets that receive no flow
        return pruned
    raise GenerationFailure(
        f"no valid design found in {params.max_attempts} attempts"
        f" (rows={params.rows}, cols={params.cols}, density={params.density})"
    )


# ----------------------------------------------------------------------------
# Libraries
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class LibraryEntry:
    concentrations: tuple[float, ...]
    velocities: tuple[float, ...]
    design: str  # serialized design JSON
    design_hash: str

    def as_dict(self) -> dict:
        return {
            "concentrations": list(self.concentrations),
            "velocities": list(self.velocities),
            "designHash": self.design_hash,
            "design": json.loads(self.design),
        }


@dataclass
class DesignLibrary:
    rows: int
    cols: int
    threshold: float
    entries: list[LibraryEntry] = field(default_factory=list)

    def accepts(self, vector: tuple[float, ...]) -> bool:
        """True when the vector differs from every entry by more than the threshold."""
        return all(
            max_norm_distance(vector, entry.concentrations) > self.threshold
            for entry in self.entries
        )

    def add(self, entry: LibraryEntry) -> bool:
        if self.entries and len(entry.concentrations) != len(self.entries[0].concentrations):
            raise GridMixerError("concentration vector length differs from library entries")
        if not self.accepts(entry.concentrations):
            return False
        self.entries.append(entry)
        return True

    def min_pairwise_distance(self) -> float:
        """Smallest max-norm distance over all entry pairs (inf for < 2 entries)."""
        best = math.inf
        vectors = [e.concentrations for e in self.entries]
        for i in range(len(vectors)):
            for j in range(i + 1, len(vectors)):
                best = min(best, max_norm_distance(vectors[i], vectors[j]))
        return best

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            header = {
                "schemaVersion": LIBRARY_SCHEMA_VERSION,
                "rows": self.rows,
                "cols": self.cols,
                "threshold": self.threshold,
            }
            fh.write(json.dumps(header) + "\n")
            for entry in self.entries:
                fh.write(json.dumps(entry.as_dict(), sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: str) -> "DesignLibrary":
        with open(path) as fh:
            lines = [line for line in fh.read().splitlines() if line.strip()]
        if not lines:
            raise DesignError("library file is empty")
        try:
            header = json.loads(lines[0])
            if header.get("schemaVersion") != LIBRARY_SCHEMA_VERSION:
                raise DesignError(
                    f"unsupported library schema version {header.get('schemaVersion')}"
                )
            library = cls(header["rows"], header["cols"], header["threshold"])
            for line in lines[1:]:
                raw = json.loads(line)
                library.entries.append(
                    LibraryEntry(
                        tuple(raw["concentrations"]),
                        tuple(raw["velocities"]),
                        json.dumps(raw["design"]),
                        raw["designHash"],
                    )
                )
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise DesignError(f"malformed library file {path}: {exc}") from exc
        return library


def max_norm_distance(a: tuple[float, ...], b: tuple[float, ...]) -> float:
    if len(a) != len(b):
        raise GridMixerError(f"vector lengths differ: {len(a)} vs {len(b)}")
    return max(abs(x - y) for x, y in zip(a, b))


def _generate_and_simulate(args: tuple[GeneratorParams, int]):
    params, index = args
    try:
        design = random_grid(replace(params, seed=params.seed * 1_000_003 + index))
        report = simulate(design)
        vector = report.concentrations()
        if any(math.isnan(c) for c in vector):
            return index, None, "an outlet received no flow"
        return index, (vector, report.velocities(), serialize_design(design), design.content_hash()), None
    except GridMixerError as exc:
        return index, None, str(exc)


def populate_library(
    params: GeneratorParams,
    count: int,
    threshold: float = DEFAULT_DEDUP_THRESHOLD,
    jobs: int = 1,
) -> DesignLibrary:
    """Generate and simulate ``count`` designs, keeping distinct concentration vectors.

    Deterministic for a given ``params.seed`` regardless of ``jobs``: designs
    are simulated in parallel but inserted in generation order.  Designs that
    fail to simulate are logged and skipped.
    """
    if count < 1:
        raise GridMixerError("count must be at least 1")
    library = DesignLibrary(params.rows, params.cols, threshold)
    tasks = [(params, i) for i in range(count)]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(_generate_and_simulate, tasks, chunksize=64)
            outcomes = list(results)
    else:
        outcomes = [_generate_and_simulate(t) for t in tasks]
    for index, payload, error in outcomes:
        if payload is None:
            logger.warning("design %d skipped: %s", index, error)
            continue
        vector, velocities, design_json, design_hash = payload
        library.add(LibraryEntry(vector, velocities, design_json, design_hash))
    return library


def query_library(
    library: DesignLibrary, target: tuple[float, ...], k: int
) -> list[tuple[float, LibraryEntry]]:
    """The ``k`` nearest entries by max-norm distance, closest first.

    Ties preserve insertion order.  An empty library yields an empty result.
    """
    if library.entries and len(target) != len(library.entries[0].concentrations):
        raise GridMixerError(
            f"target length {len(target)} differs from library vectors"
        )
    ranked = sorted(
        ((max_norm_distance(target, e.concentrations), i, e) for i, e in enumerate(library.entries)),
        key=lambda t: (t[0], t[1]),
    )
    return [(dist, entry) for dist, _, entry in ranked[: max(k, 0)]]
