"""Random design generation, library population, dedup, and queries."""

import math

import pytest

from gridmixer import (
    DesignLibrary,
    GenerationFailure,
    GeneratorParams,
    InletSpec,
    LibraryEntry,
    populate_library,
    prune_dead_ends,
    query_library,
    random_grid,
    serialize_design,
    simulate,
    validate,
)
from gridmixer.generate import max_norm_distance


class TestRandomGrid:
    def test_generated_design_is_valid_and_pruned(self):
        design = random_grid(GeneratorParams(seed=42))
        assert validate(design).ok()
        assert prune_dead_ends(design) == design
        assert len(design.inlets) == 2
        assert len(design.outlets) == 3

    def test_full_density_gives_full_grid(self):
        params = GeneratorParams(rows=3, cols=3, density=1.0, seed=1)
        design = random_grid(params)
        assert len(design.horizontal_channels) == 4 * 3
        assert len(design.vertical_channels) == 3 * 4

    def test_same_seed_gives_identical_bytes(self):
        a = random_grid(GeneratorParams(seed=7))
        b = random_grid(GeneratorParams(seed=7))
        assert serialize_design(a).encode() == serialize_design(b).encode()

    def test_different_seeds_differ(self):
        a = random_grid(GeneratorParams(seed=1))
        b = random_grid(GeneratorParams(seed=2))
        assert a != b

    def test_every_generated_design_simulates(self):
        for seed in range(30):
            design = random_grid(GeneratorParams(seed=seed))
            report = simulate(design)
            assert not any(math.isnan(o.concentration) for o in report.outlets)

    def test_explicit_positions_respected(self):
        params = GeneratorParams(
            rows=4, cols=4, seed=3,
            inlets=(InletSpec(1.0, col=0), InletSpec(0.0, col=4)),
            outlet_cols=(1, 3),
        )
        design = random_grid(params)
        assert [i.col for i in design.inlets] == [0, 4]
        assert design.outlets == (1, 3)

    def test_unsatisfiable_parameters_fail_cleanly(self):
        with pytest.raises(GenerationFailure):
            random_grid(GeneratorParams(rows=2, cols=2, density=0.02, seed=0, max_attempts=30))

    def test_velocities_stay_with_their_concentrations(self):
        # specs given in ascending concentration order must not swap velocities
        params = GeneratorParams(
            rows=6, cols=6, seed=3,
            inlets=(InletSpec(0.0, velocity=2.0), InletSpec(1.0, velocity=5.0)),
        )
        design = random_grid(params)
        pairs = {(i.concentration, i.velocity) for i in design.inlets}
        assert pairs == {(1.0, 5.0), (0.0, 2.0)}


class TestPopulateLibrary:
    def test_count_one_gives_singleton(self):
        library = populate_library(GeneratorParams(seed=9), count=1)
        assert len(library.entries) == 1

    def test_exact_duplicates_filtered(self):
        library = populate_library(GeneratorParams(seed=9), count=1)
        entry = library.entries[0]
        assert library.add(entry) is False
        assert len(library.entries) == 1

    def test_pairwise_distances_above_threshold(self):
        library = populate_library(GeneratorParams(seed=5), count=120, threshold=0.01)
        assert 1 < len(library.entries) <= 120
        assert library.min_pairwise_distance() > 0.01

    def test_parallel_population_matches_serial(self):
        serial = populate_library(GeneratorParams(seed=13), count=24, jobs=1)
        parallel = populate_library(GeneratorParams(seed=13), count=24, jobs=4)
        assert [e.concentrations for e in serial.entries] == [
            e.concentrations for e in parallel.entries
        ]

    def test_round_trips_through_file(self, tmp_path):
        library = populate_library(GeneratorParams(seed=2), count=20)
        path = tmp_path / "lib.jsonl"
        library.save(str(path))
        loaded = DesignLibrary.load(str(path))
        assert loaded.threshold == library.threshold
        assert [e.concentrations for e in loaded.entries] == [
            e.concentrations for e in library.entries
        ]
        assert [e.design_hash for e in loaded.entries] == [
            e.design_hash for e in library.entries
        ]


class TestQueryLibrary:
    def build(self):
        library = DesignLibrary(12, 12, 0.01)
        for i, vec in enumerate([(0.1, 0.2, 0.3), (0.5, 0.5, 0.5), (0.9, 0.8, 0.7)]):
            library.add(LibraryEntry(vec, (1.0, 1.0, 1.0), "{}", f"hash{i}"))
        return library

    def test_exact_match_first_with_zero_distance(self):
        library = self.build()
        results = query_library(library, (0.5, 0.5, 0.5), k=2)
        assert results[0][0] == 0.0
        assert results[0][1].concentrations == (0.5, 0.5, 0.5)

    def test_k_larger_than_library_returns_all(self):
        library = self.build()
        assert len(query_library(library, (0.0, 0.0, 0.0), k=10)) == 3

    def test_distances_non_decreasing(self):
        import random

        library = self.build()
        rng = random.Random(0)
        for _ in range(20):
            target = tuple(rng.random() for _ in range(3))
            distances = [d for d, _ in query_library(library, target, k=3)]
            assert distances == sorted(distances)

    def test_empty_library_empty_result(self):
        assert query_library(DesignLibrary(1, 1, 0.01), (0.5,), k=3) == []

    def test_max_norm(self):
        assert max_norm_distance((0.1, 0.9), (0.2, 0.85)) == pytest.approx(0.1)
