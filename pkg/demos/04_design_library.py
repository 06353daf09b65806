"""Build a small chip library and query it for target concentrations.

Random designs whose outlet-concentration vectors are closer than 0.01
(max-norm) to an already accepted design are filtered out, so every library
entry is a meaningfully different mixer.
"""

import pathlib
import time

from gridmixer import DesignLibrary, GeneratorParams, populate_library, query_library

params = GeneratorParams(rows=12, cols=12, seed=2024)

start = time.perf_counter()
library = populate_library(params, count=400, threshold=0.01)
elapsed = time.perf_counter() - start
print(f"examined 400 designs in {elapsed:.1f} s -> "
      f"{len(library.entries)} distinct concentration vectors")
print(f"closest pair distance: {library.min_pairwise_distance():.4f} (must exceed 0.01)")

path = pathlib.Path(__file__).parent / "output" / "library.jsonl"
path.parent.mkdir(exist_ok=True)
library.save(str(path))
print(f"saved to {path}\n")

reloaded = DesignLibrary.load(str(path))
target = (0.8, 0.5, 0.2)
print(f"three nearest designs to target {target}:")
for distance, entry in query_library(reloaded, target, k=3):
    vec = ", ".join(f"{c:.3f}" for c in entry.concentrations)
    print(f"  distance {distance:.4f}  outlets [{vec}]  design {entry.design_hash}")
