"""Random 12x12 chips: generate, simulate, and draw.

Writes colored SVG renderings next to this script (red = reactant, blue =
buffer) with predicted concentrations under each outlet.
"""

import pathlib
import time

from gridmixer import GeneratorParams, random_grid, simulate_full
from gridmixer.render import render_design_svg

out_dir = pathlib.Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

for seed in range(4):
    params = GeneratorParams(rows=12, cols=12, seed=seed)
    design = random_grid(params)
    start = time.perf_counter()
    result = simulate_full(design)
    elapsed = (time.perf_counter() - start) * 1e3
    concentrations = ", ".join(f"{o.concentration:.3f}" for o in result.report.outlets)
    print(f"seed {seed}: {design.channel_count()} channels, "
          f"outlets [{concentrations}], simulated in {elapsed:.1f} ms")
    path = out_dir / f"random_12x12_seed{seed}.svg"
    path.write_text(render_design_svg(result.design, result.report, result.exit_profiles))
    print(f"  wrote {path}")
