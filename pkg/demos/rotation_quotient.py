#!/usr/bin/env python3
"""The rotation group mod {(2 pi k, 0)}: planes of the locus and flow descent."""
import math

import numpy as np

from ars3d.covering import flow_descends, locus_descends, wrap
from ars3d.group import GroupElement
from ars3d.locus import LocusFunction, describe_locus
from ars3d.scenario import bundled

rng = np.random.default_rng(0)

for name in ("example_4_3", "rotation_linear"):
    sigma = bundled(name).build()
    desc = describe_locus(LocusFunction(sigma), (-4 * math.pi, 4 * math.pi))
    rep = locus_descends(sigma)
    print(f"{name}: {desc.shape}, descends={rep.descends} (residual {rep.max_residual:.1e})")
    if desc.times:
        # times a hair below 2 pi k wrap to just under 2 pi; fold them back to 0
        mods = sorted({round(wrap(t + 1e-9) - 1e-9, 6) + 0.0 for t in desc.times})
        print("    plane times mod 2 pi:", ", ".join(f"{t:.6f}" for t in mods))
    ok = all(flow_descends(sigma.theta, sigma.X, float(s), GroupElement(float(t), v))
             for s, t, v in zip(rng.uniform(-2, 2, 200), rng.uniform(-20, 20, 200), rng.normal(size=(200, 2))))
    print(f"    flow commutes with the projection on 200 random points: {ok}")
