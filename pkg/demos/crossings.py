#!/usr/bin/env python3
"""Walk a few curves through the locus of the Jordan-theta example.

Prints, for exponential curves g exp(sY) and for the flow of X, where the
curve meets the locus and which side it ends up on.
"""
import numpy as np

from ars3d.crossing import exp_curve_profile, flow_crossing
from ars3d.group import AlgebraElement, GroupElement
from ars3d.scenario import bundled


def show(label, prof):
    print(f"{label}: {prof.behavior}")
    for z, flip in zip(prof.zeros, prof.sign_changes):
        print(f"    s = {z:+.6f}  {'crosses' if flip else 'touches'}")
    print(f"    sides: {' | '.join(prof.components)}")


def main():
    sigma = bundled("example_4_4").build()
    window = (-3.0, 3.0)
    above = GroupElement(0.0, np.array([0.0, 1.0]))
    origin = GroupElement(0.0, np.zeros(2))

    show("exp, from (0,0,1) along (0,0,1)", exp_curve_profile(sigma, above, AlgebraElement(0.0, np.array([0.0, 1.0])), window))
    show("exp, from (0,0,1) along (1,0,0)", exp_curve_profile(sigma, above, AlgebraElement(1.0, np.zeros(2)), window))
    show("exp, from origin along (0,1,0)", exp_curve_profile(sigma, origin, AlgebraElement(0.0, np.array([1.0, 0.0])), window))
    show("flow of X from (0,0,1)", flow_crossing(sigma, above, window))
    show("flow of X from origin", flow_crossing(sigma, origin, window))


if __name__ == "__main__":
    main()
