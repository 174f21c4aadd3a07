"""Simple almost-Riemannian structures on the 3D solvable groups G(theta).

The modules follow the math from the bottom up: ``linalg2`` (2x2 closed
forms), ``group``, ``symmetry`` (automorphisms and linear fields), ``ars``,
``locus``, ``zeros`` and ``crossing``, and ``covering`` for the rotation
quotient.  ``cli`` wires them to the ``ars3d`` command.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .linalg2 import classify, expm, lambda_op, lambda_oracle, solve2
from .group import (
    IDENTITY,
    AlgebraElement,
    GroupElement,
    Theta,
    algebra_element,
    bracket,
    dL,
    dR,
    group_element,
    group_exp,
    inv,
    left_invariant,
    mul,
    right_invariant,
)
from .symmetry import (
    Automorphism,
    LinearField,
    check_automorphism,
    check_derivation,
    field_eval,
    flow,
    flow_automorphism,
)
from .ars import (
    Distribution,
    SimpleARS,
    ar_norm,
    delta_line,
    larc,
    make_ars,
    normalize,
    pushforward,
)
from .zeros import zero_classify
from .locus import (
    LocusFunction,
    F,
    component_of,
    describe_locus,
    grad_F,
    locus_param,
    locus_sample,
    regular_value_audit,
)
from .crossing import exp_curve_profile, exp_curve_value, flow_crossing
from .covering import flow_descends, locus_descends, project
