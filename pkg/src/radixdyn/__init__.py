"""Residual dynamics of integer digit systems x -> d_i + N x.

Periodic points of the generalized Euclid division R, their cycle and atom
structure, 1-D censuses, self-affine tiles and the box-spline lift.
"""

from .dynamics import (
    AtomId,
    CodingSequence,
    CycleAtomStructure,
    apply_R,
    apply_sigma,
    atom_of,
    coding,
    cycle_atom_structure,
    equivalent_approx,
    equivalent_sim,
    finite_period_points_by_words,
    hyperbolic_periodic_points,
    period,
    periodic_points,
    power_restriction,
    sub_cuntz_words,
    tau,
    zeta_series,
)
from .system import (
    DigitSystem,
    InvalidSystemError,
    SpectralClass,
    ValidationReport,
    classify,
    digit_fixed_points,
    make_system,
    one_dim,
    translate_digits,
    validate,
)

__version__ = "0.1.0"
