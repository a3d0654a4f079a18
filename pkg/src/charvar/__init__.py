"""Exact point counts of character varieties of surface groups over finite
fields, their plethystic generating series, and the quiver-with-potential
counts attached to brane tilings."""

from .charcount import (
    CountRecord,
    additive_mu_stack_count,
    brute_force_count,
    stack_count,
    surface_circle_stack_count,
    twisted_count,
    twisted_variety_count,
    untwisted_count,
)
from .classdata import ClassFunction, ConjClassTable, build_class_table, class_convolve, genus_count
from .errors import *  # noqa: F401,F403
from .exactq import InterpolationProblem, LaurentPoly, RatFunc, interpolate
from .ffield import FiniteField, MatrixOverField, field_create, gl_order, primitive_root_of_unity
from .plethys import NumericTower, TruncSeries, adams, assemble_eseries, pleth_exp, pleth_log, verify_exp_identity
from .repscan import RepProblem, count_reps, dimred_count_check, gtrue_count_check, morita_count_check
from .tileforge import (
    BraneTiling,
    cyclic_derivative,
    dual_quiver,
    find_cuts,
    load_tiling,
    potential_of,
    shift_audit,
    two_dim_jacobi,
)

__version__ = "0.1.0"
