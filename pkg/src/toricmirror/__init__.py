"""Toric mirror calculus.

Exact Laurent-polynomial Landau-Ginzburg models, the toric mirror construction
with circle-action functions, Knorrer periodicity, slicing and formal
completion along level sets, and critical-locus checks by Groebner bases with
a numeric cross-check.  The ``tmc`` command line and ``.tmc`` files drive it.
"""

from .algebra import (
    DEFAULT_FORMAL_ORDER,
    Domain,
    LaurentPoly,
    Monomial,
    MonomialMap,
    Variable,
    affine,
    change_coordinates,
    dual_map,
    formal,
    torus,
)
from .crit import (
    CritReport,
    crit_contained_in,
    critical_values,
    is_crit_empty,
    numeric_crit_search,
)
from .dsl import load_document, parse_model_file, print_file
from .lgmodel import (
    GENERIC,
    CompletionSpec,
    LGModel,
    SliceSpec,
    complete,
    eliminate_constraint,
    knorrer_expand,
    knorrer_reduce,
    slice,
    solve_grading,
)
from .mirror import ToricInput, mirror_model, run_pipeline, sphere_orbit_sign

__version__ = "0.1.0"
