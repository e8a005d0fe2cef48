"""Critical loci of superpotentials: exact (Groebner) and numeric."""

from .critical import (
    ALL_VALUES,
    CONTAINED,
    CRITICAL_VALUES,
    EMPTY,
    HYPERSURFACE,
    NON_EMPTY,
    NOT_CONTAINED,
    SUBVARIETY,
    CritReport,
    crit_contained_in,
    critical_equations,
    critical_ideal,
    critical_values,
    is_crit_empty,
    primitive,
    rational_roots,
    same_up_to_scalar,
)
from .groebner import MonomialOrder, PolyIdeal, groebner, is_groebner, normal_form, s_polynomial
from .numeric import evaluate_at, hessian_det, numeric_crit_search
