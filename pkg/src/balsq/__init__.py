"""Balanced squeezed complexes, their Stanley-Reisner ideals, generic initial
ideals, color-shifting, and finely graded Betti numbers."""

from .betti import (
    BettiTable,
    FieldConfig,
    HilbertSeries,
    coarsen,
    compare,
    hilbert_series,
    hochster_betti,
    koszul_betti,
    mapping_cone_betti_polarized,
    mapping_cone_betti_squares,
    reduced_homology_dims,
    stable_betti_formula,
)
from .complex import (
    ColoredVertex,
    FlagVector,
    SimplicialComplex,
    balanced_squeezed_complex,
    deletion,
    f_vector,
    facet_of_monomial,
    flag_f_vector,
    flag_h_vector,
    h_vector,
    induced_subcomplex,
    is_color_shifted,
    is_color_shifted_across_colors,
    is_vertex_decomposable,
    link,
    order_ideal_of_complex,
    shelling_order,
    squeezed_decomposition,
    verify_decomposition,
    verify_shelling,
)
from .errors import BalsqError, NotColorSquarefreeError, ParseError, PreconditionError, ResourceLimitError
from .ideals import (
    MonomialIdeal,
    colon_ideal,
    color_polarize,
    color_shifted_complex,
    complex_of_ideal,
    gin_formula,
    is_color_squarefree_stable_across_colors,
    is_strongly_color_stable,
    is_strongly_color_stable_across_colors,
    linear_quotients_order,
    min_var,
    minimalize,
    phi_map,
    sm,
    sr_ideal_formula,
    stanley_reisner_ideal,
)
from .orderideal import (
    OrderIdeal,
    complement_ideal,
    d_max,
    d_max_ideal,
    enumerate_order_ideals,
    from_monomials,
    is_shifted,
    is_shifted_across_colors,
    smallest_shifted_closure,
)
from .ring import (
    Monomial,
    RingSignature,
    Variable,
    color_support,
    is_color_squarefree,
    leq_cs,
    leq_s,
    revlex_compare,
    var_compare_prec,
    var_compare_sec5,
)

__version__ = "0.1.0"
