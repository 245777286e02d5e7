"""Certified capacity bounds for two-dimensional constrained systems."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    IGraph,
    PhiTable,
    SymmetryError,
    build_I,
    cw_upper_bound,
    finite_count_upper,
    lower_bound_edge,
    lower_bound_vertex,
    strip_classes,
    strip_transfer,
    strip_upper_bound,
)
from .constraints import (
    Constraint1D,
    EdgeConstraintView,
    EdgeStripForm,
    Presentation2D,
    axial_presentation,
    builtin_1d,
    builtin_2d,
    edge_form_axial,
    edge_form_vertex,
    lift,
    membership,
    recode_1x2,
    strip,
    transpose_2d,
)
from .graph import (
    DeterministicGraph,
    EdgeReversingMatching,
    LabeledMultigraph,
    SizeGuardError,
    determinize,
    find_edge_reversing_matching,
    structure_report,
    tensor_power,
    trim_essential,
)
from .oracle import (
    ArrayCount,
    chg2_phases,
    count_arrays_2d,
    count_arrays_isotropic,
    enumerate_words,
    exact_capacity,
)
from .phi import MaxEntropicParams, PsiVector, max_entropic_phi, optimize_phi
from .spectral import EigenCertificate, SparseNonnegMatrix, perron, perron_vector, quadratic_form_power
