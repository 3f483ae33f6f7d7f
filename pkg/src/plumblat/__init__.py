"""Lattice homology calculators for negative-definite plumbing forests."""

__version__ = "1.0.0"

from .charlattice import (
    CharVector,
    LatticeVector,
    OrbitMembers,
    SpinCOrbit,
    char_to_lattice,
    chi,
    coercivity_bounds,
    enumerate_box,
    is_characteristic,
    is_local_minimum,
    lattice_to_char,
    orbit_decompose,
    pd_dual,
    weight,
)
from .classify import (
    ARVerdict,
    ClassificationReport,
    RationalityVerdict,
    full_report,
    is_almost_rational,
    is_rational,
)
from .dsl import parse_dsl, parse_json_plumbing, parse_plumbing, serialize_dsl
from .homology import (
    ClassRef,
    DerivedDimensions,
    HomologyResult,
    SignedClass,
    ZERO,
    class_of,
    compute_homology,
    derived_dimensions,
)
from .hplus import (
    CrossCheckReport,
    SublevelComplex,
    sublevel_complex,
    GradedHPlus,
    HPlusLevel,
    compute_hplus,
    ker_u_cross_check,
    rational_via_hplus,
)
from .moves import (
    BlowdownResult,
    ConventionConversion,
    ExactnessReport,
    FormalSum,
    SurgeryTriple,
    add_vertex_map,
    blow_down,
    bump_framing_map,
    bump_framing_section,
    check_exactness,
    convert_convention,
    sign_normalization,
    surgery_triple,
)
from .plumbing import (
    CanonicalClass,
    Definiteness,
    EdgeSign,
    IntersectionForm,
    PlumbingForest,
    SemidefiniteVerdict,
    bad_vertices,
    canonical_class,
    intersection_form,
    semidefinite_classify,
    validate_forest,
)
from .seifert import (
    SeifertConversion,
    SeifertData,
    cont_frac_expand,
    parse_sfs,
    seifert_to_plumbing,
)
