"""Exact-arithmetic homology of based and free loop spaces of finite
simplicial sets, computed from chain-level tensor-word models and
cross-validated by two independent differentials."""

from .homalg import (
    Chain,
    ComplexSlice,
    HomologySummary,
    QQ,
    Ring,
    SparseIntMatrix,
    ZZ,
    check_d_squared,
    homology_of_slice,
    parse_ring,
    prime_field,
    smith_normal_form,
)
from .simplicial import (
    BUILTIN_NAMES,
    FormalSimplex,
    OpExtension,
    SimplicialError,
    SimplicialSetPresentation,
    adjoin_inverses,
    aw_coproduct,
    boundary,
    builtin_space,
    canonical_degeneracy,
    chains_slice,
    endpoints,
    face,
    nondeg,
    presentation_from_json,
    validate,
)
from .cobar import (
    CobarAlgebra,
    bar_differential,
    cobar_basis,
    cobar_differential,
    cobar_slice,
    hat_cobar_basis,
    reduce_word,
    truncated_boundary_dA,
    words_between,
)
from .loopcomplex import (
    chi,
    cohoch_basis,
    cohoch_differential,
    cohoch_slice,
    contraction_s,
    eta,
    hochschild_differential,
    hochschild_slice,
    necklical_differential,
    necklical_face,
    phi,
)
from .freehedra import (
    FreehedralLabel,
    f_vector,
    face_poset,
    label_faces,
    project_to_simplex,
    top_label,
)
from .verify import build_complex_slice, run_verify, select_chi_variant

__version__ = "0.1.0"
