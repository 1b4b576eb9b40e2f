from qflat.lattice.forms import (
    IntegralForm,
    LatticeBasis,
    bareiss_det,
    content,
    form_of_basis,
    is_positive_definite,
    local_profile,
    rational_diagonalize,
    space_of,
)
from qflat.lattice.reduction import lll_gram, lll_reduce, short_vectors
from qflat.lattice.isometry import (
    AutomorphismGroup,
    automorphism_group,
    automorphism_order,
    fingerprint,
    is_isometric,
    theta_counts,
)
from qflat.lattice.maximal import (
    enlarge_form,
    enlarging_vector,
    is_maximal,
    maximal_witness,
    maximalize,
    primitive_maximal,
    zvalued_lattice_in,
)
