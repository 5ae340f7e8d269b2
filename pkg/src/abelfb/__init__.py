"""Filter banks on discrete abelian groups.

Polyphase and modulation representations, perfect-reconstruction checks,
optimal frame bounds and canonical duals for K-channel filter banks over
finite products of cyclic groups and over Z^d.
"""
__version__ = "0.1.0"

from .errors import (
    BackendError,
    FilterBankError,
    GroupMismatchError,
    LatticeError,
    NonFIRDualError,
    NotAFrameError,
)
from .groups import (
    Group,
    Signal,
    character,
    convolve,
    fourier,
    fourier_at,
    involution,
    inverse_fourier,
    translate,
)
from .lattice import (
    Lattice,
    coset_of,
    downsample,
    expand,
    lattice_from_generators,
    lattice_from_matrix,
    quincunx,
)
from .laurent import (
    LaurentMatrix,
    LaurentPoly,
    lp_add,
    lp_conjugate_transpose,
    lp_eval,
    lp_is_identity,
    lp_mul,
)
from .polyphase import (
    FilterBank,
    PolyphaseVector,
    analysis_matrix,
    apply_filter_bank,
    check_perfect_reconstruction,
    fourier_from_polyphase,
    polyphase_forward,
    polyphase_inverse,
    synthesis_matrix,
)
from .frames import (
    FrameReport,
    canonical_dual,
    check_dual_frames,
    frame_bounds,
    frame_operator_oracle,
    is_riesz_basis,
    is_tight,
)
from .modulation import (
    ModulationData,
    check_mod_polyphase_relation,
    decimation_spectrum,
    modulation_matrix,
)
