"""Membership oracles, mu computation and geometry for the mu-synthesis
domains in C^7 (structure diag(z1, z2, z3)) and C^5 (structure
diag(z1, z2, z2)), together with the tetrablock and symmetrized bidisc they
are built from."""

from .core_types import (
    DEFAULT_CONFIG, MudomError, ScanConfig, State, Verdict, random_contraction, random_unitary,
)
from .tetrablock import in_G_tetra, in_Gamma_tetra, tetra_margin
from .realization import cascade, g_of_A, f_of_A, identity_defect_1d, identity_defect_2d
from .domain333 import (
    MuResult, in_G_333, in_G_333_fiberwise, in_Gamma_333, mu_E333, permute, pi333, psi_i,
    r_poly, scale_for_radius, starlike_scale,
)
from .domain312 import in_G_312, in_Gamma_312, phi_eta, pi312, psi3
from .boundary import in_K, in_K1, param_K, param_K1
from .geometry import SeparationCertificate, separate
from .schwarz import pick_matrix_psd, schwarz_necessary_312, schwarz_necessary_333

__version__ = "0.1.0"
