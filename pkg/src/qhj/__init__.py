"""Quantum Hamilton-Jacobi momentum functions, action variables and node counting."""
from .orthopoly import PolyFamily, RootSet, hermite, laguerre, reduced_legendre, roots
from .riccati import (
    RiccatiCoefficients,
    derive_linear_form,
    log_derivative_oracle,
    riccati_residual,
)
from .systems import (
    HOQuantumNumbers,
    HydrogenQuantumNumbers,
    MomentumFunction,
    Spectrum,
    ho_momentum,
    ho_spectrum,
    hydrogen_p_phi,
    hydrogen_p_rho,
    hydrogen_p_x,
    hydrogen_spectrum,
)
from .contour import (
    ActionResult,
    Contour,
    action_variable,
    count_zeros_and_poles,
    integrate_closed,
    nodes_and_antinodes,
    residue_at,
)

__version__ = "0.1.0"
