"""Vector-valued polynomials on the torus and the cube, Dirichlet series via
the Bohr lift, and numerical checks of cotype/type inequalities."""

from .errors import (
    BudgetExceeded,
    ConfigError,
    DimensionMismatch,
    DomainError,
    FactorizationError,
    NotHomogeneous,
    NotTetrahedral,
    PolytorError,
)
from .norms import NormEstimate, SamplerSpec, cube_lq, l2_parseval, lq_norm, lq_norm_grid, lq_norm_mc, sup_grid
from .poly import (
    DirichletPoly,
    MultiIndex,
    VPoly,
    WalshPoly,
    bohr_lift,
    bohr_push,
    factorize,
    homogeneous_part,
    omega,
    parity_decompose,
    tetra_to_walsh,
    walsh_to_tetra,
)
from .projections import hilbert_inverse, lemma3_projection, projection_polynomials, walsh_homog_filter
from .spaces import NormedSpace, conjugate_exponent, norm

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ConfigError",
    "DimensionMismatch",
    "DirichletPoly",
    "DomainError",
    "FactorizationError",
    "MultiIndex",
    "NormEstimate",
    "NormedSpace",
    "NotHomogeneous",
    "NotTetrahedral",
    "PolytorError",
    "SamplerSpec",
    "VPoly",
    "WalshPoly",
    "bohr_lift",
    "bohr_push",
    "conjugate_exponent",
    "cube_lq",
    "factorize",
    "hilbert_inverse",
    "homogeneous_part",
    "l2_parseval",
    "lemma3_projection",
    "lq_norm",
    "lq_norm_grid",
    "lq_norm_mc",
    "norm",
    "omega",
    "parity_decompose",
    "projection_polynomials",
    "sup_grid",
    "tetra_to_walsh",
    "walsh_homog_filter",
    "walsh_to_tetra",
]
