"""Spectral growth diagnostics for Dirichlet forms on discrete groups and subgroup inclusions."""

from .groups import (
    Ball,
    CyclicGroup,
    FreeAbelianGroup,
    FreeGroup,
    GroupModel,
    HeisenbergGroup,
    ProductGroup,
    ResourceLimitError,
    ball_enumerate,
    word_length,
)
from .kernels import (
    DEFAULT_T_GRID,
    LengthKernel,
    direct_cnd_check,
    positive_definite_check,
    schoenberg_check,
)
from .parsing import parse_group, parse_inclusion, parse_kernel
from .spectral import (
    CertificateError,
    GrowthProfile,
    SpectrumTruncation,
    classify,
    growth_profile,
    omega_estimate,
    partition_function,
    spectrum_from_kernel,
)

__version__ = "0.1.0"
