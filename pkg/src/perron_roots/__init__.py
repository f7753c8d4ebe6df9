"""Real and eventually positive p-th roots of matrices via the real Jordan form."""

from .eigen import SpectrumSummary, analyze_spectrum, pth_root_exists, real_pth_root_exists
from .enumroots import (
    RootCatalog,
    construct_real_root,
    count_ev_positive_primary,
    count_real_primary,
    enumerate_ev_positive_primary,
    enumerate_nonprimary_family,
    enumerate_real_primary,
)
from .estimator import MatrixPthRoot
from .matcore import DEFAULT_TOL, Tolerance
from .matfun import BranchAssignment, RootReport, assemble_nonprimary_root, assemble_primary_root
from .perron import is_eventually_positive, is_eventually_stochastic, is_primitive, power_index
from .rjcf import ComplexPairBlock, RealEigenBlock, RealJordanDecomposition, from_factorization, real_jordan_decompose

__all__ = [
    "DEFAULT_TOL",
    "BranchAssignment",
    "ComplexPairBlock",
    "MatrixPthRoot",
    "RealEigenBlock",
    "RealJordanDecomposition",
    "RootCatalog",
    "RootReport",
    "SpectrumSummary",
    "Tolerance",
    "analyze_spectrum",
    "assemble_nonprimary_root",
    "assemble_primary_root",
    "construct_real_root",
    "count_ev_positive_primary",
    "count_real_primary",
    "enumerate_ev_positive_primary",
    "enumerate_nonprimary_family",
    "enumerate_real_primary",
    "from_factorization",
    "is_eventually_positive",
    "is_eventually_stochastic",
    "is_primitive",
    "power_index",
    "pth_root_exists",
    "real_jordan_decompose",
    "real_pth_root_exists",
]

__version__ = "0.1.0"
