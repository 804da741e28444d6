"""Subset sum in polycyclic groups: exact algebra, distortion witnesses,
nilpotent collection and the ZOE reduction."""

from .algebra import IntMatrix, IntVector, char_poly, is_quasi_unipotent, mat_pow, spectral_radius
from .distortion import DistortionPlan, build_plan
from .groups import FElement, FGroup
from .kernels import BACKEND
from .nilpotent import collect, hall_basis, permutation_correction
from .reduction import SolveResult, SspInstance, ZoeInstance, gen_zoe, reduce_zoe, solve_ssp, solve_zoe_brute
from .words import Alphabet, Word

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "BACKEND",
    "DistortionPlan",
    "FElement",
    "FGroup",
    "IntMatrix",
    "IntVector",
    "SolveResult",
    "SspInstance",
    "Word",
    "ZoeInstance",
    "build_plan",
    "char_poly",
    "collect",
    "gen_zoe",
    "hall_basis",
    "is_quasi_unipotent",
    "mat_pow",
    "permutation_correction",
    "reduce_zoe",
    "solve_ssp",
    "solve_zoe_brute",
    "spectral_radius",
]
