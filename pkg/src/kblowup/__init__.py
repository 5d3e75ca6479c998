"""Exact K-theoretic instanton partition functions on the plane and its blow-up."""
__version__ = "0.1.0"

from .algebra import ExpPoly, FracSum, LamSeries, LinearMap, RatFrac, frac_equal
from .blowup import blowup_l_factor, h1_line_bundle_character, patch_substitution, zhat_inst
from .identities import (CheckReport, check_blowup_eq, check_sym, check_vanish_k, check_vanish_t,
                         extract_up, f0_tau_derivative, solve_recursive)
from .instanton import InsertionSpec, z_inst
from .partitions import YoungDiagram, YoungTuple, enumerate_tuples

__all__ = [
    "ExpPoly", "FracSum", "LamSeries", "LinearMap", "RatFrac", "frac_equal",
    "blowup_l_factor", "h1_line_bundle_character", "patch_substitution", "zhat_inst",
    "CheckReport", "check_blowup_eq", "check_sym", "check_vanish_k", "check_vanish_t",
    "extract_up", "f0_tau_derivative", "solve_recursive",
    "InsertionSpec", "z_inst", "YoungDiagram", "YoungTuple", "enumerate_tuples",
]
