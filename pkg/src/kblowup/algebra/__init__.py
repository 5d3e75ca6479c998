"""Exact arithmetic substrate."""
from .epsexpand import expand_eps_series
from .exppoly import ExpPoly, LinearMap, basis_names, poly_arith, product, substitute_linear, to_quarters
from .lamseries import LamSeries, mono_text
from .laurent import LaurentSeries, residue_hbar, shifted_power, x_transform
from .ratfrac import FracSum, RatFrac, as_ratfrac, difference_numerator, frac_arith, frac_equal, frac_sum

__all__ = [
    "ExpPoly", "LinearMap", "RatFrac", "FracSum", "LamSeries", "LaurentSeries",
    "basis_names", "poly_arith", "product", "substitute_linear", "to_quarters",
    "frac_arith", "frac_equal", "frac_sum", "difference_numerator", "as_ratfrac",
    "expand_eps_series", "residue_hbar", "shifted_power", "x_transform", "mono_text",
]
