"""wedgecert: exact positivity certificates in QQ[[x, y]].

Constructs and verifies preordering-membership certificates for truncated
bivariate power series, refutes membership via branch obstructions, and
classifies boundary points of plane basic closed semialgebraic sets.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .series import BSeries, USeries, InfiniteOrder, arith, even_odd_split, invert_unit, order_of, substitute
from .poly import Poly2, parse_poly, poly_to_str
from .weierstrass import (
    WeierstrassData,
    YPoly,
    unit_sqrt,
    useries_sqrt,
    weierstrass_divide,
    weierstrass_prepare,
)

__version__ = "0.1.0"

__all__ = [
    "BSeries",
    "USeries",
    "InfiniteOrder",
    "KERNEL_BACKEND",
    "Poly2",
    "WeierstrassData",
    "YPoly",
    "arith",
    "even_odd_split",
    "invert_unit",
    "order_of",
    "parse_poly",
    "poly_to_str",
    "substitute",
    "unit_sqrt",
    "useries_sqrt",
    "weierstrass_divide",
    "weierstrass_prepare",
]
