"""Exact q-expansion arithmetic for half-integral weight modular forms.

Submodules
----------
cyclonum    exact arithmetic in cyclotomic fields, Gauss sums, Jacobi symbols
qlaurent    sparse Laurent series in fractional powers of q
thetaforms  theta, its cusp expansions, the modular units Theta_m
heckeops    T_{l^2}, U_l, U_{p^2}: closed formulas and geometric oracles
cuspgeom    cusps of Gamma_1(M), Sigma_{4N,k}, genus and base change
cli         command-line front end (``halfweight``)
"""

from .cyclonum import CycNumber, gauss_sum, jacobi_symbol, zeta
from .qlaurent import QSeries, SubstSpec, format_series
from .thetaforms import adjust_expansion, theta_series, theta_unit

__all__ = [
    "CycNumber",
    "QSeries",
    "SubstSpec",
    "adjust_expansion",
    "format_series",
    "gauss_sum",
    "jacobi_symbol",
    "theta_series",
    "theta_unit",
    "zeta",
]

__version__ = "0.1.0"
