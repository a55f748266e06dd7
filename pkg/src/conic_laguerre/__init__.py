"""Laguerre expansions on the conic surface ||x|| = t and the solid cone ||x|| <= t.

Submodules
----------
special      Laguerre, Jacobi, Gegenbauer and Bessel functions, constants
quadrature   Gauss rules, h-harmonic sphere rules, cone rules
harmonics    orthonormal h-harmonics and their reproducing kernels
surface      orthogonal bases and Fourier-Laguerre expansions on the surface
kernels      reproducing and Poisson kernels (basis sums and closed forms)
translation  generalised translation, convolution and Cesaro operator norms
solid        the solid cone, through the lift to the surface one dimension up
experiments  experiment kinds driven by the ``conic-laguerre`` command
"""
from ._backend import BACKEND
from .harmonics import HarmonicBasis, build_basis, cached_basis, dim_harmonics
from .kernels import (
    ConvergenceError,
    jacobi_kernel_closed,
    jacobi_kernel_sum,
    kernel_addition,
    kernel_apex,
    kernel_closed,
    kernel_sum,
    poisson_closed,
    poisson_series,
)
from .quadrature import (
    ball_rule,
    cone_surface_rule,
    gauss_jacobi,
    gauss_laguerre,
    jacobi_cone_rule,
    solid_cone_rule,
    sphere_rule,
)
from .solid import (
    SolidBasis,
    alpha_solid,
    cesaro_kernel_solid,
    kernel_solid_closed,
    kernel_solid_sum,
    lift,
    operator_norm_solid,
    poisson_solid,
    translate_solid,
)
from .special import ParameterDomainError, bessel_jhat, jacobi, laguerre
from .surface import (
    JacobiSurfaceBasis,
    SurfaceBasis,
    alpha_kappa,
    cesaro_mean,
    fourier_coeffs,
    partial_sum,
    projection,
)
from .translation import (
    H_alpha,
    cesaro_kernel,
    convolve,
    operator_norm_1d,
    translate,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ConvergenceError", "HarmonicBasis", "JacobiSurfaceBasis",
    "ParameterDomainError", "SolidBasis", "SurfaceBasis", "H_alpha", "alpha_kappa",
    "alpha_solid", "ball_rule", "bessel_jhat", "build_basis", "cached_basis",
    "cesaro_kernel", "cesaro_kernel_solid", "cesaro_mean", "cone_surface_rule", "convolve",
    "dim_harmonics", "fourier_coeffs", "gauss_jacobi", "gauss_laguerre", "jacobi",
    "jacobi_cone_rule", "jacobi_kernel_closed", "jacobi_kernel_sum", "kernel_addition",
    "kernel_apex", "kernel_closed", "kernel_solid_closed", "kernel_solid_sum", "kernel_sum",
    "laguerre", "lift", "operator_norm_1d", "operator_norm_solid", "partial_sum",
    "poisson_closed", "poisson_series", "poisson_solid", "projection", "solid_cone_rule",
    "sphere_rule", "translate", "translate_solid",
]
