"""flatimage: exact symbolic-numeric toolkit for describing the image
of a ball or disk under a polynomial map.

The package computes the algebraic boundary of such an image (two plane
curves obtained by elimination), isolates the critical x-values that
delineate it, certifies region labels for sampled points, builds the
Chebyshev/Lissajous family of instances with prescribed holes, evaluates
closed-form degree/genus/singularity predictions, and estimates convex
hulls and support functions by sampling.
"""

from .mvpoly import MvPoly, UvPoly, VARS

__version__ = "0.1.0"

__all__ = ["MvPoly", "UvPoly", "VARS", "__version__"]
