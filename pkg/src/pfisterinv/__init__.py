"""Exact invariants of quadratic forms and algebras with involution over Q."""

__version__ = "0.1.0"

from .arith import (  # noqa: F401
    BrauerClass,
    Place,
    brauer_class_of_symbol,
    hilbert_symbol,
    rat,
    rat_str,
    square_class,
)
from .qform import (  # noqa: F401
    FormInvariants,
    QuadraticForm,
    in_GP_r,
    in_I_n,
    is_hyperbolic,
    is_isometric,
    is_isotropic,
    pfister,
    witt_decompose,
)
from .quat import QuaternionAlgebra, norm_form  # noqa: F401
