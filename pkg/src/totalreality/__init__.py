"""Exact lattice and discriminant-form calculus, plus the genus-bound engine
for the total reality problem on real algebraic curves."""

from .abelian import FiniteAbelianGroup, SNFResult, cokernel, ell, ell_p, p_primary, smith_normal_form
from .lattice import (
    A1,
    A2,
    A3,
    U2,
    Lattice,
    LatticeError,
    Signature,
    det,
    direct_sum,
    hyperbolic,
    is_p_unimodular,
    is_unimodular,
    rank1,
    root_lattice_A,
    signature,
    standard,
)
from .discriminant import (
    DiscSubgroup,
    DiscriminantForm,
    discr,
    is_isotropic,
    kernel_quotient,
    orthogonal_complement,
    qmodz,
)

__version__ = "0.1.0"

__all__ = [
    "A1",
    "A2",
    "A3",
    "DiscSubgroup",
    "DiscriminantForm",
    "FiniteAbelianGroup",
    "Lattice",
    "LatticeError",
    "SNFResult",
    "Signature",
    "U2",
    "cokernel",
    "det",
    "direct_sum",
    "discr",
    "ell",
    "ell_p",
    "hyperbolic",
    "is_isotropic",
    "is_p_unimodular",
    "is_unimodular",
    "kernel_quotient",
    "orthogonal_complement",
    "p_primary",
    "qmodz",
    "rank1",
    "root_lattice_A",
    "signature",
    "smith_normal_form",
    "standard",
]
