"""Exact p-adic spectra, pseudospectra and condition pseudospectra of operators on c_0."""

from .errors import UltraspecError
from .inverse import decide
from .operators import (
    Diagonal,
    LeftShift,
    Matrix,
    RightShift,
    add_rank_one,
    affine,
    apply,
    op_norm,
    shift_by_lambda,
)
from .padic import PNormValue, PrimeContext, pnorm, valuation
from .perturbation import condition_destabilizer, destabilizer, law_check, pseudo_witness
from .sequence import FinSuppVector, Functional
from .spectral import (
    closed_form_region,
    in_condition_pseudospectrum,
    in_pseudospectrum,
    in_spectrum,
    scan,
)

__version__ = "0.1.0"
