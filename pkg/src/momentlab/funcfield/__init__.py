"""Arithmetic over F_q[T] and F_q[S]: divisor sums in sectors and along quadratic residues."""

from .fqpoly import (
    FqPoly,
    UnsupportedFieldError,
    chi2,
    divisor_function,
    divisor_generating_coeff,
    divisor_table,
    irreducible_count,
    irreducibles,
    is_irreducible,
    monics,
)
from .sectors import (
    GroupStructureError,
    SectorGroup,
    SectorGroupElement,
    SuperEvenCharacter,
    orthogonality_error,
    sector_equivalences,
    sector_group,
    super_even_characters,
    u_map,
)
from .variance import (
    IdentityFailure,
    LPolynomial,
    chi2_sum_vanishes,
    l_polynomial,
    m0_sum,
    qr_variance,
    rmt_compare,
    sector_variance,
)
