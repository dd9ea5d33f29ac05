"""Exact Witt-vector arithmetic, height-h Artin-Hasse exponentials and the
combinatorial oracles that cross-check them."""

from .artinhasse import (ArtinHasseElement, ah_identity_check, ah_image_in_padics,
                          artin_hasse, idempotent_e, nh_coeffs, nh_infinity)
from .bigwitt import BigWittVec, teichmuller
from .errors import DomainError, VerificationFailure, WittError
from .fixtures import (QuotientPresentation, length_over_fp, mod_p_reduction,
                       verify_height2_suite)
from .intmat import hermite_normal_form, smith_normal_form
from .laws import big_law, ptypical_law, section_law
from .poly import PolyRing, SparsePoly
from .ptypical import (PWittVec, frobenius, from_padic, project, section_j,
                       tilde_ghost, to_padic, verschiebung)
from .rings import (Integers, ModPrimePower, PLocalRationals, PrimeField, Rationals,
                    parse_ring)
from .series import TruncSeries, series_exp, series_log
from .symgrp import (elements_of_order_dividing, hom_count, hom_count_via_isoclasses,
                     mark_lhs, mark_rhs, subgroup_count)

__version__ = "0.1.0"
