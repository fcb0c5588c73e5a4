"""Weil restriction of scalars for affine schemes, with point-count oracles.

The usual entry points::

    from weilkit import GF, EtaleAlgebra, AffineScheme, restrict_scheme
    L = EtaleAlgebra(GF(2), [1, 1, 1])
    G = AffineScheme(L, ["x", "y"], ["x*y - 1"])
    restrict_scheme(G).scheme
"""

from .bundle import (BundlePresentation, free_bundle, make_bundle, normal_compat,
                     normal_presentation, restrict_bundle, restrict_zero_section, total_space,
                     total_space_compat)
from .config import overrides, settings
from .dsl import parse_session
from .errors import WeilkitError
from .fields import QQ, GF, EtaleAlgebra, galois_group, norm_and_trace, tensor_split
from .points import (FiniteRing, adjunction_bijection, count_points, dual_numbers,
                     enumerate_points, etale_ring, finite_field, tangent_points, tensor_with)
from .poly import PolyRing
from .report import Report
from .runner import run_command, run_session
from .scheme import (AffineScheme, SchemeMorphism, affine_space, closed_subscheme,
                     distinguished_open, fiber_product, is_closed_embedding, is_etale_morphism,
                     is_smooth, relative_scheme)
from .thom import gysin_shadow, step2_check, thom_compare
from .weilres import (affine_shadow, base_change_compat, counit, fiber_product_compat,
                      galois_decomposition, norm_function, restrict_morphism, restrict_open,
                      restrict_scheme, triangle_identities, twist, unit)

__version__ = "0.1.0"
