"""
A rank one bundle on the circle over F25 and its restriction
============================================================

"""

from weilkit import (GF, AffineScheme, EtaleAlgebra, finite_field, make_bundle, restrict_bundle,
                     restrict_zero_section, step2_check, thom_compare, total_space_compat)
from weilkit.bundle import rank_at_points

F25 = EtaleAlgebra(GF(5), [3, 0, 1])
C = AffineScheme(F25, ["x", "y"], ["x^2 + y^2 - 1"])

# the idempotent (1/2) [[1 + x, y], [y, 1 - x]] is a rank one summand of O^2; 1/2 = 3 mod 5
E = make_bundle(C, [["3 + 3*x", "3*y"], ["3*y", "3 - 3*x"]], 1)

# restriction doubles the rank and the ambient size
RE = restrict_bundle(E)
print(RE.rank, RE.ambient_rank)
print(rank_at_points(RE, finite_field(5)))

print(total_space_compat(E, RE).holds, restrict_zero_section(E).holds)

# Thom classes counted over local test algebras
c = thom_compare(E)
print(c.holds, c.witness["algebras"])
print(step2_check(E, finite_field(5), RE=RE).witness)
