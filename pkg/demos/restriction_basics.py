"""
Restricting the multiplicative group from F4 to F2
==================================================

"""

from weilkit import (GF, AffineScheme, EtaleAlgebra, adjunction_bijection, count_points,
                     finite_field, restrict_scheme, tensor_with)

# F4 = F2[t]/(t^2 + t + 1), a degree 2 extension
F4 = EtaleAlgebra(GF(2), [1, 1, 1])
G = AffineScheme(F4, ["x", "y"], ["x*y - 1"])

# each variable splits into one coordinate per basis element 1, t
R = restrict_scheme(G)
print(R.scheme)

# F2-points of the restriction are the F4-points of G
print(count_points(R.scheme, finite_field(2)), count_points(G, tensor_with(finite_field(2), F4)))

# the same holds over every F2-algebra; compare through the explicit bijection
for s in (1, 2, 3, 4):
    c = adjunction_bijection(G, finite_field(2, s), R)
    print(f"GF(2^{s})", c.holds, c.witness["left"], c.witness["right"])
