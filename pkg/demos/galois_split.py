"""
After base change the restriction splits into Galois twists
===========================================================

"""

from weilkit import GF, AffineScheme, EtaleAlgebra, galois_decomposition, galois_group, tensor_split

F4 = EtaleAlgebra(GF(2), [1, 1, 1])
group = galois_group(F4)
print(len(group), group.images)

# F4 (x) F4 is a product of two copies of F4, one idempotent per automorphism
for idempotent in tensor_split(F4):
    print(idempotent)

G = AffineScheme(F4, ["x", "y"], ["x*y - 1"])
c = galois_decomposition(G)
print(c.holds)
print(c.witness["points"])
