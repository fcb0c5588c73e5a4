"""
Norms and distinguished opens
=============================

"""

from weilkit import GF, QQ, EtaleAlgebra, affine_space, norm_and_trace, norm_function, restrict_open

# the Gaussian numbers over QQ
Qi = EtaleAlgebra(QQ, [1, 0, 1])
print(norm_and_trace(Qi, Qi.element([3, 4])))

# the norm of a function on A^1 is a polynomial on the restricted plane
A1 = affine_space(Qi, ["x"])
print(norm_function(A1, "x"))

# restricting D(g) gives D(norm g); points agree over F2 for the F4 line
F4 = EtaleAlgebra(GF(2), [1, 1, 1])
N, c = restrict_open(affine_space(F4, ["x"]), "x + t")
print(N, c.holds, c.witness["points"])
