"""Exact integer normal forms: the bedrock of everything else.

Every computation in this library reduces to exact linear algebra over Z:
Smith normal form with unimodular transforms, Hermite normal form for
canonical lattice bases, and exact solving of linear systems modulo a
relation lattice.
"""

from arl import IntMatrix, hermite_normal_form, smith_normal_form
from arl.intmat import kernel_basis, solve

m = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
u, d, v = smith_normal_form(m)

print("matrix:")
for row in m.entries:
    print("   ", list(row))
print("smith normal form diagonal:", d.diagonal_values())
print("transforms are unimodular: det(U) =", u.det(), ", det(V) =", v.det())
print("U @ M @ V == D:", (u @ m @ v).entries == d.entries)

# The divisibility chain classifies the cokernel as an abelian group:
# Z^3 / col-span(M) is the direct sum of Z/d_i.
print()
print("diag(2,3) has SNF diagonal", smith_normal_form(IntMatrix.diagonal([2, 3]))[1].diagonal_values(),
      " - Z/2 + Z/3 is cyclic of order 6")

# Hermite normal form: a canonical basis for a lattice, independent of the
# generators you started from.
b1 = IntMatrix.from_rows([[4, 2], [0, 6]])
b2 = IntMatrix.from_rows([[2, 4, 6], [6, 0, 6]])
print()
print("two generating sets, one lattice, one HNF basis:")
print("   ", hermite_normal_form(b1).entries)
print("   ", hermite_normal_form(b2).entries)

# Exact solving: integer solutions or a definite no.
m2 = IntMatrix.from_rows([[2, 4], [0, 3]])
print()
print("solve [[2,4],[0,3]] x = (6, 3):", solve(m2, (6, 3)))
print("solve [[2,4],[0,3]] x = (1, 0):", solve(m2, (1, 0)))
print("kernel basis of [[2,4]]:", kernel_basis(IntMatrix.from_rows([[2, 4]])).entries)
