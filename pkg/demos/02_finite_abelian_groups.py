"""The ambient category: finite abelian groups with exact structure maps.

Groups live in invariant-factor form; homomorphisms are integer matrices on
generators.  Kernels, images and cokernels come back with their inclusion or
projection maps, presented canonically (two descriptions of the same
subgroup give identical presentations).
"""

from arl import (
    FinAbGroup,
    GroupHom,
    IntMatrix,
    canonicalize,
    cyclic,
    hom_cokernel,
    hom_image,
    hom_kernel,
    is_exact_at,
    quotient_by_integer,
)

# Any integer relation matrix presents a finite abelian group.
g = canonicalize(IntMatrix.from_rows([[4, 2], [0, 12]]))
print("Z^2 / span((4,0),(2,12)) =", g.describe())

# Multiplication by 2 on Z/4: kernel, image and cokernel are all Z/2.
z4 = cyclic(4)
f = GroupHom(z4, z4, IntMatrix.from_rows([[2]]))
kernel, incl = hom_kernel(f)
image, _ = hom_image(f)
coker, proj = hom_cokernel(f)
print()
print("x2 on Z/4: kernel", kernel.describe(), "| image", image.describe(),
      "| cokernel", coker.describe())
print("order bookkeeping: |ker| * |im| =", kernel.order() * image.order(),
      "= |Z/4|")

# Exactness is set-level equality of image and kernel lattices.
z2 = cyclic(2)
inc = GroupHom(z2, z4, IntMatrix.from_rows([[2]]))
prj = GroupHom(z4, z2, IntMatrix.from_rows([[1]]))
print()
print("0 -> Z/2 -> Z/4 -> Z/2 -> 0 exact at Z/4:", is_exact_at(inc, prj))

# Quotients by an integer: the workhorse for towers.
print()
print("(Z/3 + Z/9) / 3 =", quotient_by_integer(FinAbGroup((3, 9)), 3).describe())
print("Z/8 / 4        =", quotient_by_integer(cyclic(8), 4).describe())

# Operator actions stand in for a Galois action; homs must commute with them.
frob = FinAbGroup((4,), prime_support=2,
                  operators=(("frob", IntMatrix.from_rows([[3]])),))
print()
print("group with operator:", frob.describe(), "frob =", frob.operator("frob").entries)
k, _ = hom_kernel(GroupHom(frob, frob, IntMatrix.from_rows([[2]])))
print("kernel inherits the action:", k.describe(), "frob =", k.operator("frob").entries)
