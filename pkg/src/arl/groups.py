"""Finite abelian groups in invariant-factor form and their homomorphisms.

A group is Z/d_1 + ... + Z/d_k with d_1 | d_2 | ... | d_k, optionally tagged
with a prime l (then every d_i must be a power of l) and with named operator
actions standing in for a Galois action.  Homomorphisms are integer matrices
on the chosen generators, stored with entries reduced modulo the target
factors so that equal maps have equal matrices.

Kernels, images and cokernels are computed by exact lattice arithmetic over
Z.  Subgroups are presented on the Hermite-normal-form basis of their
preimage lattice, which makes every computed object canonical: two different
generating sets of the same subgroup give the same presentation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import Iterator, Mapping, Optional, Sequence

from .errors import CompositionMismatch, InfiniteGroup, PrimeMismatch
from .intmat import (
    IntMatrix,
    hermite_normal_form,
    kernel_basis,
    snf_with_inverses,
    solve,
)


def _is_prime_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class FinAbGroup:
    """A finite abelian group in canonical invariant-factor form."""

    invariant_factors: tuple[int, ...]
    prime_support: Optional[int] = None
    operators: tuple[tuple[str, IntMatrix], ...] = ()

    def __post_init__(self):
        factors = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        for i, d in enumerate(factors):
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
            if i > 0 and d % factors[i - 1] != 0:
                raise ValueError(f"divisibility chain broken: {factors}")
        if self.prime_support is not None:
            for d in factors:
                if not _is_prime_power(d, self.prime_support):
                    raise ValueError(
                        f"factor {d} is not a power of {self.prime_support} in an l-local group"
                    )
        ops = []
        for label, mat in sorted(self.operators, key=lambda kv: kv[0]):
            if mat.rows != self.rank or mat.cols != self.rank:
                raise ValueError(f"operator {label!r} has wrong shape")
            ops.append((label, _reduce_matrix(mat, factors)))
        object.__setattr__(self, "operators", tuple(ops))
        for label, mat in ops:
            _check_well_defined(mat, factors, factors, what=f"operator {label!r}")

    # -- structure ---------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def operator_labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.operators)

    def operator(self, label: str) -> IntMatrix:
        for lab, mat in self.operators:
            if lab == label:
                return mat
        if self.rank == 0:
            # the trivial group carries every action, uniquely
            return IntMatrix.zeros(0, 0)
        raise KeyError(label)

    def with_operators(self, operators: Mapping[str, IntMatrix] | Sequence[tuple[str, IntMatrix]]) -> "FinAbGroup":
        items = operators.items() if isinstance(operators, Mapping) else operators
        return replace(self, operators=tuple(items))

    def without_operators(self) -> "FinAbGroup":
        return replace(self, operators=())

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.rank:
            raise ValueError("coordinate length mismatch")
        return tuple(c % d for c, d in zip(coords, self.invariant_factors))

    def elements(self) -> Iterator[tuple[int, ...]]:
        """All elements as reduced coordinate tuples (for small groups)."""
        ranges = [range(d) for d in self.invariant_factors]
        return (tuple(t) for t in itertools.product(*ranges))

    def relation_matrix(self) -> IntMatrix:
        return IntMatrix.diagonal(list(self.invariant_factors))

    def describe(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)


def trivial_group(prime: Optional[int] = None) -> FinAbGroup:
    return FinAbGroup((), prime_support=prime)


def cyclic(n: int, prime: Optional[int] = None) -> FinAbGroup:
    if n == 1:
        return trivial_group(prime)
    return FinAbGroup((n,), prime_support=prime)


@dataclass(frozen=True)
class Element:
    """An element of a FinAbGroup, coordinates reduced mod the factors."""

    group: FinAbGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", self.group.reduce(self.coords))

    def __add__(self, other: "Element") -> "Element":
        if other.group != self.group:
            raise ValueError("elements of different groups")
        return Element(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Element":
        return Element(self.group, tuple(-a for a in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


def _reduce_matrix(mat: IntMatrix, target_factors: Sequence[int]) -> IntMatrix:
    rows = []
    for i, d in enumerate(target_factors):
        rows.append(tuple(x % d for x in mat.entries[i]))
    return IntMatrix(len(target_factors), mat.cols, tuple(rows))


def _check_well_defined(mat: IntMatrix, source_factors: Sequence[int],
                        target_factors: Sequence[int], what: str = "hom"):
    # d_j * column_j must lie in the target relation lattice, componentwise.
    for j, dj in enumerate(source_factors):
        for i, di in enumerate(target_factors):
            if (dj * mat.entries[i][j]) % di != 0:
                raise ValueError(
                    f"{what} not well-defined at row {i}, col {j}: "
                    f"{di} does not divide {dj}*{mat.entries[i][j]}"
                )


def common_labels(g: FinAbGroup, h: FinAbGroup) -> tuple[str, ...]:
    if g.is_trivial():
        return h.operator_labels()
    if h.is_trivial():
        return g.operator_labels()
    return tuple(lab for lab in g.operator_labels() if lab in h.operator_labels())


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism source -> target given by a matrix on generators."""

    source: FinAbGroup
    target: FinAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.rows != self.target.rank or self.matrix.cols != self.source.rank:
            raise ValueError(
                f"hom matrix is {self.matrix.rows}x{self.matrix.cols}, expected "
                f"{self.target.rank}x{self.source.rank}"
            )
        _check_well_defined(self.matrix, self.source.invariant_factors,
                            self.target.invariant_factors)
        object.__setattr__(self, "matrix", _reduce_matrix(self.matrix, self.target.invariant_factors))
        for label in common_labels(self.source, self.target):
            left = _reduce_matrix(self.target.operator(label) @ self.matrix,
                                  self.target.invariant_factors)
            right = _reduce_matrix(self.matrix @ self.source.operator(label),
                                   self.target.invariant_factors)
            if left != right:
                raise ValueError(f"hom does not commute with operator {label!r}")

    # -- basics ------------------------------------------------------------

    def apply(self, coords: Sequence[int]) -> tuple[int, ...]:
        return self.target.reduce(self.matrix.apply(coords))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def compose(self, first: "GroupHom") -> "GroupHom":
        """self after first."""
        if first.target != self.source:
            raise CompositionMismatch("hom composition endpoints do not match")
        return GroupHom(first.source, self.target, self.matrix @ first.matrix)

    def __add__(self, other: "GroupHom") -> "GroupHom":
        if (other.source, other.target) != (self.source, self.target):
            raise ValueError("hom addition endpoints do not match")
        return GroupHom(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        if (other.source, other.target) != (self.source, self.target):
            raise ValueError("hom subtraction endpoints do not match")
        return GroupHom(self.source, self.target, self.matrix - other.matrix)

    def scale(self, c: int) -> "GroupHom":
        return GroupHom(self.source, self.target, self.matrix.scale(c))


def identity_hom(g: FinAbGroup) -> GroupHom:
    return GroupHom(g, g, IntMatrix.identity(g.rank))

def zero_hom(source: FinAbGroup, target: FinAbGroup) -> GroupHom:
    return GroupHom(source, target, IntMatrix.zeros(target.rank, source.rank))


# -- presentations ----------------------------------------------------------

def presentation_with_maps(relations: IntMatrix, prime: Optional[int] = None,
                           ) -> tuple[FinAbGroup, IntMatrix, IntMatrix]:
    """Canonical form of Z^n / col-span(relations) with coordinate maps.

    Returns (group, proj, lift): proj maps ambient Z^n coordinates onto the
    group's generator coordinates, lift sends each group generator to an
    ambient representative, and proj @ lift is the identity.
    """
    n = relations.rows
    u, d, _, ui, _ = snf_with_inverses(relations)
    k = min(n, relations.cols)
    diag = [d.entries[i][i] for i in range(k)] + [0] * (n - k)
    bad = [i for i, x in enumerate(diag) if x == 0]
    if bad:
        raise InfiniteGroup(f"presentation has free rank {len(bad)}")
    keep = [i for i in range(n) if diag[i] != 1]
    group = FinAbGroup(tuple(diag[i] for i in keep), prime_support=prime)
    proj = u.take_rows(keep)
    lift = ui.take_columns(keep)
    return group, proj, lift


def canonicalize(relations: IntMatrix, prime: Optional[int] = None) -> FinAbGroup:
    """Invariant-factor form of Z^n / col-span(relations), unit factors dropped."""
    group, _, _ = presentation_with_maps(relations, prime)
    return group


def preimage_lattice(mat: IntMatrix, target_factors: Sequence[int]) -> IntMatrix:
    """Generators of {x in Z^m : mat @ x = 0 modulo the target factors}."""
    stacked = mat.hstack(IntMatrix.diagonal(list(target_factors), rows=mat.rows))
    ker = kernel_basis(stacked)
    return ker.take_rows(list(range(mat.cols)))


def sublattice_basis(ambient: FinAbGroup, gens: IntMatrix) -> IntMatrix:
    """Canonical HNF basis of span(gens) + relation lattice inside Z^rank."""
    lat = gens.hstack(ambient.relation_matrix())
    return hermite_normal_form(lat)


def solve_mod(mat: IntMatrix, target_factors: Sequence[int], y: Sequence[int]) -> tuple[int, ...] | None:
    """x with mat @ x = y modulo the target factors, or None."""
    stacked = mat.hstack(IntMatrix.diagonal(list(target_factors), rows=mat.rows))
    sol = solve(stacked, y)
    if sol is None:
        return None
    return tuple(sol[: mat.cols])


# -- subgroups and quotients -------------------------------------------------

def subgroup_from_lattice(ambient: FinAbGroup, gens: IntMatrix,
                          transport_labels: Sequence[str] = (),
                          ) -> tuple[FinAbGroup, GroupHom]:
    """The subgroup of ambient generated by the columns of gens.

    The result is presented on the Hermite-normal-form basis of its lattice,
    so it depends only on the subgroup, not on the generating set.  Operators
    named in transport_labels (which must preserve the subgroup) are
    restricted to it.
    """
    h = sublattice_basis(ambient, gens)
    if h.is_identity():
        return ambient, identity_hom(ambient)
    rel = preimage_lattice(h, ambient.invariant_factors)
    sub, _, lift = presentation_with_maps(rel, prime=ambient.prime_support)
    incl_matrix = h @ lift
    # normalize generator signs: of g and -g keep the lexicographically
    # smaller reduced embedding, so equal subgroups embed identically
    cols = []
    for j in range(sub.rank):
        col = tuple(x % d for x, d in zip(incl_matrix.column(j), ambient.invariant_factors))
        neg = tuple((-x) % d for x, d in zip(incl_matrix.column(j), ambient.invariant_factors))
        cols.append(min(col, neg))
    incl_matrix = IntMatrix.from_columns(cols, rows=ambient.rank)
    if transport_labels:
        ops = []
        for label in transport_labels:
            sigma = ambient.operator(label)
            cols = []
            for j in range(sub.rank):
                y = sigma.apply(incl_matrix.column(j))
                z = solve_mod(incl_matrix, ambient.invariant_factors, y)
                if z is None:
                    raise ValueError(f"operator {label!r} does not preserve the subgroup")
                cols.append(z)
            ops.append((label, IntMatrix.from_columns(cols, rows=sub.rank)))
        sub = sub.with_operators(ops)
    incl = GroupHom(sub, ambient, incl_matrix)
    return sub, incl


def hom_kernel(f: GroupHom) -> tuple[FinAbGroup, GroupHom]:
    """(K, incl) with K the kernel of f and incl its inclusion into the source."""
    gens = preimage_lattice(f.matrix, f.target.invariant_factors)
    labels = common_labels(f.source, f.target)
    return subgroup_from_lattice(f.source, gens, transport_labels=labels)


def hom_image(f: GroupHom) -> tuple[FinAbGroup, GroupHom]:
    """(I, incl) with I the image of f and incl its inclusion into the target."""
    labels = common_labels(f.source, f.target)
    return subgroup_from_lattice(f.target, f.matrix, transport_labels=labels)


def hom_cokernel(f: GroupHom) -> tuple[FinAbGroup, GroupHom]:
    """(C, proj) with C the cokernel of f and proj the projection from the target."""
    rel = f.matrix.hstack(f.target.relation_matrix())
    coker, proj, lift = presentation_with_maps(rel, prime=f.target.prime_support)
    labels = common_labels(f.source, f.target)
    if labels:
        ops = []
        for label in labels:
            tau = f.target.operator(label)
            ops.append((label, proj @ tau @ lift))
        coker = coker.with_operators(ops)
    return coker, GroupHom(f.target, coker, proj)


def quotient_with_maps(g: FinAbGroup, n: int) -> tuple[FinAbGroup, GroupHom, IntMatrix]:
    """(Q, proj, lift) for Q = g / n*g, computed on g's own generators.

    Because g is already in invariant-factor form, Q is presented on the
    surviving generators directly: factor d_i becomes gcd(d_i, n).  This
    keeps canonical towers literally canonical level by level.
    """
    if n < 1:
        raise ValueError("quotient modulus must be >= 1")
    new = [math.gcd(d, n) for d in g.invariant_factors]
    keep = [i for i, d in enumerate(new) if d != 1]
    q = FinAbGroup(tuple(new[i] for i in keep), prime_support=g.prime_support)
    proj_matrix = IntMatrix.identity(g.rank).take_rows(keep)
    lift = IntMatrix.identity(g.rank).take_columns(keep)
    if g.operators:
        ops = [(label, proj_matrix @ mat @ lift) for label, mat in g.operators]
        q = q.with_operators(ops)
    return q, GroupHom(g, q, proj_matrix), lift


def quotient_by_integer(g: FinAbGroup, n: int) -> FinAbGroup:
    """g / n*g in invariant-factor form."""
    q, _, _ = quotient_with_maps(g, n)
    return q


def hom_on_quotients(f: GroupHom, n_source: int, n_target: int) -> GroupHom:
    """The map source/n_source -> target/n_target induced by f.

    Requires f to carry n_source-multiples into n_target-multiples, which is
    automatic when n_target | n_source.
    """
    qs, _, lift_s = quotient_with_maps(f.source, n_source)
    qt, proj_t, _ = quotient_with_maps(f.target, n_target)
    return GroupHom(qs, qt, proj_t.matrix @ f.matrix @ lift_s)


# -- predicates ---------------------------------------------------------------

def image_lattice(f: GroupHom) -> IntMatrix:
    return sublattice_basis(f.target, f.matrix)

def kernel_lattice(f: GroupHom) -> IntMatrix:
    gens = preimage_lattice(f.matrix, f.target.invariant_factors)
    return sublattice_basis(f.source, gens)


def is_surjective(f: GroupHom) -> bool:
    return image_lattice(f).is_identity()

def is_injective(f: GroupHom) -> bool:
    if f.source.rank == 0:
        return True
    return kernel_lattice(f) == hermite_normal_form(f.source.relation_matrix())


def hom_is_isomorphism(f: GroupHom) -> bool:
    return (f.source.invariant_factors == f.target.invariant_factors
            and is_surjective(f))


def is_exact_at(f: GroupHom, g: GroupHom) -> bool:
    """Whether image(f) = kernel(g) as subgroups of the middle group."""
    if f.target != g.source:
        raise CompositionMismatch("exactness check: target(f) != source(g)")
    return image_lattice(f) == kernel_lattice(g)


def element_in_multiples(g: FinAbGroup, coords: Sequence[int], n: int) -> bool:
    """Whether the element lies in n*g."""
    scaled = IntMatrix.diagonal([n] * g.rank)
    return solve_mod(scaled, g.invariant_factors, list(coords)) is not None


def direct_sum_with_maps(g: FinAbGroup, h: FinAbGroup,
                         ) -> tuple[FinAbGroup, GroupHom, GroupHom, GroupHom, GroupHom]:
    """(S, incl_g, incl_h, proj_g, proj_h) for S = g + h.

    For l-local groups the factors merge by a stable sort and all four maps
    are 0/1 selection matrices; mixed-prime groups go through a presentation.
    """
    if g.prime_support is not None and h.prime_support is not None \
            and g.prime_support != h.prime_support:
        raise PrimeMismatch(f"direct sum of {g.prime_support}- and {h.prime_support}-local groups")
    prime = g.prime_support if g.prime_support is not None else h.prime_support
    tagged = [(d, 0, i) for i, d in enumerate(g.invariant_factors)] + \
             [(d, 1, i) for i, d in enumerate(h.invariant_factors)]
    order = sorted(range(len(tagged)), key=lambda t: (tagged[t][0], tagged[t][1], tagged[t][2]))
    merged = [tagged[t][0] for t in order]
    chain_ok = all(merged[i + 1] % merged[i] == 0 for i in range(len(merged) - 1))
    if chain_ok:
        s = FinAbGroup(tuple(merged), prime_support=prime)
        rows_g, rows_h = [], []
        for pos, t in enumerate(order):
            _, side, idx = tagged[t]
            (rows_g if side == 0 else rows_h).append((pos, idx))
        def selection(rows, src_rank):
            m = [[0] * src_rank for _ in range(s.rank)]
            for pos, idx in rows:
                m[pos][idx] = 1
            return IntMatrix.from_rows(m, cols=src_rank)
        mg, mh = selection(rows_g, g.rank), selection(rows_h, h.rank)
        pg, ph = mg.transpose(), mh.transpose()
    else:
        amb = IntMatrix.diagonal(list(g.invariant_factors) + list(h.invariant_factors))
        s, proj, lift = presentation_with_maps(amb, prime=prime)
        mg = proj.take_columns(list(range(g.rank)))
        mh = proj.take_columns(list(range(g.rank, g.rank + h.rank)))
        pg = lift.take_rows(list(range(g.rank)))
        ph = lift.take_rows(list(range(g.rank, g.rank + h.rank)))
    labels = common_labels(g, h)
    if labels:
        ops = []
        for label in labels:
            mat = mg @ g.operator(label) @ pg + mh @ h.operator(label) @ ph
            ops.append((label, mat))
        s = s.with_operators(ops)
    return (s,
            GroupHom(g, s, mg), GroupHom(h, s, mh),
            GroupHom(s, g, pg), GroupHom(s, h, ph))
