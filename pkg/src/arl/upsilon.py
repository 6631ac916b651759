"""The image-quotient functor at a symbolic infinite index, and its partners.

For an AR-l-adic tower F and an infinite index h the functor takes the
stable image over an infinite gap and quotients by l^h.  On normal forms
this is the canonical l-adic replacement G of F placed at the symbolic
star-level h-1: every finite quotient  (G at h-1)/l^{n+1}  is literally G_n,
which is all the external information the object carries.  The reconstruction
functor (psi) rebuilds the tower of finite quotients, and phi is the natural
isomorphism between the round trip and the star embedding (levelwise the
identity on l-adic towers).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .arcat import (
    ARMor,
    CanonicalLAdic,
    ar_compose,
    canonical_l_adic,
)
from .errors import FiniteIndex, PreconditionViolated
from .groups import (
    FinAbGroup,
    GroupHom,
    hom_is_isomorphism,
    is_exact_at,
    is_surjective,
    preimage_lattice,
    solve_mod,
)
from .hypernat import HyperNat
from .intmat import IntMatrix
from .towers import (
    Tower,
    TowerHom,
    classify_tail,
    is_l_adic,
)


@dataclass(frozen=True, eq=False)
class StarLevel:
    """A level of a tower at a (typically infinite) symbolic index.

    For a finite index n the value is literally the tower's level n; for an
    infinite index the object is symbolic and only its finite quotients are
    materialized: (star level)/l^k = base_{k-1}.
    """

    base: Tower
    index: HyperNat

    def resolve_finite(self) -> Optional[FinAbGroup]:
        if self.index.is_infinite:
            return None
        return self.base.level(self.index.offset)

    def finite_quotient(self, power: int) -> FinAbGroup:
        if power < 1:
            raise ValueError("quotient power must be >= 1")
        if not self.index.is_infinite:
            from .groups import quotient_by_integer
            return quotient_by_integer(self.base.level(self.index.offset),
                                       self.base.l ** power)
        return self.base.level(power - 1)


@dataclass(frozen=True, eq=False)
class UpsilonObj:
    """Normal form of the image-quotient at an infinite index h: the
    canonical l-adic tower at star-level h-1, annihilated by l^h."""

    star: StarLevel
    annihilator: HyperNat
    normalization: CanonicalLAdic

    @property
    def base(self) -> Tower:
        return self.star.base

    def finite_quotient(self, power: int) -> FinAbGroup:
        return self.star.finite_quotient(power)

    def canonical_form(self, upto: Optional[int] = None) -> tuple:
        """Comparable normal form: levelwise invariant factors (up to a given
        level) plus the certified tail data when present."""
        hi = self.base.top if upto is None else min(upto, self.base.top)
        levels = tuple(self.base.level(n).invariant_factors for n in range(hi + 1))
        shape = classify_tail(self.base)
        tail = None
        if shape is not None and shape.module is not None:
            tail = (shape.start, shape.module.torsion_exponents, shape.module.free_rank)
        elif shape is not None:
            tail = (shape.start, (), 0)
        return (levels, tail)


def upsilon(f: Tower, h: HyperNat, bound: Optional[int] = None,
            ml_bound: Optional[int] = None) -> UpsilonObj:
    """The image-quotient object of an AR-l-adic tower at infinite index h.

    ml_bound overrides the stabilization shift used for the internal image
    (for cross-checking that the normal form does not depend on it); only the
    default path carries the mutually inverse shift-class morphisms.
    """
    if not h.is_infinite:
        raise FiniteIndex(f"index {h.describe()} is finite; an infinite index is required")
    c = canonical_l_adic(f, bound=bound, ml_bound=ml_bound,
                         with_morphisms=ml_bound is None)
    return UpsilonObj(StarLevel(c.tower, h - 1), h, c)


def psi(u: UpsilonObj) -> Tower:
    """The tower of finite quotients (U/l^{n+1})_n of an l^h-annihilated object."""
    base = u.base
    groups = tuple(u.finite_quotient(n + 1) for n in range(base.top + 1))
    maps = tuple(base.transition(n) for n in range(1, base.top + 1))
    return Tower(base.l, groups, maps, tail=base.tail, starred=base.starred)


def star_tower(f: Tower) -> Tower:
    """The enlargement of a tower: levelwise the identity on finite data,
    with a marker recording the star semantics."""
    return replace(f, starred=True)


@dataclass(frozen=True, eq=False)
class UpsilonHom:
    """A morphism of image-quotient objects, represented by the unique
    shift-0 morphism between the canonical l-adic towers."""

    source: UpsilonObj
    target: UpsilonObj
    tower_hom: TowerHom

    def is_zero(self) -> bool:
        return self.tower_hom.is_levelwise_zero()

    def is_iso(self) -> bool:
        ok = all(hom_is_isomorphism(self.tower_hom.levels[n])
                 for n in range(self.tower_hom.top + 1))
        return ok

    def compose(self, first: "UpsilonHom") -> "UpsilonHom":
        return UpsilonHom(first.source, self.target,
                          self.tower_hom.compose(first.tower_hom))


def ar_canonical_rep(f: ARMor) -> TowerHom:
    """The shift-0 representative of a morphism between l-adic towers.

    Between l-adic systems every shift-class morphism has exactly one
    levelwise representative; it is recovered by lifting along the
    (surjective) composed transitions, after checking that the given
    representative kills their kernels.
    """
    if not is_l_adic(f.source) or not is_l_adic(f.target):
        raise PreconditionViolated("canonical representatives need l-adic endpoints")
    rho = f.shift_amount
    if rho == 0:
        return f.rep
    levels = []
    hi = f.rep.top
    for n in range(hi + 1):
        comp = f.source.composite(n, rho)
        rep_n = f.rep.level(n)
        kgens = preimage_lattice(comp.matrix, comp.target.invariant_factors)
        for j in range(kgens.cols):
            image = rep_n.matrix.apply(kgens.column(j))
            if any(x % d != 0 for x, d in zip(image, rep_n.target.invariant_factors)):
                raise PreconditionViolated(
                    f"representative does not factor through the shift at level {n}")
        cols = []
        src = f.source.level(n)
        for j in range(src.rank):
            unit = tuple(1 if i == j else 0 for i in range(src.rank))
            z = solve_mod(comp.matrix, src.invariant_factors, unit)
            if z is None:
                raise PreconditionViolated(f"transitions not surjective at level {n}")
            cols.append(rep_n.apply(z))
        levels.append(GroupHom(src, f.target.level(n),
                               IntMatrix.from_columns(cols, rows=f.target.level(n).rank)))
    return TowerHom(f.source, f.target, tuple(levels))


def upsilon_mor(f: ARMor, h: HyperNat, bound: Optional[int] = None) -> UpsilonHom:
    """The induced morphism of image-quotient objects.

    The morphism is conjugated onto the canonical l-adic replacements and
    presented by its unique shift-0 representative, so it only depends on
    the shift-class of the input.
    """
    if not h.is_infinite:
        raise FiniteIndex(f"index {h.describe()} is finite")
    us = upsilon(f.source, h, bound=bound)
    ut = upsilon(f.target, h, bound=bound)
    conj = ar_compose(ut.normalization.iso, ar_compose(f, us.normalization.inverse))
    rep0 = ar_canonical_rep(conj)
    return UpsilonHom(us, ut, rep0)


def phi_iso(f: Tower, h: HyperNat, bound: Optional[int] = None) -> tuple[ARMor, ARMor]:
    """The natural isomorphism between psi(upsilon(F)) and the star of F.

    Returns (iso, inverse): iso maps the reconstructed tower to star(F) at
    the factorization shift, inverse is the stable-image epimorphism.  For an
    l-adic tower both are the identity.
    """
    u = upsilon(f, h, bound=bound)
    c = u.normalization
    left = psi(u)
    right = star_tower(f)
    fwd_rep = TowerHom(
        _reshift_source(c.inverse.rep, left, c.inverse.shift_amount),
        right,
        c.inverse.rep.levels,
        tail=c.inverse.rep.tail,
    )
    iso = ARMor(left, right, c.inverse.shift_amount, fwd_rep)
    bwd_rep = TowerHom(
        _reshift_source(c.iso.rep, right, c.iso.shift_amount),
        left,
        c.iso.rep.levels,
        tail=c.iso.rep.tail,
    )
    inverse = ARMor(right, left, c.iso.shift_amount, bwd_rep)
    return iso, inverse


def _reshift_source(rep: TowerHom, new_base: Tower, amount: int) -> Tower:
    from .towers import shift
    return shift(new_base, amount) if amount else new_base


def check_right_exact(f: ARMor, g: ARMor, h: HyperNat,
                      bound: Optional[int] = None,
                      levels: Optional[int] = None) -> bool:
    """Whether the induced sequence of image-quotient objects is exact on
    finite quotients.

    The input F -> G -> H -> 0 must be exact in the shift-class category
    (checked: the composite vanishes there).  The test then verifies, on
    every represented finite quotient, exactness at the middle and
    surjectivity at the end of the induced sequence.
    """
    from .arcat import ar_equal, ar_zero

    comp = ar_compose(g, f)
    vanishes = ar_equal(comp, ar_zero(f.source, g.target), bound)
    if not vanishes:
        raise PreconditionViolated("composite does not vanish in the shift-class category")
    uf = upsilon_mor(f, h, bound=bound)
    ug = upsilon_mor(g, h, bound=bound)
    hi = min(uf.tower_hom.top, ug.tower_hom.top)
    if levels is not None:
        hi = min(hi, levels)
    for n in range(hi + 1):
        a = uf.tower_hom.levels[n]
        b = ug.tower_hom.levels[n]
        if not is_exact_at(a, b):
            return False
        if not is_surjective(b):
            return False
    return True


def faithfulness_check(f: ARMor, h: HyperNat, bound: Optional[int] = None) -> bool:
    """Faithfulness and isomorphism reflection on one instance.

    Checks: the induced morphism vanishes exactly when f is zero in the
    shift-class category, and if the induced morphism is an isomorphism then
    f is a shift-class isomorphism.
    """
    from .arcat import ar_equal, ar_is_isomorphism, ar_zero

    u = upsilon_mor(f, h, bound=bound)
    f_zero = ar_equal(f, ar_zero(f.source, f.target), bound)
    if u.is_zero():
        if not f_zero:
            return False
    else:
        if bool(f_zero):
            return False
    if u.is_iso():
        if not ar_is_isomorphism(f, bound):
            return False
    return True
