"""Inverse limits of l-adic towers as finitely generated Z_l-modules.

``limit`` reads the stabilization pattern of the invariant factors off an
l-adic tower (exponents that freeze become torsion, exponents growing with
the level become free rank) and verifies itself by rebuilding every
represented level from the answer.  ``to_tower`` is the reconstruction
functor sending a module M to the tower (M/l^{n+1})_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import NonStabilizing, NotLAdic
from .groups import FinAbGroup, GroupHom
from .intmat import IntMatrix
from .towers import (
    EventuallyLAdic,
    Tower,
    ZeroTail,
    classify_tail,
    direct_sum,
    is_l_adic,
)
from .zlmod import ZlModule


DEFAULT_PREFIX_LEVELS = 8


def to_tower(module: ZlModule, levels: int = DEFAULT_PREFIX_LEVELS) -> Tower:
    """The l-adic tower with level n equal to module / l^{n+1}."""
    if levels < 1:
        raise ValueError("need at least one represented level")
    groups = tuple(module.quotient_group(n + 1) for n in range(levels))
    maps = tuple(module.quotient_projection(n + 1, n) for n in range(1, levels))
    return Tower(module.l, groups, maps, tail=EventuallyLAdic(0, module))


def _level_exponents(group: FinAbGroup, l: int) -> list[int]:
    exps = []
    for d in group.invariant_factors:
        v = 0
        while d % l == 0:
            d //= l
            v += 1
        exps.append(v)
    return exps


def limit(tower: Tower) -> ZlModule:
    """The inverse limit of a certified l-adic tower, in canonical form.

    For towers with an eventually-l-adic tail this is the tail module.  For
    truncated towers the pattern is read off the last two represented levels
    (an exponent equal to L+1 at the top that was L below is growing, hence
    free) and then checked by reconstructing all represented levels.
    """
    la = is_l_adic(tower)
    if not la:
        raise NotLAdic(f"tower is not certified l-adic: {la.note}")
    shape = classify_tail(tower)
    if shape is not None:
        if shape.module is None:
            return ZlModule(tower.l, ())
        if shape.offset == 0:
            return shape.module
    top = tower.top
    if top < 1:
        raise NonStabilizing("need at least two represented levels", top)
    top_exps = _level_exponents(tower.level(top), tower.l)
    prev_exps = _level_exponents(tower.level(top - 1), tower.l)
    torsion = []
    rho = 0
    for v in top_exps:
        if v == top + 1:
            rho += 1
        else:
            torsion.append(v)
    expected_prev = sorted([min(v, top) for v in torsion] + [top] * rho)
    if expected_prev != sorted(prev_exps):
        raise NonStabilizing("invariant factors have not stabilized", top)
    candidate = ZlModule(tower.l, tuple(sorted(torsion)), rho)
    ops = tower.level(top).operators
    if ops:
        candidate = candidate.with_operators([(lab, mat) for lab, mat in ops])
    for n in range(top + 1):
        if candidate.quotient_group(n + 1) != tower.level(n):
            raise NonStabilizing(f"reconstruction mismatch at level {n}", n)
    return candidate


def rank_ql(module: ZlModule) -> int:
    """Dimension after tensoring with Q_l: torsion dies, the free rank survives."""
    return module.free_rank


def tensor_zl(upsilon_obj) -> ZlModule:
    """The external Z_l-module carried by an image-quotient object at an
    infinite index: the limit of its tower of finite quotients."""
    from .upsilon import psi

    return limit(psi(upsilon_obj))


@dataclass(frozen=True)
class CohomologyTowerInput:
    """Cohomology tower data per degree, supplied as input (never computed
    from geometry here): degree -> tower of coefficient reductions."""

    degrees: tuple[tuple[int, Tower], ...]

    @staticmethod
    def from_mapping(data: Mapping[int, Tower]) -> "CohomologyTowerInput":
        return CohomologyTowerInput(tuple(sorted(data.items())))

    def tower(self, degree: int) -> Tower:
        for d, t in self.degrees:
            if d == degree:
                return t
        raise KeyError(degree)


@dataclass(frozen=True)
class ComparisonReport:
    degree: int
    left: ZlModule
    right: ZlModule
    isomorphic: bool
    operators_match: bool

    def ok(self) -> bool:
        return self.isomorphic and self.operators_match


def comparison_check(data: CohomologyTowerInput, degree: int,
                     bound: Optional[int] = None) -> ComparisonReport:
    """Compare the two module-valued readings of a cohomology tower.

    Left: the stable image over an infinite gap, tensored down to Z_l
    (computed through the image-quotient functor at a symbolic infinite
    index).  Right: the limit of the canonical l-adic replacement.  The
    theorem says they agree; the report records whether the canonical forms
    (and operator actions, when present) are equal.
    """
    from .arcat import canonical_l_adic
    from .hypernat import HyperNat
    from .upsilon import upsilon

    t = data.tower(degree)
    h = HyperNat.symbol("h")
    left = tensor_zl(upsilon(t, h, bound=bound))
    right = limit(canonical_l_adic(t, bound=bound).tower)
    return ComparisonReport(
        degree=degree,
        left=left,
        right=right,
        isomorphic=left.without_operators() == right.without_operators(),
        operators_match=left == right,
    )


def _torsion_window_tower(module: ZlModule, l: int, levels: int) -> Tower:
    """The tower of l^{n+1}-torsion subgroups of module with multiplication
    by l as transitions (the free part contributes nothing)."""
    exps = module.torsion_exponents
    if not exps:
        return Tower(l, (FinAbGroup((), prime_support=l),) * levels,
                     (GroupHom(FinAbGroup((), prime_support=l),
                               FinAbGroup((), prime_support=l),
                               IntMatrix.zeros(0, 0)),) * (levels - 1),
                     tail=ZeroTail(0))
    groups = []
    for n in range(levels):
        factors = tuple(sorted(l ** min(b, n + 1) for b in exps))
        groups.append(FinAbGroup(factors, prime_support=l))
    maps = []
    for n in range(1, levels):
        maps.append(GroupHom(groups[n], groups[n - 1],
                             IntMatrix.diagonal([l] * len(exps))))
    return Tower(l, tuple(groups), tuple(maps))


@dataclass(frozen=True)
class TorsionCriterionResult:
    tower: Tower
    verdict: bool
    witness: object


def ladic_iff_torsionfree(mod_i: ZlModule, mod_next: ZlModule,
                          levels: int = 6) -> TorsionCriterionResult:
    """Synthesize the middle tower of the coefficient exact sequence and test
    the torsion criterion.

    Level n is mod_i/l^{n+1} (+) (l^{n+1}-torsion of mod_next); the first
    summand carries canonical projections, the second multiplication by l.
    The tower is l-adic exactly when mod_next is torsion free; the verdict
    records whether that equivalence held on this instance.
    """
    if mod_i.l != mod_next.l:
        raise ValueError("modules must share the prime")
    l = mod_i.l
    a = to_tower(mod_i, levels)
    b = _torsion_window_tower(mod_next, l, levels)
    h = direct_sum(a, b)
    la = is_l_adic(h)
    expected = mod_next.is_torsion_free()
    verdict = bool(la) == expected
    witness = la.witness if la.is_no else None
    return TorsionCriterionResult(tower=h, verdict=verdict, witness=witness)
