"""Projective systems of finite abelian groups over a fixed prime l.

A tower is an explicit prefix F_0, ..., F_L with transition maps
u_n : F_n -> F_{n-1}, together with a tail rule that pins down (or declines
to pin down) every level beyond L:

* ``Truncated``            -- nothing is known beyond L; quantified claims
                              are checked up to L and search results carry a
                              "prefix" scope.
* ``ZeroTail(s)``          -- F_n is trivial for n >= s.
* ``EventuallyLAdic(s, M)``-- F_n = M/l^{n+1} with canonical projections for
                              n >= s, M a finitely generated Z_l-module.
* ``ShiftOf/SumOf/QuotientOf`` -- derived towers referencing their parents.

Levels beyond the prefix of a non-truncated tower can be materialized on
demand; predicates combine exact prefix computation with tail reasoning and
report three-valued verdicts with certificates or witnesses.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import (
    PreconditionViolated,
    PrimeMismatch,
    TruncatedTower,
)
from .groups import (
    FinAbGroup,
    GroupHom,
    direct_sum_with_maps,
    hom_cokernel,
    hom_image,
    hom_is_isomorphism,
    hom_kernel,
    hom_on_quotients,
    identity_hom,
    is_surjective,
    quotient_with_maps,
    solve_mod,
    trivial_group,
    zero_hom,
)
from .intmat import IntMatrix
from .zlmod import ZlModule, check_module_hom, module_cokernel


DEFAULT_BOUND_ENV = "ARL_DEFAULT_BOUND"


# -- three-valued verdicts ---------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """Result of a semi-decidable check: yes with a certificate, no with a
    witness, or unknown with the reason the search was abandoned."""

    status: str
    certificate: object = None
    witness: object = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.status == "yes"

    @property
    def is_no(self) -> bool:
        return self.status == "no"

    @property
    def is_unknown(self) -> bool:
        return self.status == "unknown"

    @staticmethod
    def yes(certificate=None, note="") -> "Verdict":
        return Verdict("yes", certificate=certificate, note=note)

    @staticmethod
    def no(witness=None, note="") -> "Verdict":
        return Verdict("no", witness=witness, note=note)

    @staticmethod
    def unknown(note="") -> "Verdict":
        return Verdict("unknown", note=note)


@dataclass(frozen=True)
class ZeroCertificate:
    """F[radius] -> F vanishes on all represented levels; scope records
    whether the tail rule forces it beyond the prefix."""

    radius: int
    scope: str = "tail"  # "tail" (forced beyond) or "prefix" (checked up to L)


@dataclass(frozen=True)
class LAdicCert:
    scope: str = "tail"


@dataclass(frozen=True)
class MLBound:
    bound: int
    scope: str = "tail"


# -- tail rules ---------------------------------------------------------------

class TailRule:
    pass


@dataclass(frozen=True)
class Truncated(TailRule):
    pass


@dataclass(frozen=True)
class ZeroTail(TailRule):
    start: int


@dataclass(frozen=True)
class EventuallyLAdic(TailRule):
    start: int
    module: ZlModule


@dataclass(frozen=True, eq=False)
class ShiftOf(TailRule):
    parent: "Tower"
    amount: int


@dataclass(frozen=True, eq=False)
class SumOf(TailRule):
    left: "Tower"
    right: "Tower"


@dataclass(frozen=True, eq=False)
class QuotientOf(TailRule):
    parent: "Tower"
    power: int


@dataclass(frozen=True)
class TailShape:
    """Verified normal form of a tail: for all n >= start the level equals
    module/l^{n+1+offset} (module None meaning the trivial group) with the
    canonical projections as transitions."""

    start: int
    module: Optional[ZlModule]
    offset: int = 0


# -- towers -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Tower:
    l: int
    groups: tuple[FinAbGroup, ...]
    maps: tuple[GroupHom, ...]
    tail: TailRule = Truncated()
    starred: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self.groups:
            raise ValueError("a tower needs at least one represented level")
        if len(self.maps) != len(self.groups) - 1:
            raise ValueError("need exactly one transition map per adjacent level pair")
        for g in self.groups:
            if g.prime_support != self.l:
                raise ValueError("tower levels must be l-local for the tower's prime")
        for n, u in enumerate(self.maps, start=1):
            if u.source != self.groups[n] or u.target != self.groups[n - 1]:
                raise ValueError(f"transition {n} does not connect level {n} to level {n - 1}")
        self._check_tail()

    # -- tail consistency --------------------------------------------------

    def _check_tail(self):
        t = self.tail
        top = len(self.groups) - 1
        if isinstance(t, Truncated):
            return
        if isinstance(t, ZeroTail):
            if not 0 <= t.start <= top + 1:
                raise ValueError("zero tail start out of range")
            for n in range(t.start, top + 1):
                if not self.groups[n].is_trivial():
                    raise ValueError(f"zero tail claims level {n} trivial but it is not")
            return
        if isinstance(t, EventuallyLAdic):
            if t.module.l != self.l:
                raise PrimeMismatch("tail module prime differs from tower prime")
            if not 0 <= t.start <= top:
                raise ValueError("eventually-l-adic tail must overlap the prefix")
            for n in range(t.start, top + 1):
                if self.groups[n] != t.module.quotient_group(n + 1):
                    raise ValueError(f"tail module does not match level {n}")
            for n in range(t.start + 1, top + 1):
                if self.maps[n - 1] != t.module.quotient_projection(n + 1, n):
                    raise ValueError(f"transition {n} is not the canonical projection")
            return
        if isinstance(t, ShiftOf):
            if t.amount < 0:
                raise ValueError("negative shift")
            if t.parent.l != self.l:
                raise PrimeMismatch("shift parent prime differs")
            if self.groups[top] != t.parent.level(top + t.amount):
                raise ValueError("shift tail does not match the last prefix level")
            return
        if isinstance(t, SumOf):
            if t.left.l != self.l or t.right.l != self.l:
                raise PrimeMismatch("sum parent prime differs")
            expected, _, _, _, _ = direct_sum_with_maps(t.left.level(top), t.right.level(top))
            if self.groups[top] != expected:
                raise ValueError("sum tail does not match the last prefix level")
            return
        if isinstance(t, QuotientOf):
            if t.parent.l != self.l:
                raise PrimeMismatch("quotient parent prime differs")
            q, _, _ = quotient_with_maps(t.parent.level(top), self.l ** t.power)
            if self.groups[top] != q:
                raise ValueError("quotient tail does not match the last prefix level")
            return
        raise TypeError(f"unknown tail rule {t!r}")

    # -- level access --------------------------------------------------------

    @property
    def top(self) -> int:
        return len(self.groups) - 1

    def can_extend(self) -> bool:
        t = self.tail
        if isinstance(t, Truncated):
            return False
        if isinstance(t, (ShiftOf, QuotientOf)):
            return t.parent.can_extend()
        if isinstance(t, SumOf):
            return t.left.can_extend() and t.right.can_extend()
        return True

    def level(self, n: int) -> FinAbGroup:
        if n < 0:
            raise ValueError("negative level")
        if n <= self.top:
            return self.groups[n]
        key = ("level", n)
        if key not in self._cache:
            self._cache[key] = self._tail_level(n)
        return self._cache[key]

    def transition(self, n: int) -> GroupHom:
        """u_n : F_n -> F_{n-1} for n >= 1."""
        if n < 1:
            raise ValueError("transitions start at level 1")
        if n <= self.top:
            return self.maps[n - 1]
        key = ("transition", n)
        if key not in self._cache:
            self._cache[key] = self._tail_transition(n)
        return self._cache[key]

    def _tail_level(self, n: int) -> FinAbGroup:
        t = self.tail
        if isinstance(t, Truncated):
            raise TruncatedTower(f"level {n} beyond truncated prefix (top={self.top})")
        if isinstance(t, ZeroTail):
            return trivial_group(self.l)
        if isinstance(t, EventuallyLAdic):
            return t.module.quotient_group(n + 1)
        if isinstance(t, ShiftOf):
            return t.parent.level(n + t.amount)
        if isinstance(t, SumOf):
            s, _, _, _, _ = direct_sum_with_maps(t.left.level(n), t.right.level(n))
            return s
        if isinstance(t, QuotientOf):
            q, _, _ = quotient_with_maps(t.parent.level(n), self.l ** t.power)
            return q
        raise TypeError

    def _tail_transition(self, n: int) -> GroupHom:
        t = self.tail
        if isinstance(t, Truncated):
            raise TruncatedTower(f"transition {n} beyond truncated prefix")
        if isinstance(t, ZeroTail):
            return zero_hom(self.level(n), self.level(n - 1))
        if isinstance(t, EventuallyLAdic):
            return t.module.quotient_projection(n + 1, n)
        if isinstance(t, ShiftOf):
            u = t.parent.transition(n + t.amount)
            if u.target != self.level(n - 1) or u.source != self.level(n):
                raise ValueError("shift tail transition mismatch")
            return u
        if isinstance(t, SumOf):
            a, b = t.left, t.right
            _, ia1, ib1, pa1, pb1 = direct_sum_with_maps(a.level(n), b.level(n))
            _, ia0, ib0, pa0, pb0 = direct_sum_with_maps(a.level(n - 1), b.level(n - 1))
            ua, ub = a.transition(n), b.transition(n)
            mat = (ia0.matrix @ ua.matrix @ pa1.matrix) + (ib0.matrix @ ub.matrix @ pb1.matrix)
            return GroupHom(self.level(n), self.level(n - 1), mat)
        if isinstance(t, QuotientOf):
            u = t.parent.transition(n)
            p = self.l ** t.power
            return hom_on_quotients(u, p, p)
        raise TypeError

    def composite(self, n: int, r: int) -> GroupHom:
        """The composed transition F_{n+r} -> F_n (identity for r = 0)."""
        if r == 0:
            return identity_hom(self.level(n))
        key = ("composite", n, r)
        if key not in self._cache:
            self._cache[key] = self.composite(n, r - 1).compose(self.transition(n + r))
        return self._cache[key]

    # -- comparisons and caching ----------------------------------------------

    def levelwise_equal(self, other: "Tower", upto: Optional[int] = None) -> bool:
        """Exact equality of groups and transition matrices on a common prefix."""
        if self.l != other.l:
            return False
        hi = min(self.top, other.top) if upto is None else upto
        for n in range(hi + 1):
            if self.level(n) != other.level(n):
                return False
        for n in range(1, hi + 1):
            if self.transition(n) != other.transition(n):
                return False
        return True

    def cached(self, key, compute: Callable[[], object]):
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    def describe_levels(self, upto: Optional[int] = None) -> list[str]:
        hi = self.top if upto is None else upto
        return [self.level(n).describe() for n in range(hi + 1)]


def resolve_bound(tower: Tower, bound: Optional[int]) -> int:
    if bound is not None:
        return bound
    env = os.environ.get(DEFAULT_BOUND_ENV)
    if env is not None:
        return int(env)
    return tower.top


def constant_tower(l: int, group: FinAbGroup, levels: int, transition: Optional[GroupHom] = None,
                   tail: Optional[TailRule] = None) -> Tower:
    """A tower with the same group at every represented level."""
    u = transition if transition is not None else identity_hom(group)
    if u.source != group or u.target != group:
        raise ValueError("constant tower transition must be an endomorphism")
    t = tail if tail is not None else Truncated()
    return Tower(l, (group,) * levels, (u,) * (levels - 1), t)


# -- tail classification -------------------------------------------------------

def _candidate_shape(tower: Tower) -> Optional[TailShape]:
    t = tower.tail
    if isinstance(t, Truncated):
        return None
    if isinstance(t, ZeroTail):
        return TailShape(t.start, None)
    if isinstance(t, EventuallyLAdic):
        if t.module.is_trivial():
            return TailShape(t.start, None)
        return TailShape(t.start, t.module, 0)
    if isinstance(t, ShiftOf):
        p = classify_tail(t.parent)
        if p is None:
            return None
        if p.module is None:
            return TailShape(max(0, p.start - t.amount), None)
        m = p.module
        off = p.offset + t.amount
        start = max(0, p.start - t.amount)
        if m.free_rank == 0:
            # pure torsion: quotients stabilize, re-anchor at offset 0
            return TailShape(max(start, m.max_exponent() - 1, 0), m, 0)
        return TailShape(start, m, off)
    if isinstance(t, SumOf):
        a = classify_tail(t.left)
        b = classify_tail(t.right)
        if a is None or b is None:
            return None
        if a.module is None and b.module is None:
            return TailShape(max(a.start, b.start), None)
        if a.module is None:
            return TailShape(max(a.start, b.start), b.module, b.offset)
        if b.module is None:
            return TailShape(max(a.start, b.start), a.module, a.offset)
        if a.offset != b.offset:
            return None
        m, _, _ = a.module.direct_sum(b.module)
        return TailShape(max(a.start, b.start), m, a.offset)
    if isinstance(t, QuotientOf):
        p = classify_tail(t.parent)
        if p is None:
            return None
        if p.module is None:
            return TailShape(p.start, None)
        k = t.power
        if k == 0:
            return TailShape(p.start, None)
        exps = sorted([min(a, k) for a in p.module.torsion_exponents] + [k] * p.module.free_rank)
        m = ZlModule(tower.l, tuple(exps))
        if m.is_trivial():
            return TailShape(p.start, None)
        return TailShape(max(p.start, k - 1 - p.offset, 0), m, 0)
    return None


def _shape_holds(tower: Tower, shape: TailShape) -> bool:
    # Verify the claimed normal form on represented levels and one step beyond.
    try:
        hi = tower.top + 1 if tower.can_extend() else tower.top
        for n in range(max(shape.start, 0), hi + 1):
            if shape.module is None:
                if not tower.level(n).is_trivial():
                    return False
            else:
                if tower.level(n) != shape.module.quotient_group(n + 1 + shape.offset):
                    return False
        for n in range(max(shape.start + 1, 1), hi + 1):
            if shape.module is None:
                if not tower.transition(n).is_zero():
                    return False
            else:
                expected = shape.module.quotient_projection(n + 1 + shape.offset, n + shape.offset)
                if tower.transition(n) != expected:
                    return False
    except TruncatedTower:
        return False
    return True


def _minimize_shape_start(tower: Tower, shape: TailShape) -> TailShape:
    start = min(shape.start, tower.top + 1)
    while start > 0:
        n = start - 1
        if shape.module is None:
            if not tower.level(n).is_trivial():
                break
        else:
            if tower.level(n) != shape.module.quotient_group(n + 1 + shape.offset):
                break
            expected = shape.module.quotient_projection(n + 2 + shape.offset,
                                                        n + 1 + shape.offset)
            if tower.transition(n + 1) != expected:
                break
        start -= 1
    return TailShape(start, shape.module, shape.offset)


def classify_tail(tower: Tower) -> Optional[TailShape]:
    """The verified normal form of the tower's tail, or None when opaque."""
    def compute():
        shape = _candidate_shape(tower)
        if shape is not None and not _shape_holds(tower, shape):
            shape = None
        if shape is not None:
            shape = _minimize_shape_start(tower, shape)
        return shape
    return tower.cached(("tail_shape",), compute)


# -- tower homomorphisms --------------------------------------------------------


class HomTail:
    pass


@dataclass(frozen=True)
class HomTruncated(HomTail):
    pass


@dataclass(frozen=True)
class HomZeroTail(HomTail):
    start: int


@dataclass(frozen=True)
class HomCanonicalTail(HomTail):
    """Beyond start the level maps are induced by the identity matrix
    (canonical projections between module quotients)."""

    start: int


@dataclass(frozen=True)
class HomModuleTail(HomTail):
    """Beyond start the level maps are induced by a fixed module hom between
    the EventuallyLAdic tail modules of source and target."""

    start: int
    matrix: IntMatrix


@dataclass(frozen=True, eq=False)
class TowerHom:
    source: Tower
    target: Tower
    levels: tuple[GroupHom, ...]
    tail: HomTail = HomTruncated()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.source.l != self.target.l:
            raise PrimeMismatch("tower hom across different primes")
        if not self.levels:
            raise ValueError("a tower hom needs at least one represented level")
        for n, f in enumerate(self.levels):
            if f.source != self.source.level(n) or f.target != self.target.level(n):
                raise ValueError(f"level {n} map endpoints do not match the towers")
        for n in range(len(self.levels) - 1):
            left = self.levels[n].compose(self.source.transition(n + 1))
            right = self.target.transition(n + 1).compose(self.levels[n + 1])
            if left != right:
                raise ValueError(f"square at levels {n + 1} -> {n} does not commute")
        self._check_tail()

    def _check_tail(self):
        t = self.tail
        k = len(self.levels)
        if isinstance(t, HomTruncated):
            return
        if isinstance(t, HomZeroTail):
            for n in range(t.start, k):
                if not self.levels[n].is_zero():
                    raise ValueError(f"zero hom tail contradicted at level {n}")
            return
        if isinstance(t, HomCanonicalTail):
            for n in range(t.start, k):
                f = self.levels[n]
                expected = GroupHom(f.source, f.target, IntMatrix.identity(f.source.rank)) \
                    if f.source.rank == f.target.rank else None
                if expected is None or f != expected:
                    raise ValueError(f"canonical hom tail contradicted at level {n}")
            return
        if isinstance(t, HomModuleTail):
            sm = _eventually_module(self.source)
            tm = _eventually_module(self.target)
            if sm is None or tm is None:
                raise ValueError("module hom tail requires eventually-l-adic towers")
            check_module_hom(t.matrix, sm, tm)
            for n in range(t.start, k):
                f = self.levels[n]
                expected = GroupHom(f.source, f.target, t.matrix)
                if f != expected:
                    raise ValueError(f"module hom tail contradicted at level {n}")
            return
        raise TypeError(f"unknown hom tail {t!r}")

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def level(self, n: int) -> GroupHom:
        if n <= self.top:
            return self.levels[n]
        t = self.tail
        if isinstance(t, HomZeroTail) and n >= t.start:
            return zero_hom(self.source.level(n), self.target.level(n))
        if isinstance(t, HomCanonicalTail) and n >= t.start:
            src = self.source.level(n)
            return GroupHom(src, self.target.level(n), IntMatrix.identity(src.rank))
        if isinstance(t, HomModuleTail) and n >= t.start:
            return GroupHom(self.source.level(n), self.target.level(n), t.matrix)
        raise TruncatedTower(f"hom level {n} beyond represented data")

    def is_levelwise_zero(self) -> bool:
        return all(f.is_zero() for f in self.levels)

    def compose(self, first: "TowerHom") -> "TowerHom":
        if first.target is not self.source and not first.target.levelwise_equal(self.source):
            raise PreconditionViolated("tower hom composition endpoints do not match")
        k = min(first.top, self.top)
        levels = tuple(self.levels[n].compose(first.levels[n]) for n in range(k + 1))
        return TowerHom(first.source, self.target, levels,
                        tail=_compose_hom_tails(self.tail, first.tail, 0))

    def __sub__(self, other: "TowerHom") -> "TowerHom":
        k = min(self.top, other.top)
        levels = tuple(self.levels[n] - other.levels[n] for n in range(k + 1))
        return TowerHom(self.source, self.target, levels,
                        tail=_diff_hom_tails(self.tail, other.tail))


def _eventually_module(tower: Tower) -> Optional[ZlModule]:
    shape = classify_tail(tower)
    if shape is None:
        return None
    if shape.module is None:
        return ZlModule(tower.l, ())
    if shape.offset == 0:
        return shape.module
    return None


def _compose_hom_tails(outer: HomTail, inner: HomTail, inner_shift: int) -> HomTail:
    # Level n of the composite uses outer_n and inner_{n + inner_shift}.
    if isinstance(outer, HomZeroTail):
        return HomZeroTail(outer.start)
    if isinstance(inner, HomZeroTail):
        return HomZeroTail(max(0, inner.start - inner_shift))
    if isinstance(outer, HomCanonicalTail) and isinstance(inner, HomCanonicalTail):
        return HomCanonicalTail(max(outer.start, inner.start - inner_shift, 0))
    if isinstance(outer, HomModuleTail) and isinstance(inner, HomModuleTail):
        return HomModuleTail(max(outer.start, inner.start - inner_shift, 0),
                             outer.matrix @ inner.matrix)
    return HomTruncated()


def _diff_hom_tails(a: HomTail, b: HomTail) -> HomTail:
    if isinstance(a, HomZeroTail) and isinstance(b, HomZeroTail):
        return HomZeroTail(max(a.start, b.start))
    if isinstance(a, HomModuleTail) and isinstance(b, HomModuleTail):
        return HomModuleTail(max(a.start, b.start), a.matrix - b.matrix)
    if isinstance(a, HomCanonicalTail) and isinstance(b, HomCanonicalTail):
        return HomZeroTail(max(a.start, b.start))
    return HomTruncated()


def identity_tower_hom(f: Tower) -> TowerHom:
    levels = tuple(identity_hom(f.level(n)) for n in range(f.top + 1))
    return TowerHom(f, f, levels, tail=HomCanonicalTail(0))


def zero_tower_hom(source: Tower, target: Tower) -> TowerHom:
    k = min(source.top, target.top)
    levels = tuple(zero_hom(source.level(n), target.level(n)) for n in range(k + 1))
    return TowerHom(source, target, levels, tail=HomZeroTail(0))


# -- elementary tower operations -------------------------------------------------

def shift(f: Tower, r: int) -> Tower:
    """The tower with level n equal to F_{n+r}."""
    if r < 0:
        raise ValueError("shift amount must be >= 0")
    if r == 0:
        return f
    if f.can_extend():
        hi = f.top
        groups = tuple(f.level(n + r) for n in range(hi + 1))
        maps = tuple(f.transition(n + r) for n in range(1, hi + 1))
    else:
        if r > f.top:
            raise TruncatedTower("shift exceeds the represented prefix")
        groups = f.groups[r:]
        maps = f.maps[r:]
    return Tower(f.l, groups, maps, tail=ShiftOf(f, r), starred=f.starred)


def natural_map(f: Tower, r: int) -> TowerHom:
    """The canonical morphism F[r] -> F given by composed transitions."""
    if r == 0:
        return identity_tower_hom(f)
    src = shift(f, r)
    k = min(src.top, f.top)
    levels = tuple(f.composite(n, r) for n in range(k + 1))
    shape = classify_tail(f)
    tail: HomTail = HomTruncated()
    if shape is not None:
        if shape.module is None:
            tail = HomZeroTail(shape.start)
        else:
            tail = HomCanonicalTail(shape.start)
    return TowerHom(src, f, levels, tail=tail)


def mod_power(f: Tower, k: int) -> Tower:
    """Levelwise quotient by l^k with the induced transitions."""
    if k < 0:
        raise ValueError("power must be >= 0")
    p = f.l ** k
    groups = []
    for n in range(f.top + 1):
        q, _, _ = quotient_with_maps(f.level(n), p)
        groups.append(q)
    maps = tuple(hom_on_quotients(f.transition(n), p, p) for n in range(1, f.top + 1))
    return Tower(f.l, tuple(groups), maps, tail=QuotientOf(f, k))


def minimal_tail_start(groups: Sequence[FinAbGroup], maps: Sequence[GroupHom],
                       module: ZlModule, start: int) -> int:
    """Walk a verified eventually-l-adic start down while the canonical
    pattern keeps matching the represented levels."""
    while start > 0:
        n = start - 1
        if groups[n] != module.quotient_group(n + 1):
            break
        if n + 1 < len(groups) and maps[n] != module.quotient_projection(n + 2, n + 1):
            break
        start -= 1
    return start


def ladic_truncation(f: Tower) -> Tower:
    """The tower with level n equal to F_n / l^{n+1}."""
    groups = []
    for n in range(f.top + 1):
        q, _, _ = quotient_with_maps(f.level(n), f.l ** (n + 1))
        groups.append(q)
    maps = tuple(hom_on_quotients(f.transition(n), f.l ** (n + 1), f.l ** n)
                 for n in range(1, f.top + 1))
    shape = classify_tail(f)
    tail: TailRule = Truncated()
    if shape is not None:
        if shape.module is None:
            tail = ZeroTail(min(shape.start, f.top + 1))
        else:
            start = minimal_tail_start(groups, maps, shape.module,
                                       min(shape.start, f.top))
            tail = EventuallyLAdic(start, shape.module)
    try:
        return Tower(f.l, tuple(groups), maps, tail=tail)
    except ValueError:
        return Tower(f.l, tuple(groups), maps, tail=Truncated())


def direct_sum(f: Tower, g: Tower) -> Tower:
    """Levelwise direct sum with componentwise transitions."""
    if f.l != g.l:
        raise PrimeMismatch("direct sum of towers over different primes")
    if f.can_extend() and g.can_extend():
        hi = max(f.top, g.top)
    elif f.can_extend():
        hi = g.top
    elif g.can_extend():
        hi = f.top
    else:
        hi = min(f.top, g.top)
    groups = []
    maps = []
    for n in range(hi + 1):
        s, ia, ib, pa, pb = direct_sum_with_maps(f.level(n), g.level(n))
        groups.append(s)
        if n >= 1:
            _, ia0, ib0, _, _ = direct_sum_with_maps(f.level(n - 1), g.level(n - 1))
            mat = (ia0.matrix @ f.transition(n).matrix @ pa.matrix) + \
                  (ib0.matrix @ g.transition(n).matrix @ pb.matrix)
            maps.append(GroupHom(s, groups[n - 1], mat))
    return Tower(f.l, tuple(groups), tuple(maps), tail=SumOf(f, g))


def sum_embeddings(f: Tower, g: Tower, summed: Tower) -> tuple[TowerHom, TowerHom, TowerHom, TowerHom]:
    """(incl_f, incl_g, proj_f, proj_g) for a tower built by direct_sum."""
    hi = summed.top
    incl_f, incl_g, proj_f, proj_g = [], [], [], []
    for n in range(hi + 1):
        _, ia, ib, pa, pb = direct_sum_with_maps(f.level(n), g.level(n))
        incl_f.append(GroupHom(f.level(n), summed.level(n), ia.matrix))
        incl_g.append(GroupHom(g.level(n), summed.level(n), ib.matrix))
        proj_f.append(GroupHom(summed.level(n), f.level(n), pa.matrix))
        proj_g.append(GroupHom(summed.level(n), g.level(n), pb.matrix))
    return (TowerHom(f, summed, tuple(incl_f)),
            TowerHom(g, summed, tuple(incl_g)),
            TowerHom(summed, f, tuple(proj_f)),
            TowerHom(summed, g, tuple(proj_g)))


# -- levelwise kernels, images, cokernels -----------------------------------------

def _induce_sub_transitions(parent: Tower, data: list[tuple[FinAbGroup, GroupHom]],
                            tail: TailRule) -> tuple[Tower, TowerHom]:
    groups = tuple(g for g, _ in data)
    incls = tuple(i for _, i in data)
    maps = []
    for n in range(1, len(data)):
        u = parent.transition(n)
        cols = []
        for j in range(groups[n].rank):
            y = u.matrix.apply(incls[n].matrix.column(j))
            z = solve_mod(incls[n - 1].matrix, parent.level(n - 1).invariant_factors, y)
            if z is None:
                raise PreconditionViolated(f"sub-tower not closed under transition at level {n}")
            cols.append(z)
        maps.append(GroupHom(groups[n], groups[n - 1],
                             IntMatrix.from_columns(cols, rows=groups[n - 1].rank)))
    try:
        tower = Tower(parent.l, groups, tuple(maps), tail=tail)
    except ValueError:
        tower = Tower(parent.l, groups, tuple(maps), tail=Truncated())
    return tower, TowerHom(tower, parent, incls)


def _induce_quot_transitions(parent: Tower, data: list[tuple[FinAbGroup, GroupHom, IntMatrix]],
                             tail: TailRule) -> tuple[Tower, TowerHom]:
    groups = tuple(g for g, _, _ in data)
    projs = tuple(p for _, p, _ in data)
    maps = []
    for n in range(1, len(data)):
        u = parent.transition(n)
        section = data[n][2]
        mat = projs[n - 1].matrix @ u.matrix @ section
        maps.append(GroupHom(groups[n], groups[n - 1], mat))
    try:
        tower = Tower(parent.l, groups, tuple(maps), tail=tail)
    except ValueError:
        tower = Tower(parent.l, groups, tuple(maps), tail=Truncated())
    return tower, TowerHom(parent, tower, projs)


def levelwise_kernel(f: TowerHom) -> tuple[Tower, TowerHom]:
    """(K, incl) with K_n = ker(f_n) and the induced transitions."""
    data = []
    for n in range(f.top + 1):
        fn = f.level(n)
        if fn.is_zero():
            data.append((fn.source, identity_hom(fn.source)))
        else:
            data.append(hom_kernel(fn))
    tail: TailRule = Truncated()
    if isinstance(f.tail, HomZeroTail):
        tail = f.source.tail
    return _induce_sub_transitions(f.source, data, tail)


def levelwise_image(f: TowerHom) -> tuple[Tower, TowerHom]:
    """(I, incl) with I_n = im(f_n) inside the target."""
    data = []
    surjective_everywhere = True
    zero_everywhere = True
    for n in range(f.top + 1):
        fn = f.level(n)
        if fn.is_zero():
            surjective_everywhere = surjective_everywhere and fn.target.is_trivial()
            data.append((trivial_group(f.source.l), zero_hom(trivial_group(f.source.l), fn.target)))
        elif is_surjective(fn):
            zero_everywhere = False
            data.append((fn.target, identity_hom(fn.target)))
        else:
            surjective_everywhere = False
            zero_everywhere = False
            data.append(hom_image(fn))
    tail: TailRule = Truncated()
    if isinstance(f.tail, HomZeroTail):
        tail = ZeroTail(min(f.tail.start, f.top + 1))
    elif isinstance(f.tail, HomCanonicalTail) and surjective_everywhere:
        tail = f.target.tail
    return _induce_sub_transitions(f.target, data, tail)


def levelwise_cokernel(f: TowerHom) -> tuple[Tower, TowerHom]:
    """(C, proj) with C_n = coker(f_n) and the induced transitions."""
    module_route = None
    if isinstance(f.tail, HomModuleTail):
        src_shape = classify_tail(f.source)
        tgt_shape = classify_tail(f.target)
        sm = _eventually_module(f.source)
        tm = _eventually_module(f.target)
        if sm is not None and tm is not None:
            coker_mod, proj_mat, lift_mat = module_cokernel(f.tail.matrix, sm, tm)
            start = max(f.tail.start, src_shape.start, tgt_shape.start)
            module_route = (start, coker_mod, proj_mat, lift_mat)
    data = []
    for n in range(f.top + 1):
        fn = f.level(n)
        if module_route is not None and n >= module_route[0]:
            _, coker_mod, proj_mat, lift_mat = module_route
            cq = coker_mod.quotient_group(n + 1)
            data.append((cq, GroupHom(fn.target, cq, proj_mat), lift_mat))
        elif fn.is_zero():
            data.append((fn.target, identity_hom(fn.target), IntMatrix.identity(fn.target.rank)))
        else:
            coker, proj = hom_cokernel(fn)
            # a section of proj: any integer preimages of the generators
            cols = []
            for j in range(coker.rank):
                y = tuple(1 if i == j else 0 for i in range(coker.rank))
                z = solve_mod(proj.matrix, coker.invariant_factors, y)
                cols.append(z)
            data.append((coker, proj, IntMatrix.from_columns(cols, rows=fn.target.rank)))
    tail: TailRule = Truncated()
    if isinstance(f.tail, HomZeroTail):
        tail = f.target.tail
    elif isinstance(f.tail, HomCanonicalTail):
        # canonical projections are surjective, so the cokernel dies
        all_surj = all(is_surjective(f.level(n)) for n in range(f.tail.start, f.top + 1))
        if all_surj:
            tail = ZeroTail(min(f.tail.start, f.top + 1))
    elif module_route is not None:
        start, coker_mod, _, _ = module_route
        if coker_mod.is_trivial():
            tail = ZeroTail(min(start, f.top + 1))
        elif start <= f.top:
            tail = EventuallyLAdic(start, coker_mod)
    return _induce_quot_transitions(f.target, data, tail)


# -- predicates -------------------------------------------------------------------

def is_zero_system(f: Tower, bound: Optional[int] = None) -> Verdict:
    """Whether some F[r] -> F vanishes; yes-certificates carry the radius."""
    bound = resolve_bound(f, bound)
    key = ("zero_system", bound)

    def compute() -> Verdict:
        shape = classify_tail(f)
        if shape is not None and shape.module is not None:
            # beyond the tail start every composite surjects onto a nonzero group
            return Verdict.no(
                witness=("level", shape.start),
                note="tail levels are nonzero module quotients with surjective transitions",
            )
        if shape is not None:
            # Eventually trivial: composites with n + r past the tail start are
            # zero for free, the finitely many below are computed exactly.  The
            # radius s0 always works, so the search never comes back empty.
            s0 = shape.start
            for r in range(0, max(bound, s0) + 1):
                if all(f.composite(n, r).is_zero() for n in range(max(0, s0 - r))):
                    return Verdict.yes(ZeroCertificate(r, scope="tail"))
        for r in range(0, min(bound, f.top) + 1):
            if all(f.composite(n, r).is_zero() for n in range(f.top - r + 1)):
                return Verdict.yes(ZeroCertificate(r, scope="prefix"))
        return Verdict.unknown(note=f"bound {bound} exhausted on a truncated tail")

    return f.cached(key, compute)


def _induced_quotient_map(f: Tower, n: int) -> Optional[GroupHom]:
    """The map F_{n+1}/l^{n+1} -> F_n induced by the transition, or None."""
    u = f.transition(n + 1)
    qs, _, lift = quotient_with_maps(f.level(n + 1), f.l ** (n + 1))
    try:
        return GroupHom(qs, f.level(n), u.matrix @ lift)
    except ValueError:
        return None


def is_l_adic(f: Tower) -> Verdict:
    """Annihilation l^{n+1} F_n = 0 plus induced isomorphisms F_{n+1}/l^{n+1} ~ F_n."""

    def compute() -> Verdict:
        shape = classify_tail(f)
        # With a certified tail, check levels up to where the tail's normal
        # form takes over (plus one square tying the prefix to the tail).
        if shape is not None:
            hi = max(f.top + 1, shape.start)
        else:
            hi = f.top
        for n in range(hi + 1):
            e = f.level(n).exponent()
            if e != 1 and (f.l ** (n + 1)) % e != 0:
                return Verdict.no(witness=("annihilator", n),
                                  note=f"l^{n + 1} does not kill level {n}")
        for n in range(hi):
            induced = _induced_quotient_map(f, n)
            if induced is None:
                return Verdict.no(witness=("not-factoring", n),
                                  note=f"transition {n + 1} does not factor through mod-l^{n + 1}")
            if not hom_is_isomorphism(induced):
                return Verdict.no(witness=("induced-map", n),
                                  note=f"induced map at level {n} is not an isomorphism")
        if shape is None:
            return Verdict.yes(LAdicCert(scope="prefix"),
                               note="verified on the represented prefix of a truncated tower")
        if shape.module is None:
            return Verdict.yes(LAdicCert(scope="tail"), note="eventually trivial tail")
        if shape.offset == 0:
            return Verdict.yes(LAdicCert(scope="tail"))
        # strictly shifted module quotients violate the annihilator at tail levels
        return Verdict.no(witness=("annihilator", max(shape.start, f.top + 1)),
                          note="tail levels carry l-power torsion above l^{n+1}")

    return f.cached(("l_adic",), compute)


def epi_forces_trivial(l_adic_tower: Tower, zero_system: Tower,
                       bound: Optional[int] = None) -> Verdict:
    """Certify that any levelwise epimorphism from the l-adic tower onto the
    zero system forces the zero system to vanish levelwise.

    The two computational facts checked per level are: composed transitions
    of the l-adic tower are surjective, and composed transitions of the zero
    system vanish at its certified radius.
    """
    la = is_l_adic(l_adic_tower)
    if not la:
        raise PreconditionViolated("first tower is not certified l-adic")
    z = is_zero_system(zero_system, bound)
    if not z:
        raise PreconditionViolated("second tower is not a certified zero system")
    r = z.certificate.radius
    hi = min(l_adic_tower.top, zero_system.top) - r
    for n in range(max(hi, 0) + 1):
        if not is_surjective(l_adic_tower.composite(n, r)):
            return Verdict.no(witness=("not-surjective", n))
        if not zero_system.composite(n, r).is_zero():
            return Verdict.no(witness=("not-zero", n))
    return Verdict.yes(certificate={"radius": r, "levels": max(hi, 0) + 1})
