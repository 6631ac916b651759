"""Finitely generated Z_l-modules in invariant-factor form.

A module is (+) Z/l^{a_1} + ... + Z/l^{a_k} + Z_l^rho with a_1 <= ... <= a_k.
Generators are ordered torsion-first (ascending exponent) then free, and all
finite quotients below reuse that order, so towers built from a module are
literally canonical level by level.

The textual form used in tower files is ``Zl^2 + Z/l^3 + Z/l`` with ``0`` for
the trivial module; the prime l is bound by the surrounding context.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from .errors import PrimeMismatch
from .groups import FinAbGroup, GroupHom
from .intmat import IntMatrix, snf_with_inverses


def _lval(n: int, l: int) -> int:
    v = 0
    while n % l == 0:
        n //= l
        v += 1
    return v


@dataclass(frozen=True)
class ZlModule:
    l: int
    torsion_exponents: tuple[int, ...]
    free_rank: int = 0
    operators: tuple[tuple[str, IntMatrix], ...] = ()

    def __post_init__(self):
        exps = tuple(int(a) for a in self.torsion_exponents)
        object.__setattr__(self, "torsion_exponents", exps)
        if self.l < 2:
            raise ValueError("prime must be >= 2")
        if any(a < 1 for a in exps):
            raise ValueError("torsion exponents must be >= 1")
        if list(exps) != sorted(exps):
            raise ValueError("torsion exponents must be sorted ascending")
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        ops = []
        for label, mat in sorted(self.operators, key=lambda kv: kv[0]):
            self._check_endo(mat, label)
            ops.append((label, self._reduce_endo(mat)))
        object.__setattr__(self, "operators", tuple(ops))

    def _check_endo(self, mat: IntMatrix, label: str):
        n = self.rank
        if mat.rows != n or mat.cols != n:
            raise ValueError(f"operator {label!r} has wrong shape")
        k = len(self.torsion_exponents)
        for j, aj in enumerate(self.torsion_exponents):
            for i in range(n):
                if i < k:
                    need = self.torsion_exponents[i] - aj
                    if need > 0 and mat.entries[i][j] % self.l ** need != 0:
                        raise ValueError(f"operator {label!r} not well-defined at ({i},{j})")
                elif mat.entries[i][j] != 0:
                    raise ValueError(f"operator {label!r} maps torsion into the free part")

    def _reduce_endo(self, mat: IntMatrix) -> IntMatrix:
        rows = []
        for i in range(self.rank):
            if i < len(self.torsion_exponents):
                m = self.l ** self.torsion_exponents[i]
                rows.append(tuple(x % m for x in mat.entries[i]))
            else:
                rows.append(tuple(mat.entries[i]))
        return IntMatrix(self.rank, self.rank, tuple(rows))

    # -- structure -----------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.torsion_exponents) + self.free_rank

    def is_trivial(self) -> bool:
        return self.rank == 0

    def is_torsion_free(self) -> bool:
        return not self.torsion_exponents

    def max_exponent(self) -> int:
        return self.torsion_exponents[-1] if self.torsion_exponents else 0

    def operator_labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.operators)

    def operator(self, label: str) -> IntMatrix:
        for lab, mat in self.operators:
            if lab == label:
                return mat
        raise KeyError(label)

    def with_operators(self, operators: Mapping[str, IntMatrix] | Sequence[tuple[str, IntMatrix]]) -> "ZlModule":
        items = operators.items() if isinstance(operators, Mapping) else operators
        return replace(self, operators=tuple(items))

    def without_operators(self) -> "ZlModule":
        return replace(self, operators=())

    def relation_matrix(self) -> IntMatrix:
        """Relations of the module as a Z-module presentation (torsion columns only)."""
        k = len(self.torsion_exponents)
        cols = []
        for j, a in enumerate(self.torsion_exponents):
            col = [0] * self.rank
            col[j] = self.l ** a
            cols.append(col)
        return IntMatrix.from_columns(cols, rows=self.rank)

    # -- finite quotients ------------------------------------------------------

    def quotient_group(self, power: int) -> FinAbGroup:
        """The finite group  self / l^power  on the module's own generators."""
        if power < 1:
            raise ValueError("quotient power must be >= 1")
        factors = [self.l ** min(a, power) for a in self.torsion_exponents]
        factors += [self.l ** power] * self.free_rank
        group = FinAbGroup(tuple(factors), prime_support=self.l)
        if self.operators:
            group = group.with_operators([(lab, mat) for lab, mat in self.operators])
        return group

    def quotient_projection(self, power_src: int, power_tgt: int) -> GroupHom:
        """Canonical projection  self/l^power_src -> self/l^power_tgt."""
        if power_tgt > power_src:
            raise ValueError("projection must decrease the power")
        src = self.quotient_group(power_src)
        tgt = self.quotient_group(power_tgt)
        return GroupHom(src, tgt, IntMatrix.identity(self.rank))

    def torsion_window_exponents(self, power: int) -> list[int]:
        """Exponents of the l^power-torsion subgroup (free part contributes none)."""
        return [min(a, power) for a in self.torsion_exponents]

    def direct_sum(self, other: "ZlModule") -> tuple["ZlModule", list[int], list[int]]:
        """(sum, index_self, index_other): positions of each summand's generators."""
        if other.l != self.l:
            raise PrimeMismatch("direct sum of modules over different primes")
        tagged = [(a, 0, i) for i, a in enumerate(self.torsion_exponents)] + \
                 [(a, 1, i) for i, a in enumerate(other.torsion_exponents)]
        order = sorted(range(len(tagged)), key=lambda t: (tagged[t][0], tagged[t][1], tagged[t][2]))
        exps = tuple(tagged[t][0] for t in order)
        rho = self.free_rank + other.free_rank
        total = len(exps) + rho
        idx_self = [0] * self.rank
        idx_other = [0] * other.rank
        for pos, t in enumerate(order):
            _, side, i = tagged[t]
            (idx_self if side == 0 else idx_other)[i] = pos
        for i in range(self.free_rank):
            idx_self[len(self.torsion_exponents) + i] = len(exps) + i
        for i in range(other.free_rank):
            idx_other[len(other.torsion_exponents) + i] = len(exps) + self.free_rank + i
        summed = ZlModule(self.l, exps, rho)
        labels = [lab for lab in self.operator_labels() if lab in other.operator_labels()]
        if labels:
            ops = []
            for label in labels:
                m = [[0] * total for _ in range(total)]
                for part, idx in ((self, idx_self), (other, idx_other)):
                    sigma = part.operator(label)
                    for i in range(part.rank):
                        for j in range(part.rank):
                            m[idx[i]][idx[j]] = sigma.entries[i][j]
                ops.append((label, IntMatrix.from_rows(m, cols=total)))
            summed = summed.with_operators(ops)
        return summed, idx_self, idx_other

    # -- text form ---------------------------------------------------------------

    def describe(self) -> str:
        parts = []
        if self.free_rank:
            parts.append(f"Zl^{self.free_rank}")
        for a in reversed(self.torsion_exponents):
            parts.append("Z/l" if a == 1 else f"Z/l^{a}")
        return " + ".join(parts) if parts else "0"

    @staticmethod
    def parse(text: str, l: int) -> "ZlModule":
        text = text.strip()
        if text == "0":
            return ZlModule(l, ())
        exps = []
        rho = 0
        for term in text.split("+"):
            term = term.strip()
            m = re.fullmatch(r"Zl(?:\^(\d+))?", term)
            if m:
                rho += int(m.group(1) or "1")
                continue
            m = re.fullmatch(r"Z/l(?:\^(\d+))?", term)
            if m:
                exps.append(int(m.group(1) or "1"))
                continue
            raise ValueError(f"cannot parse module term {term!r}")
        return ZlModule(l, tuple(sorted(exps)), rho)


def check_module_hom(mat: IntMatrix, source: ZlModule, target: ZlModule):
    """Validate that mat defines a Z_l-module map source -> target."""
    if source.l != target.l:
        raise PrimeMismatch("module hom across different primes")
    if mat.rows != target.rank or mat.cols != source.rank:
        raise ValueError("module hom has wrong shape")
    l = source.l
    kt = len(target.torsion_exponents)
    for j, aj in enumerate(source.torsion_exponents):
        for i in range(target.rank):
            if i < kt:
                need = target.torsion_exponents[i] - aj
                if need > 0 and mat.entries[i][j] % l ** need != 0:
                    raise ValueError(f"module hom not well-defined at ({i},{j})")
            elif mat.entries[i][j] != 0:
                raise ValueError("module hom maps torsion into the free part")


def zl_canonicalize(relations: IntMatrix, l: int) -> tuple[ZlModule, IntMatrix, IntMatrix]:
    """Canonical form of Z^n / col-span(relations) as a Z_l-module, with maps.

    Prime-to-l parts of the invariant factors are units over Z_l and are
    absorbed (a factor coprime to l contributes nothing).  Returns
    (module, proj, lift) like the group presentation: proj maps ambient
    coordinates to module coordinates (torsion generators first, then free),
    and proj @ lift is the identity.
    """
    n = relations.rows
    u, d, _, ui, _ = snf_with_inverses(relations)
    k = min(n, relations.cols)
    diag = [d.entries[i][i] for i in range(k)] + [0] * (n - k)
    torsion, free = [], []
    for i, val in enumerate(diag):
        if val == 0:
            free.append(i)
            continue
        v = _lval(val, l)
        if v > 0:
            torsion.append((v, i))
    torsion.sort()
    keep = [i for _, i in torsion] + free
    module = ZlModule(l, tuple(v for v, _ in torsion), len(free))
    proj = u.take_rows(keep)
    lift = ui.take_columns(keep)
    return module, proj, lift


def module_cokernel(mat: IntMatrix, source: ZlModule, target: ZlModule,
                    ) -> tuple[ZlModule, IntMatrix, IntMatrix]:
    """(coker, proj, lift) of a module map, with operators transported."""
    check_module_hom(mat, source, target)
    rel = mat.hstack(target.relation_matrix())
    coker, proj, lift = zl_canonicalize(rel, target.l)
    labels = [lab for lab in source.operator_labels() if lab in target.operator_labels()]
    if labels:
        ops = [(lab, proj @ target.operator(lab) @ lift) for lab in labels]
        coker = coker.with_operators(ops)
    return coker, proj, lift
