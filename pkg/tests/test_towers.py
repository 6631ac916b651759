import pytest

from arl.errors import PreconditionViolated, PrimeMismatch, TruncatedTower
from arl.groups import (
    FinAbGroup,
    GroupHom,
    identity_hom,
    is_exact_at,
    trivial_group,
    zero_hom,
)
from arl.intmat import IntMatrix
from arl.limits import to_tower
from arl.towers import (
    EventuallyLAdic,
    HomModuleTail,
    Tower,
    TowerHom,
    Truncated,
    ZeroTail,
    classify_tail,
    constant_tower,
    direct_sum,
    epi_forces_trivial,
    is_l_adic,
    is_zero_system,
    ladic_truncation,
    levelwise_cokernel,
    levelwise_image,
    levelwise_kernel,
    mod_power,
    natural_map,
    shift,
    sum_embeddings,
)
from arl.zlmod import ZlModule


L = 2
ZL = ZlModule(L, (), 1)


def zl_tower(levels=8):
    return to_tower(ZL, levels)


def zero_tail_tower(nontrivial=3, levels=6):
    g = FinAbGroup((L,), prime_support=L)
    groups = [g] * nontrivial + [trivial_group(L)] * (levels - nontrivial)
    maps = []
    for n in range(1, levels):
        maps.append(zero_hom(groups[n], groups[n - 1]) if groups[n].is_trivial()
                    else identity_hom(g))
    return Tower(L, tuple(groups), tuple(maps), tail=ZeroTail(nontrivial))


class TestConstruction:
    def test_levels_must_be_l_local(self):
        g = FinAbGroup((2,))
        with pytest.raises(ValueError):
            Tower(2, (g,), ())

    def test_transition_endpoints_checked(self):
        g = FinAbGroup((2,), prime_support=2)
        h = FinAbGroup((4,), prime_support=2)
        with pytest.raises(ValueError):
            Tower(2, (g, h), (identity_hom(g),))

    def test_tail_consistency_eventually_l_adic(self):
        t = zl_tower(4)
        with pytest.raises(ValueError):
            Tower(L, t.groups, t.maps, tail=EventuallyLAdic(0, ZlModule(L, (1,))))

    def test_zero_tail_demands_trivial_levels(self):
        g = FinAbGroup((2,), prime_support=2)
        with pytest.raises(ValueError):
            Tower(2, (g, g), (identity_hom(g),), tail=ZeroTail(0))


class TestShift:
    def test_zero_shift_is_same_object(self):
        t = zl_tower()
        assert shift(t, 0) is t

    def test_shift_levels(self):
        t = zl_tower()
        s = shift(t, 1)
        assert s.level(0).invariant_factors == (4,)
        assert s.level(3).invariant_factors == (32,)

    def test_shift_composes(self):
        t = zl_tower()
        assert shift(shift(t, 1), 2).levelwise_equal(shift(t, 3))

    def test_shift_of_zero_tail(self):
        n = zero_tail_tower(3)
        s = shift(n, 3)
        assert all(s.level(k).is_trivial() for k in range(s.top + 1))

    def test_truncated_shift_shrinks(self):
        t = Tower(L, zl_tower(4).groups, zl_tower(4).maps)
        s = shift(t, 1)
        assert s.top == 2
        with pytest.raises(TruncatedTower):
            shift(t, 9)


class TestNaturalMap:
    def test_r0_is_identity(self):
        t = zl_tower()
        nm = natural_map(t, 0)
        assert all(nm.level(n).matrix.is_identity() for n in range(t.top + 1))

    def test_r1_is_reduction(self):
        t = zl_tower()
        nm = natural_map(t, 1)
        assert nm.level(0).source.invariant_factors == (4,)
        assert nm.level(0).matrix.entries == ((1,),)

    def test_zero_transitions_give_zero_map(self):
        g = FinAbGroup((L,), prime_support=L)
        t = constant_tower(L, g, 5, transition=zero_hom(g, g))
        nm = natural_map(t, 1)
        assert all(nm.level(n).is_zero() for n in range(nm.top + 1))


class TestZeroSystem:
    def test_constant_zero_maps(self):
        g = FinAbGroup((L,), prime_support=L)
        t = constant_tower(L, g, 5, transition=zero_hom(g, g))
        v = is_zero_system(t)
        assert v and v.certificate.radius == 1

    def test_l_adic_is_not_zero(self):
        v = is_zero_system(zl_tower())
        assert v.is_no

    def test_finite_support(self):
        v = is_zero_system(zero_tail_tower(3))
        assert v and v.certificate.radius == 3 and v.certificate.scope == "tail"

    def test_four_nontrivial_levels_radius_four(self):
        # nontrivial through level 3 with identity maps below, trivial beyond
        v = is_zero_system(zero_tail_tower(4, 7))
        assert v and v.certificate.radius == 4

    def test_certified_tail_never_unknown(self):
        # the claimed radius sits just past the prefix; the tail still forces it
        g = FinAbGroup((L,), prime_support=L)
        t = Tower(L, (g, g, g), (identity_hom(g), identity_hom(g)),
                  tail=ZeroTail(3))
        v = is_zero_system(t)
        assert v and v.certificate.radius == 3

    def test_truncated_unknown_when_bound_exhausted(self):
        g = FinAbGroup((L,), prime_support=L)
        t = constant_tower(L, g, 5)  # identity transitions, truncated
        v = is_zero_system(t)
        assert v.is_unknown


class TestLAdic:
    def test_to_tower_is_l_adic(self):
        v = is_l_adic(zl_tower())
        assert v and v.certificate.scope == "tail"

    def test_constant_quotient_tower(self):
        t = to_tower(ZlModule(L, (1,)), 6)
        assert is_l_adic(t)

    def test_mult_l_transitions_rejected_at_level_zero(self):
        t = zl_tower(6)
        bad = tuple(
            GroupHom(t.level(n), t.level(n - 1), IntMatrix.from_rows([[L]]))
            for n in range(1, 6)
        )
        b = Tower(L, tuple(t.level(n) for n in range(6)), bad)
        v = is_l_adic(b)
        assert v.is_no and v.witness[1] == 0

    def test_shift_not_l_adic(self):
        assert is_l_adic(shift(zl_tower(), 1)).is_no


class TestLevelwise:
    def test_kernel_of_identity_is_trivial(self):
        t = zl_tower(5)
        k, _ = levelwise_kernel(TowerHom(t, t, tuple(identity_hom(t.level(n)) for n in range(5))))
        assert all(k.level(n).is_trivial() for n in range(k.top + 1))

    def test_image_of_natural_map_is_everything(self):
        t = zl_tower(5)
        img, incl = levelwise_image(natural_map(t, 1))
        assert img.levelwise_equal(t, upto=img.top)
        assert is_l_adic(img)

    def test_cokernel_of_zero_is_target(self):
        t = zl_tower(5)
        c, proj = levelwise_cokernel(
            TowerHom(t, t, tuple(zero_hom(t.level(n), t.level(n)) for n in range(5)))
        )
        assert c.levelwise_equal(t, upto=c.top)

    def test_cokernel_of_mult_l_is_constant(self):
        t = zl_tower(6)
        mult = TowerHom(
            t, t,
            tuple(GroupHom(t.level(n), t.level(n), IntMatrix.from_rows([[L]]))
                  for n in range(6)),
            tail=HomModuleTail(0, IntMatrix.from_rows([[L]])),
        )
        c, _ = levelwise_cokernel(mult)
        assert all(c.level(n).invariant_factors == (L,) for n in range(c.top + 1))
        # the derived tail certifies the cokernel as the constant tower
        shape = classify_tail(c)
        assert shape is not None and shape.module == ZlModule(L, (1,))
        v = is_zero_system(c)
        assert v.is_no

    def test_kernel_of_mult_l_is_zero_system(self):
        t = zl_tower(6)
        mult = TowerHom(
            t, t,
            tuple(GroupHom(t.level(n), t.level(n), IntMatrix.from_rows([[L]]))
                  for n in range(6)),
            tail=HomModuleTail(0, IntMatrix.from_rows([[L]])),
        )
        k, _ = levelwise_kernel(mult)
        assert all(k.level(n).invariant_factors == (L,) for n in range(k.top + 1))
        v = is_zero_system(k)
        assert v and v.certificate.radius == 1

    def test_levelwise_exactness_of_kernel_sequences(self):
        t = zl_tower(6)
        mult = TowerHom(
            t, t,
            tuple(GroupHom(t.level(n), t.level(n), IntMatrix.from_rows([[L]]))
                  for n in range(6)),
        )
        k, incl = levelwise_kernel(mult)
        for n in range(k.top + 1):
            assert is_exact_at(incl.levels[n], mult.levels[n])


class TestModPower:
    def test_power_zero_kills_everything(self):
        t = mod_power(zl_tower(), 0)
        assert all(t.level(n).is_trivial() for n in range(t.top + 1))

    def test_power_one_is_constant(self):
        t = mod_power(zl_tower(), 1)
        assert all(t.level(n).invariant_factors == (L,) for n in range(t.top + 1))
        assert is_l_adic(t)

    def test_annihilated_tower_unchanged(self):
        t = to_tower(ZlModule(L, (1,)), 6)
        m = mod_power(t, 1)
        assert m.levelwise_equal(t)


class TestDirectSum:
    def test_sum_with_trivial(self):
        t = zl_tower(6)
        triv = to_tower(ZlModule(L, ()), 6)
        s = direct_sum(t, triv)
        assert s.levelwise_equal(t)

    def test_l_adic_sum_certifies(self):
        a = to_tower(ZlModule(L, (2,)), 6)
        b = to_tower(ZlModule(L, (), 1), 6)
        s = direct_sum(a, b)
        assert is_l_adic(s)

    def test_l_adic_plus_zero_system_not_l_adic(self):
        s = direct_sum(zl_tower(6), zero_tail_tower(3, 6))
        v = is_l_adic(s)
        assert v.is_no

    def test_prime_mismatch(self):
        with pytest.raises(PrimeMismatch):
            direct_sum(zl_tower(4), to_tower(ZlModule(3, (), 1), 4))

    def test_embeddings_compose(self):
        a, b = zl_tower(5), zero_tail_tower(2, 5)
        s = direct_sum(a, b)
        ia, ib, pa, pb = sum_embeddings(a, b, s)
        for n in range(s.top + 1):
            assert pa.levels[n].compose(ia.levels[n]).matrix.is_identity()
            assert pb.levels[n].compose(ib.levels[n]).matrix.is_identity()


class TestTruncation:
    def test_ladic_truncation_of_shift_recovers(self):
        t = zl_tower()
        g = ladic_truncation(shift(t, 2))
        assert g.levelwise_equal(t, upto=g.top)
        assert is_l_adic(g)


class TestEpiProperty:
    def test_epi_onto_zero_system_forces_trivial(self):
        t = zl_tower(6)
        n = zero_tail_tower(3, 6)
        assert epi_forces_trivial(t, n)

    def test_preconditions_enforced(self):
        with pytest.raises(PreconditionViolated):
            epi_forces_trivial(zero_tail_tower(2, 6), zero_tail_tower(3, 6))


class TestSingleLevel:
    def test_truncated_singleton(self):
        g = FinAbGroup((L,), prime_support=L)
        t = Tower(L, (g,), ())
        assert is_l_adic(t)  # vacuous on the prefix, scoped accordingly
        assert is_l_adic(t).certificate.scope == "prefix"
        assert is_zero_system(t).is_unknown

    def test_certified_singleton(self):
        t = to_tower(ZL, 1)
        v = is_l_adic(t)
        assert v and v.certificate.scope == "tail"
        assert natural_map(t, 0).top == 0

    def test_trivial_singleton_is_zero_system(self):
        t = Tower(L, (trivial_group(L),), ())
        assert is_zero_system(t)


class TestDefaultBound:
    def test_env_override(self, monkeypatch):
        from arl.towers import resolve_bound
        t = zl_tower(6)
        assert resolve_bound(t, None) == t.top
        assert resolve_bound(t, 2) == 2
        monkeypatch.setenv("ARL_DEFAULT_BOUND", "11")
        assert resolve_bound(t, None) == 11
        assert resolve_bound(t, 3) == 3

    def test_env_bound_limits_truncated_searches(self, monkeypatch):
        g = FinAbGroup((L,), prime_support=L)
        groups = [g] * 3 + [trivial_group(L)] * 3
        maps = []
        for n in range(1, 6):
            maps.append(zero_hom(groups[n], groups[n - 1]) if groups[n].is_trivial()
                        else identity_hom(g))
        t = Tower(L, tuple(groups), tuple(maps))  # truncated: prefix-only claims
        monkeypatch.setenv("ARL_DEFAULT_BOUND", "1")
        assert is_zero_system(t).is_unknown
        monkeypatch.setenv("ARL_DEFAULT_BOUND", "4")
        v = is_zero_system(t)
        assert v and v.certificate.scope == "prefix"

    def test_certified_tail_ignores_tight_bound(self, monkeypatch):
        monkeypatch.setenv("ARL_DEFAULT_BOUND", "1")
        v = is_zero_system(zero_tail_tower(3))
        assert v and v.certificate.radius == 3


class TestClassification:
    def test_sum_of_certified_tails(self):
        s = direct_sum(zl_tower(6), zero_tail_tower(3, 6))
        shape = classify_tail(s)
        assert shape is not None and shape.module == ZL and shape.start == 3

    def test_truncated_is_opaque(self):
        t = Tower(L, zl_tower(4).groups, zl_tower(4).maps, tail=Truncated())
        assert classify_tail(t) is None

    def test_shift_of_torsion_reanchors(self):
        t = to_tower(ZlModule(L, (2,)), 8)
        s = shift(t, 3)
        shape = classify_tail(s)
        assert shape is not None and shape.offset == 0
        assert shape.module == ZlModule(L, (2,))
