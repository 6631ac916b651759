import random

import pytest
from hypothesis import given, settings, strategies as st

from arl.intmat import (
    IntMatrix,
    hermite_normal_form,
    kernel_basis,
    lattice_contains,
    lattice_eq,
    smith_normal_form,
    snf_with_inverses,
    solve,
)

from oracles import elementary_divisors_by_minors


def rows(m):
    return [list(r) for r in m.entries]


def test_snf_fixed_examples():
    _, d, _ = smith_normal_form(IntMatrix.diagonal([2, 3]))
    assert d.diagonal_values() == [1, 6]

    u, d, v = smith_normal_form(IntMatrix.identity(3))
    assert d.is_identity()

    _, d, _ = smith_normal_form(IntMatrix.zeros(2, 2))
    assert d.is_zero()


def test_snf_diag_is_canonical_and_deterministic():
    m = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
    u1, d1, v1 = smith_normal_form(m)
    u2, d2, v2 = smith_normal_form(IntMatrix.from_rows(rows(m)))
    assert (u1, d1, v1) == (u2, d2, v2)
    assert d1.diagonal_values() == elementary_divisors_by_minors(rows(m)) + [0] * (
        3 - len(elementary_divisors_by_minors(rows(m)))
    )


matrices = st.integers(0, 4).flatmap(
    lambda r: st.integers(0, 4).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-10, 10), min_size=c, max_size=c),
            min_size=r, max_size=r,
        ).map(lambda data: IntMatrix.from_rows(data, cols=c))
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_roundtrip_property(m):
    u, d, v = smith_normal_form(m)
    assert (u @ m @ v).entries == d.entries
    assert u.det() in (1, -1)
    assert v.det() in (1, -1)
    diag = d.diagonal_values()
    for i, val in enumerate(diag):
        assert val >= 0
        if i + 1 < len(diag) and val:
            assert diag[i + 1] % val == 0
    nonzero = [x for x in diag if x]
    assert nonzero == elementary_divisors_by_minors(rows(m))


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_snf_inverses(m):
    u, d, v, ui, vi = snf_with_inverses(m)
    assert (u @ ui).is_identity()
    assert (vi @ v).is_identity()


def test_solve_and_kernel():
    m = IntMatrix.from_rows([[2, 4], [0, 0]])
    assert solve(m, (6, 0)) is not None
    assert solve(m, (3, 0)) is None
    assert solve(m, (0, 1)) is None
    k = kernel_basis(m)
    assert all((m @ k).column(j) == (0, 0) for j in range(k.cols))


def test_lattice_membership():
    basis = IntMatrix.from_rows([[2, 0], [0, 3]])
    assert lattice_contains(basis, (4, 3))
    assert not lattice_contains(basis, (1, 0))
    # the same lattice from redundant generators
    same = IntMatrix.from_rows([[2, 0, 2], [3, 3, 0]])
    assert lattice_eq(basis, same)
    finer = IntMatrix.from_rows([[2, 0], [0, 4]])
    assert not lattice_eq(basis, finer)


def test_hnf_canonical_for_equal_lattices():
    rng = random.Random(5)
    base = IntMatrix.from_rows([[4, 2], [0, 6]])
    h0 = hermite_normal_form(base)
    for _ in range(25):
        cols = [list(base.column(j)) for j in range(base.cols)]
        extra = []
        for _ in range(rng.randint(0, 2)):
            coeffs = [rng.randint(-3, 3) for _ in cols]
            extra.append([sum(c * col[i] for c, col in zip(coeffs, cols))
                          for i in range(2)])
        shuffled = cols + extra
        rng.shuffle(shuffled)
        m = IntMatrix.from_columns(shuffled, rows=2)
        assert hermite_normal_form(m) == h0


def test_hnf_shape():
    h = hermite_normal_form(IntMatrix.from_rows([[2, 0, 8], [0, 4, 2]]))
    assert h.rows == h.cols == 2
    for i in range(2):
        assert h.entries[i][i] > 0
        for j in range(i + 1, 2):
            assert h.entries[i][j] == 0
        for j in range(i):
            assert 0 <= h.entries[i][j] < h.entries[i][i]


def test_hnf_rejects_rank_deficient():
    with pytest.raises(ValueError):
        hermite_normal_form(IntMatrix.from_rows([[1, 2], [0, 0]]))


def test_matrix_validation():
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1.5]])
    with pytest.raises(ValueError):
        IntMatrix(1, 2, ((1,),))


def test_det_exact():
    m = IntMatrix.from_rows([[10**12, 1], [1, 10**12]])
    assert m.det() == 10**24 - 1
