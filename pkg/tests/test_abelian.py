from math import gcd, prod

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import integer_matrices, symmetric_matrices
from totalreality.abelian import (
    FiniteAbelianGroup,
    cokernel,
    ell,
    ell_p,
    hermite_rows,
    integer_kernel,
    invariant_factors,
    matrix_rank,
    normalize_cyclic,
    p_primary,
    rational_inverse,
    reduce_by_hermite,
    smith_normal_form,
    solve_integer,
)
from totalreality.lattice import A2, U2


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def det(M):
    return int(sympy.Matrix(M).det())


@pytest.mark.parametrize(
    "M, diag",
    [
        ([[2, 0], [0, 3]], (1, 6)),
        ([[1, 0], [0, 1]], (1, 1)),
        ([[-2, 1], [1, -2]], (1, 3)),
        ([[0, 2], [2, 0]], (2, 2)),
    ],
)
def test_snf_examples(M, diag):
    assert list(smith_normal_form(M).diagonal) == list(diag)


@settings(max_examples=200, deadline=None)
@given(integer_matrices())
def test_snf_transforms(M):
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == [list(r) for r in D]
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [D[i][i] for i in range(min(len(M), len(M[0])))]
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert diag[: len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    # invariant factors are products of ratios of determinantal divisors
    assert len(nz) == sympy.Matrix(M).rank()


@settings(max_examples=100, deadline=None)
@given(symmetric_matrices(max_rank=4))
def test_cokernel_order_is_abs_det(G):
    d = det(G)
    if d == 0:
        with pytest.raises(ValueError):
            cokernel(G)
    else:
        assert cokernel(G).order == abs(d)


def test_cokernel_examples():
    assert cokernel(A2.gram) == FiniteAbelianGroup((3,))
    assert cokernel(U2.gram) == FiniteAbelianGroup((2, 2))
    assert cokernel([[1]]).is_trivial()


def test_group_invariants():
    Z3 = FiniteAbelianGroup((3,))
    assert (ell(Z3), ell_p(Z3, 3), ell_p(Z3, 5)) == (1, 1, 0)
    assert FiniteAbelianGroup((2, 2)).ell_p(2) == 2
    Z6 = FiniteAbelianGroup((6,))
    assert p_primary(Z6, 2) == FiniteAbelianGroup((2,))
    assert p_primary(Z6, 3) == FiniteAbelianGroup((3,))
    assert p_primary(FiniteAbelianGroup((3, 9)), 3) == FiniteAbelianGroup((3, 9))
    assert p_primary(Z3, 2).is_trivial()
    assert str(FiniteAbelianGroup((2, 6))) == "Z2 ⊕ Z6"
    assert str(FiniteAbelianGroup()) == "0"
    with pytest.raises(ValueError):
        FiniteAbelianGroup((2, 3))
    with pytest.raises(ValueError):
        Z3.ell_p(9)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 60), max_size=5))
def test_invariant_factors(orders):
    fs = invariant_factors(orders)
    assert prod(fs) == prod(orders)
    assert all(b % a == 0 for a, b in zip(fs, fs[1:]))
    # ell_p counts the cyclic pieces divisible by p
    for p in (2, 3, 5, 7):
        assert FiniteAbelianGroup(fs).ell_p(p) == sum(1 for o in orders if o % p == 0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 40), min_size=1, max_size=4))
def test_normalize_cyclic_is_isomorphism(orders):
    factors, gens, coords = normalize_cyclic(orders)
    assert tuple(factors) == invariant_factors(orders)

    def vec(sparse):
        v = [0] * len(orders)
        for j, a in sparse:
            v[j] = (v[j] + a) % orders[j]
        return v

    gvecs = [vec(g) for g in gens]
    # g_i has order exactly d_i
    for gv, d in zip(gvecs, factors):
        o = 1
        for x, m in zip(gv, orders):
            o = o * (m // gcd(x, m)) // gcd(o, m // gcd(x, m))
        assert o == d
    # z_j is recovered from the new generators, so the map is onto
    for j, c in enumerate(coords):
        acc = [0] * len(orders)
        for i, a in c:
            acc = [(x + a * y) % m for x, y, m in zip(acc, gvecs[i], orders)]
        assert acc == [int(k == j) % orders[k] for k in range(len(orders))]


@settings(max_examples=150, deadline=None)
@given(integer_matrices(max_rows=4, max_cols=5))
def test_kernel_and_hermite(A):
    n = len(A[0])
    K = integer_kernel(A)
    assert len(K) == n - matrix_rank(A)
    for v in K:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)
    H = hermite_rows(A)
    assert len(H) == matrix_rank(A)
    for row in A:
        assert reduce_by_hermite(row, H) is not None


def test_solve_integer():
    assert solve_integer([[2, 0], [0, 3]], [4, 3]) == [2, 1]
    assert solve_integer([[2, 0], [0, 3]], [1, 0]) is None
    inv = rational_inverse([[2, 1], [1, 1]])
    assert matmul(inv, [[2, 1], [1, 1]]) == [[1, 0], [0, 1]]
