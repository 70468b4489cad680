import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings

from oracles import all_subgroups, dual_quotient_order
from strategies import symmetric_matrices
from totalreality.discriminant import (
    DiscSubgroup,
    discr,
    format_fraction,
    is_isotropic,
    kernel_quotient,
    orthogonal_complement,
    qmodz,
)
from totalreality.lattice import A1, A2, U2, Lattice, LatticeError, direct_sum, rank1

A2_POS = -A2


def subgroup_set(K):
    return frozenset(K.elements())


def test_qmodz_and_formatting():
    assert qmodz(Fraction(-2, 3)) == Fraction(1, 3)
    assert qmodz(5) == 0
    assert format_fraction(Fraction(4, 3)) == "4/3"
    assert format_fraction(Fraction(-1)) == "-1"


def test_discr_A2():
    F = discr(A2)
    assert F.factors == (3,)
    assert F.square((1,)) == Fraction(1, 3)
    assert str(F) == "Z3 | [[1/3]]"


def test_discr_U2():
    F = discr(U2)
    assert F.factors == (2, 2)
    assert F.bilinear == ((0, Fraction(1, 2)), (Fraction(1, 2), 0))


def test_discr_unimodular_and_degenerate():
    assert discr(rank1(1)).order == 1
    with pytest.raises(LatticeError):
        discr(Lattice([[0]]))


def test_isotropy_examples():
    F = discr(A2)
    assert is_isotropic(F.trivial())
    assert not is_isotropic(F.whole())
    G = discr(direct_sum(A2, A2_POS))
    diag = G.subgroup([(1, 1)]) if G.factors == (3, 3) else None
    # the diagonal of Z3 [1/3] + Z3 [2/3]
    K = next(
        DiscSubgroup(G, [x]) for x in G.elements()
        if G.element_order(x) == 3 and G.square(x) == 0
    )
    assert is_isotropic(K) and K.order == 3
    assert diag is not None


def test_complement_examples():
    F = discr(direct_sum(A2, A2))
    assert orthogonal_complement(F.trivial()).order == 9
    assert orthogonal_complement(F.whole()).order == 1
    # K = <(1,1)> has complement of order 3 containing... itself only when isotropic
    K = F.subgroup([(1, 1)])
    perp = orthogonal_complement(K)
    brute = {y for y in F.elements() if F.pair((1, 1), y) == 0}
    assert perp.order == 3 and subgroup_set(perp) == brute


def test_quotient_examples():
    G = discr(direct_sum(A2, A2_POS))
    assert kernel_quotient(G.trivial()).order == 9
    K = next(
        DiscSubgroup(G, [x]) for x in G.elements()
        if G.element_order(x) == 3 and G.square(x) == 0
    )
    assert kernel_quotient(K).order == 1
    F = discr(U2)
    Q = kernel_quotient(F.subgroup([(1, 1)]))
    assert Q.order == 1


@settings(max_examples=150, deadline=None)
@given(symmetric_matrices(max_rank=4, lo=-6, hi=6))
def test_discr_structure(G):
    L = Lattice(G)
    d = L.det()
    assume(d != 0)
    F = discr(L)
    assert F.order == abs(d)
    for g, m in zip(F.generators, F.factors):
        # g lies in the dual lattice and m g in L, with m minimal
        assert all(sum(G[i][j] * g[j] for j in range(L.rank)).denominator == 1 for i in range(L.rank))
        assert all((m * x).denominator == 1 for x in g)
        for k in range(1, m):
            if m % k == 0:
                assert any((k * x).denominator != 1 for x in g)
    for i, gi in enumerate(F.generators):
        for j, gj in enumerate(F.generators):
            assert F.bilinear[i][j] == qmodz(L.pair(gi, gj))
    if abs(d) <= 30 and L.rank <= 3:
        assert dual_quotient_order(G) == abs(d)


@settings(max_examples=100, deadline=None)
@given(symmetric_matrices(max_rank=4, lo=-6, hi=6))
def test_radical_is_trivial(G):
    L = Lattice(G)
    assume(L.det() != 0 and abs(L.det()) <= 10 ** 4)
    F = discr(L)
    assert F.is_nondegenerate()
    if F.order <= 200:
        basis = F.basis()
        radical = [x for x in F.elements() if all(F.pair(x, b) == 0 for b in basis)]
        assert radical == [F.zero()]


@settings(max_examples=80, deadline=None)
@given(symmetric_matrices(max_rank=3, lo=-5, hi=5))
def test_coordinates_roundtrip(G):
    L = Lattice(G)
    assume(L.det() != 0)
    F = discr(L)
    for x in itertools.islice(F.elements(), 40):
        v = F.lift(x)
        shifted = tuple(a + (i % 3) for i, a in enumerate(v))
        assert F.coordinates(shifted) == x


SMALL_FORMS = [
    direct_sum(A2, A2_POS),
    U2,
    direct_sum(rank1(2), rank1(-2)),
    direct_sum(A2, A2, A2),
    direct_sum(A1, A1, rank1(4)),
    direct_sum(U2, rank1(6)),
]


@pytest.mark.parametrize("L", SMALL_FORMS, ids=lambda L: f"det{L.det()}")
def test_subgroup_operations_exhaustive(L):
    F = discr(L)
    for S in all_subgroups(F.factors):
        gens = list(S)
        K = F.subgroup(gens)
        assert subgroup_set(K) == S and K.order == len(S)
        # bilinear isotropy: the pairing vanishes on K x K, not only on squares
        iso = all(F.pair(x, y) == 0 for x in S for y in S)
        assert is_isotropic(K) == iso
        perp = orthogonal_complement(K)
        brute = frozenset(y for y in F.elements() if all(F.pair(x, y) == 0 for x in S))
        assert subgroup_set(perp) == brute
        assert perp.order * K.order == F.order
        if iso:
            Q = kernel_quotient(K)
            assert Q.order * K.order ** 2 == F.order
            assert Q.is_nondegenerate()


def test_subgroup_relations():
    F = discr(direct_sum(A2, A2, A2))
    K = F.subgroup([(1, 1, 1)])
    assert (2, 2, 2) in K and (1, 0, 0) not in K
    assert K <= F.whole() and not F.whole() <= K
    assert K == F.subgroup([(2, 2, 2)])
    assert len({K, F.subgroup([(2, 2, 2)])}) == 1
    assert F.p_part(3).order == 27 and F.p_part(2).order == 1


@pytest.mark.parametrize("L", SMALL_FORMS, ids=lambda L: f"det{L.det()}")
def test_subgroup_isomorphism_type(L):
    F = discr(L)
    for S in all_subgroups(F.factors):
        K = F.subgroup(list(S))
        assert K.group.order == len(S)
        for p in (2, 3):
            killed = sum(1 for x in S if F.element_order(x) in (1, p))
            assert p ** K.ell_p(p) == killed
