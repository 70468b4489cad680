"""Finite-index and primitive extensions of lattices.

Overlattices are built inside ``S ⊗ Q`` from an isotropic subgroup of
``discr S``; gluing two lattices along an anti-isometry of (parts of)
their discriminant forms is the special case where the subgroup is a
graph.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .abelian import (
    _common_denominator,
    hermite_rows,
    integer_kernel,
    rational_inverse,
    solve_integer,
)
from .discriminant import DiscSubgroup, DiscriminantForm, _matmul, discr, qmodz
from .lattice import Lattice, LatticeError, direct_sum


class ExtensionError(ValueError):
    pass


def overlattice_basis(S: Lattice, K: DiscSubgroup) -> list[list[Fraction]]:
    """Rows (in ``S ⊗ Q`` coordinates) of a basis of ``S + lifts(K)``."""
    F = K.form
    if F.lattice != S:
        raise ExtensionError("subgroup does not live in discr S")
    n = S.rank
    lifts = [F.lift(k) for k in K.generators]
    N = _common_denominator(lifts)
    rows = [[N * int(i == j) for j in range(n)] for i in range(n)]
    rows += [[int(N * v) for v in lift] for lift in lifts]
    H = hermite_rows(rows)
    return [[Fraction(v, N) for v in row] for row in H]


def extend_by_kernel(S: Lattice, K: DiscSubgroup, *, with_embedding: bool = False):
    """The overlattice ``M ⊃ S`` with ``M / S = K``.

    Raises ``ExtensionError`` if the pairing on ``M`` is not integral,
    which happens exactly when ``K`` is not isotropic.  With
    ``with_embedding=True`` returns ``(M, E)`` where row ``i`` of ``E``
    gives the ``i``-th basis vector of ``S`` in the basis of ``M``.
    """
    T = overlattice_basis(S, K)
    G = S.gram
    gram = _matmul(_matmul(T, G), [list(c) for c in zip(*T)])
    for i, row in enumerate(gram):
        for j, v in enumerate(row):
            if v.denominator != 1:
                raise ExtensionError(
                    f"subgroup is not isotropic: extended pairing ({i},{j}) = {v} is not integral"
                )
    M = Lattice([[int(v) for v in row] for row in gram])
    if not with_embedding:
        return M
    E = [[int(v) for v in row] for row in rational_inverse(T)]
    return M, E


def kernel_of_extension(S: Lattice, M: Lattice, embedding: Sequence[Sequence[int]]) -> DiscSubgroup:
    """The subgroup ``M / S`` of ``discr S`` for a finite-index embedding.

    ``embedding[i]`` is the image of the ``i``-th basis vector of ``S``
    written in the basis of ``M``.
    """
    E = [list(map(int, row)) for row in embedding]
    if len(E) != S.rank or any(len(row) != M.rank for row in E):
        raise ExtensionError(f"embedding must be {S.rank}x{M.rank}")
    if S.rank != M.rank:
        raise ExtensionError("finite-index extension needs equal ranks")
    pulled = _matmul(_matmul(E, M.gram), [list(c) for c in zip(*E)])
    if any(tuple(r) != row for r, row in zip(pulled, S.gram)):
        raise ExtensionError("embedding does not preserve the pairing")
    try:
        T = rational_inverse(E)
    except ValueError:
        raise ExtensionError("embedding has infinite index") from None
    F = discr(S)
    return DiscSubgroup(F, [F.coordinates(row) for row in T])


def _as_pairs(kappa) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    if isinstance(kappa, Mapping):
        items = kappa.items()
    else:
        items = kappa
    return [(tuple(x), tuple(y)) for x, y in items]


def graph_subgroup(S: Lattice, N: Lattice, kappa, *, check: bool = True) -> tuple[Lattice, DiscSubgroup]:
    """``S ⊕ N`` and the graph of ``kappa`` inside ``discr(S ⊕ N)``.

    ``kappa`` is a sequence (or mapping) of pairs ``(x, y)``, ``x`` in
    ``discr S`` coordinates and ``y`` in ``discr N`` coordinates, giving
    the images of generators of the domain.
    """
    FS, FN = discr(S), discr(N)
    pairs = [(FS.reduce(x), FN.reduce(y)) for x, y in _as_pairs(kappa)]
    if check:
        for (x1, y1), (x2, y2) in itertools.combinations_with_replacement(pairs, 2):
            if FN.pair(y1, y2) != qmodz(-FS.pair(x1, x2)):
                raise ExtensionError(f"kappa is not an anti-isometry on the pair {x1}, {x2}")
    SN = direct_sum(S, N)
    F = discr(SN)
    gens = [F.coordinates(FS.lift(x) + FN.lift(y)) for x, y in pairs]
    graph = DiscSubgroup(F, gens)
    if check:
        dom = DiscSubgroup(FS, [x for x, _ in pairs])
        img = DiscSubgroup(FN, [y for _, y in pairs])
        if graph.order != dom.order:
            raise ExtensionError("kappa is not a well-defined homomorphism")
        if graph.order != img.order:
            raise ExtensionError("kappa is not injective")
    return SN, graph


def glue_primitive(S: Lattice, N: Lattice, kappa, *, with_embedding: bool = False):
    """Glue ``S`` and ``N`` along the anti-isometry ``kappa``.

    Returns the overlattice of ``S ⊕ N`` whose kernel is the graph of
    ``kappa``; unimodular when ``kappa`` identifies all of ``discr S``
    with all of ``discr N``.
    """
    SN, graph = graph_subgroup(S, N, kappa)
    return extend_by_kernel(SN, graph, with_embedding=with_embedding)


def _hom_images(F: DiscriminantForm, G: DiscriminantForm):
    """All homomorphisms F -> G, as tuples of generator images."""
    choices = []
    for d in F.factors:
        choices.append([y for y in G.elements() if d % G.element_order(y) == 0])
    return itertools.product(*choices)


def anti_isometries(F: DiscriminantForm, G: DiscriminantForm) -> Iterable[list[tuple]]:
    """Enumerate bijective anti-isometries ``F -> G`` (small groups only).

    Each is yielded as the list of pairs ``(generator of F, image)``.
    """
    if F.factors != G.factors:
        return
    basis = F.basis()
    for images in _hom_images(F, G):
        ok = all(
            G.pair(images[i], images[j]) == qmodz(-F.pair(basis[i], basis[j]))
            for i in range(len(basis))
            for j in range(i, len(basis))
        )
        if ok and DiscSubgroup(G, images).order == G.order:
            yield list(zip(basis, images))


def rank_perp_lower_bound(ellp_S: int, ellp_K: int) -> int:
    """``max(0, ellp_S - 2 ellp_K)``: a floor for ``rank S^perp`` in a p-unimodular extension."""
    if ellp_S < 0 or ellp_K < 0:
        raise ValueError("ranks must be nonnegative")
    return max(0, ellp_S - 2 * ellp_K)


# -- sublattices of a fixed lattice -------------------------------------------


def orthogonal_sublattice(L: Lattice, rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], Lattice]:
    """``{x in L : x . r = 0 for all r}`` as (basis rows, Gram lattice)."""
    A = _matmul([list(r) for r in rows], L.gram) if rows else []
    ker = integer_kernel(A, L.rank)
    basis = hermite_rows(ker)
    gram = _matmul(_matmul(basis, L.gram), [list(c) for c in zip(*basis)]) if basis else []
    return basis, Lattice(gram)


def primitive_hull(L: Lattice, rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], Lattice, list[list[int]]]:
    """Saturation ``(span(rows) ⊗ Q) ∩ L``.

    Returns ``(basis rows, Gram lattice, embedding)``; ``embedding[i]``
    writes ``rows[i]`` in the hull basis.
    """
    rows = [list(map(int, r)) for r in rows]
    # x is in the hull iff it is orthogonal (in the dot product) to every
    # integer vector annihilating the rows
    ann = integer_kernel(rows, L.rank)
    basis = hermite_rows(integer_kernel(ann, L.rank)) if ann else hermite_rows(
        [[int(i == j) for j in range(L.rank)] for i in range(L.rank)]
    )
    gram = _matmul(_matmul(basis, L.gram), [list(c) for c in zip(*basis)])
    emb = []
    for r in rows:
        w = solve_integer(basis, r)
        if w is None:
            raise LatticeError("row not contained in its own hull")
        emb.append(w)
    return basis, Lattice(gram), emb


def rank_of_orthogonal(L: Lattice, rows: Sequence[Sequence[int]]) -> int:
    return orthogonal_sublattice(L, rows)[1].rank
