"""Discriminant forms ``L*/L`` with their Q/Z-valued bilinear pairing."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, lcm, prod
from typing import Iterable, Mapping, Sequence

from .abelian import (
    FiniteAbelianGroup,
    cokernel,
    hermite_rows,
    integer_kernel,
    invariant_factors,
    normalize_cyclic,
    rational_inverse,
    reduce_by_hermite,
    smith_normal_form,
    solve_integer,
)
from .lattice import Lattice, LatticeError


def qmodz(x) -> Fraction:
    """Reduce a rational into ``[0, 1)``: the canonical representative in Q/Z."""
    return Fraction(x) % 1


def format_fraction(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class DiscriminantForm:
    """A finite abelian group with a symmetric pairing into Q/Z.

    Elements are integer coordinate vectors with respect to ``generators``,
    which are rational vectors in ``lattice ⊗ Q``; the pairing is
    ``x.G.y mod 1`` in the ambient lattice.  ``base`` lists rational
    vectors spanning the lattice being quotiented out (``None`` means the
    ambient lattice itself, as for ``discr L``).
    """

    def __init__(self, lattice: Lattice, group: FiniteAbelianGroup, generators, base=None):
        self.lattice = lattice
        self.group = group
        # a zero-argument callable defers building the generators
        self._make_generators = generators if callable(generators) else None
        if self._make_generators is None:
            self._set_generators(generators)
        self.base = None if base is None else tuple(tuple(Fraction(v) for v in row) for row in base)

    def _set_generators(self, generators) -> None:
        sparse = [
            dict(g) if isinstance(g, Mapping) else {i: Fraction(v) for i, v in enumerate(g) if v}
            for g in generators
        ]
        if len(sparse) != self.group.ell():
            raise ValueError("one generator per invariant factor expected")
        self.__dict__["_sparse"] = sparse

    @cached_property
    def _sparse(self) -> list[dict[int, Fraction]]:
        self._set_generators(self._make_generators())
        return self.__dict__["_sparse"]

    @property
    def factors(self) -> tuple[int, ...]:
        return self.group.invariant_factors

    @property
    def order(self) -> int:
        return self.group.order

    def ell(self) -> int:
        return self.group.ell()

    def ell_p(self, p: int) -> int:
        return self.group.ell_p(p)

    @cached_property
    def generators(self) -> tuple[tuple[Fraction, ...], ...]:
        n = self.lattice.rank
        out = []
        for g in self._sparse:
            v = [Fraction(0)] * n
            for i, a in g.items():
                v[i] = a
            out.append(tuple(v))
        return tuple(out)

    @cached_property
    def bilinear(self) -> tuple[tuple[Fraction, ...], ...]:
        G = self.lattice.gram
        m = len(self._sparse)
        B = [[Fraction(0)] * m for _ in range(m)]
        for i in range(m):
            gi = self._sparse[i]
            for j in range(i, m):
                gj = self._sparse[j]
                s = sum(a * G[p][q] * b for p, a in gi.items() for q, b in gj.items())
                B[i][j] = B[j][i] = qmodz(s)
        return tuple(tuple(r) for r in B)

    def reduce(self, a: Sequence[int]) -> tuple[int, ...]:
        if len(a) != len(self.factors):
            raise ValueError(f"element needs {len(self.factors)} coordinates, got {len(a)}")
        return tuple(int(x) % d for x, d in zip(a, self.factors))

    def pair(self, a: Sequence[int], b: Sequence[int]) -> Fraction:
        B = self.bilinear
        s = sum(x * B[i][j] * y for i, x in enumerate(a) if x for j, y in enumerate(b) if y)
        return qmodz(s)

    def square(self, a: Sequence[int]) -> Fraction:
        return self.pair(a, a)

    def element_order(self, a: Sequence[int]) -> int:
        return lcm(1, *(d // gcd(x, d) for x, d in zip(a, self.factors)))

    def lift(self, a: Sequence[int]) -> tuple[Fraction, ...]:
        v = [Fraction(0)] * self.lattice.rank
        for x, g in zip(a, self._sparse):
            if x:
                for i, c in g.items():
                    v[i] += x * c
        return tuple(v)

    def coordinates(self, x: Sequence) -> tuple[int, ...]:
        """Coordinates of the class of the rational vector ``x``.

        Raises ``ValueError`` when ``x`` does not represent an element.
        """
        n = self.lattice.rank
        base = self.base if self.base is not None else [
            tuple(int(i == j) for j in range(n)) for i in range(n)
        ]
        w = solve_integer(list(self.generators) + list(base), list(x))
        if w is None:
            raise ValueError("vector does not represent an element of this form")
        return self.reduce(w[: len(self.factors)])

    def elements(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(*(range(d) for d in self.factors))

    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.factors)

    def basis(self) -> list[tuple[int, ...]]:
        m = len(self.factors)
        return [tuple(int(i == j) for j in range(m)) for i in range(m)]

    def whole(self) -> "DiscSubgroup":
        return DiscSubgroup(self, self.basis())

    def trivial(self) -> "DiscSubgroup":
        return DiscSubgroup(self, [])

    def subgroup(self, generators) -> "DiscSubgroup":
        return DiscSubgroup(self, generators)

    def radical(self) -> "DiscSubgroup":
        return orthogonal_complement(self.whole())

    def is_nondegenerate(self) -> bool:
        return self.radical().order == 1

    def p_part(self, p: int) -> "DiscSubgroup":
        """The p-primary subgroup, generated by the p-parts of the generators."""
        gens = []
        for i, d in enumerate(self.factors):
            q = 1
            while d % (q * p) == 0:
                q *= p
            if q > 1:
                gens.append(tuple(d // q if j == i else 0 for j in range(len(self.factors))))
        return DiscSubgroup(self, gens)

    def __str__(self) -> str:
        rows = ", ".join("[" + ", ".join(format_fraction(v) for v in row) + "]" for row in self.bilinear)
        return f"{self.group} | [{rows}]"

    def __repr__(self) -> str:
        return f"<DiscriminantForm {self}>"


class DiscSubgroup:
    """Subgroup of a discriminant form, stored by a generating set.

    Membership and equality go through the Hermite form of the preimage
    lattice ``span(generators) + diag(d_i) Z^m``.
    """

    def __init__(self, form: DiscriminantForm, generators: Iterable[Sequence[int]]):
        self.form = form
        self.generators = tuple(form.reduce(g) for g in generators)
        m = len(form.factors)
        relations = [tuple(d if j == i else 0 for j in range(m)) for i, d in enumerate(form.factors)]
        self._hnf = tuple(tuple(r) for r in hermite_rows(list(self.generators) + relations))

    @property
    def order(self) -> int:
        return self.form.order // prod(r[next(k for k, a in enumerate(r) if a)] for r in self._hnf)

    @cached_property
    def group(self) -> FiniteAbelianGroup:
        """Isomorphism type: the preimage lattice modulo ``diag(d_i) Z^m``."""
        H = [list(r) for r in self._hnf]
        m = len(self.form.factors)
        rel = [solve_integer(H, [d if j == i else 0 for j in range(m)]) for i, d in enumerate(self.form.factors)]
        return cokernel(rel) if rel else FiniteAbelianGroup()

    def ell_p(self, p: int) -> int:
        return self.group.ell_p(p)

    def __contains__(self, a) -> bool:
        return reduce_by_hermite(self.form.reduce(a), [list(r) for r in self._hnf]) is not None

    def __le__(self, other: "DiscSubgroup") -> bool:
        return all(g in other for g in self.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiscSubgroup):
            return NotImplemented
        return self.form.factors == other.form.factors and self._hnf == other._hnf

    def __hash__(self) -> int:
        return hash(self._hnf)

    def elements(self) -> list[tuple[int, ...]]:
        """Enumerate every element (intended for small groups)."""
        seen = {self.form.zero()}
        frontier = [self.form.zero()]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = self.form.reduce([a + b for a, b in zip(x, g)])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def is_isotropic(self) -> bool:
        return is_isotropic(self)

    def __repr__(self) -> str:
        return f"<DiscSubgroup order={self.order} gens={list(self.generators)}>"


@lru_cache(maxsize=1024)
def _block_cyclic(gram: tuple) -> tuple[tuple[int, tuple[tuple[int, Fraction], ...]], ...]:
    """Cyclic factors ``(order, sparse dual generator)`` of one orthogonal block."""
    if len(gram) == 1:
        d = abs(gram[0][0])
        return ((d, ((0, Fraction(1, d)),)),) if d > 1 else ()
    _, D, V = smith_normal_form(gram)
    out = []
    for i in range(len(gram)):
        d = D[i][i]
        if d > 1:
            out.append((d, tuple((r, Fraction(V[r][i], d)) for r in range(len(gram)) if V[r][i])))
    return tuple(out)


def discr(L: Lattice) -> DiscriminantForm:
    """Discriminant form of a nondegenerate lattice.

    Each orthogonal block is put in Smith form ``U G V = D``; the column
    ``V[:, i] / d_i`` is a dual vector generating the ``i``-th cyclic
    factor.  Blocks are then merged into invariant-factor form.
    """
    if L.det() == 0:
        raise LatticeError("discriminant form needs a nondegenerate lattice")
    orders: list[int] = []
    pieces: list[tuple[list[int], tuple]] = []
    blocks = 0
    for idx, block in L.components():
        cyc = _block_cyclic(block.gram)
        if cyc:
            blocks += 1
            for d, lift in cyc:
                orders.append(d)
                pieces.append((idx, lift))

    def lifts(i: int) -> dict[int, Fraction]:
        idx, lift = pieces[i]
        return {idx[r]: c for r, c in lift}

    if blocks <= 1:
        # a single block is already in Smith form
        return DiscriminantForm(L, FiniteAbelianGroup(tuple(orders)), [lifts(i) for i in range(len(orders))])

    def build():
        _, gens, _ = normalize_cyclic(orders)
        out = []
        for combo in gens:
            v: dict[int, Fraction] = {}
            for j, a in combo:
                for i, c in lifts(j).items():
                    v[i] = v.get(i, 0) + a * c
            out.append({i: c for i, c in v.items() if c})
        return out

    return DiscriminantForm(L, FiniteAbelianGroup(invariant_factors(orders)), build)


def is_isotropic(K: DiscSubgroup) -> bool:
    """True iff the form vanishes identically on ``K``."""
    F = K.form
    gens = K.generators
    return all(F.pair(a, b) == 0 for i, a in enumerate(gens) for b in gens[i:])


def orthogonal_complement(K: DiscSubgroup) -> DiscSubgroup:
    """``{x : b(x, k) = 0 for all k in K}``, via an integer kernel computation."""
    F = K.form
    m = len(F.factors)
    if not K.generators:
        return F.whole()
    N = F.group.exponent
    B = F.bilinear
    # row t: N * b(e_i, k_t) as an integer, one column per coordinate i
    C = [[int(N * qmodz(sum(B[i][j] * k[j] for j in range(m)))) for i in range(m)] for k in K.generators]
    t = len(C)
    A = [C[r] + [N if c == r else 0 for c in range(t)] for r in range(t)]
    ker = integer_kernel(A, m + t)
    return DiscSubgroup(F, [row[:m] for row in ker])


def kernel_quotient(K: DiscSubgroup) -> DiscriminantForm:
    """The form induced on ``K^perp / K`` for an isotropic ``K``."""
    if not is_isotropic(K):
        raise ValueError("subgroup is not isotropic")
    F = K.form
    Kp = orthogonal_complement(K)
    Bp = [list(r) for r in Kp._hnf]
    R = [[int(v) for v in row] for row in _matmul(K._hnf, rational_inverse(Bp))]
    _, D, V = smith_normal_form(R)
    Vinv = rational_inverse(V)
    m = len(F.factors)
    factors, coords = [], []
    for i in range(m):
        if D[i][i] > 1:
            factors.append(D[i][i])
            coords.append([int(v) for v in _matmul([Vinv[i]], Bp)[0]])
    gens = [F.lift(c) for c in coords]
    base = [tuple(int(i == j) for j in range(F.lattice.rank)) for i in range(F.lattice.rank)]
    base += [F.lift(k) for k in K.generators]
    if F.base is not None:
        base += list(F.base)
    return DiscriminantForm(F.lattice, FiniteAbelianGroup(tuple(factors)), gens, base=base)


def _matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]
