"""Integral lattices given by symmetric integer Gram matrices."""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import NamedTuple, Sequence

from .abelian import check_prime


class LatticeError(ValueError):
    pass


class Signature(NamedTuple):
    n_plus: int
    n_minus: int
    n_zero: int

    def __str__(self) -> str:
        return f"({self.n_plus},{self.n_minus},{self.n_zero})"

    def __add__(self, other):  # componentwise, not tuple concatenation
        return Signature(*(a + b for a, b in zip(self, other)))


def _as_int(v, i, j) -> int:
    if isinstance(v, bool):
        raise LatticeError(f"entry ({i},{j}) is not an integer: {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    try:
        return v.__index__()
    except AttributeError:
        raise LatticeError(f"entry ({i},{j}) is not an integer: {v!r}") from None


class Lattice:
    """A free abelian group with a symmetric integral pairing.

    Instances are immutable.  Direct sums remember their summands, so
    determinant, signature and discriminant of large orthogonal sums are
    computed block by block and the full Gram matrix is only built when
    someone asks for it.
    """

    __slots__ = ("_gram", "_summands", "rank")

    def __init__(self, gram: Sequence[Sequence[int]]):
        rows = [tuple(_as_int(v, i, j) for j, v in enumerate(row)) for i, row in enumerate(gram)]
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise LatticeError(f"row {i} has {len(row)} entries, expected {n}")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise LatticeError(
                        f"Gram matrix is not symmetric: entry ({i},{j}) = {rows[i][j]} "
                        f"but ({j},{i}) = {rows[j][i]}"
                    )
        self._gram = tuple(rows)
        self._summands = None
        self.rank = n

    @classmethod
    def _from_summands(cls, summands: Sequence["Lattice"]) -> "Lattice":
        self = object.__new__(cls)
        flat = []
        for L in summands:
            flat.extend(L.summands())
        self._summands = tuple(L for L in flat if L.rank)
        self._gram = None
        self.rank = sum(L.rank for L in flat)
        return self

    @property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        if self._gram is None:
            n = self.rank
            rows = []
            off = 0
            for L in self._summands:
                for row in L.gram:
                    rows.append((0,) * off + row + (0,) * (n - off - L.rank))
                off += L.rank
            self._gram = tuple(rows)
        return self._gram

    def summands(self) -> tuple["Lattice", ...]:
        """The orthogonal summands this lattice was built from (itself if none)."""
        if self._summands is None:
            return (self,)
        return self._summands

    def components(self) -> list[tuple[list[int], "Lattice"]]:
        """Split into orthogonal blocks ``(basis indices, block)``.

        Uses recorded summands first, then connectivity of the nonzero
        off-diagonal pattern inside each summand.
        """
        out = []
        off = 0
        for L in self.summands():
            G = L.gram
            for idx in _connected(G):
                block = L if len(idx) == L.rank else Lattice([[G[a][b] for b in idx] for a in idx])
                out.append(([off + a for a in idx], block))
            off += L.rank
        return out

    def det(self) -> int:
        if self._summands is not None:
            return prod(L.det() for L in self._summands)
        return _leaf_det(self._gram)

    def signature(self) -> Signature:
        if self._summands is not None:
            s = Signature(0, 0, 0)
            for L in self._summands:
                s = s + L.signature()
            return s
        return _leaf_inertia(self._gram)

    def is_nondegenerate(self) -> bool:
        return self.det() != 0

    def is_unimodular(self) -> bool:
        return abs(self.det()) == 1

    def is_p_unimodular(self, p: int) -> bool:
        check_prime(p)
        return self.det() % p != 0

    def is_negative_definite(self) -> bool:
        return self.signature() == (0, self.rank, 0)

    def scaled(self, factor: int) -> "Lattice":
        if self._summands is not None:
            return Lattice._from_summands([L.scaled(factor) for L in self._summands])
        return Lattice([[factor * v for v in row] for row in self._gram])

    def __neg__(self) -> "Lattice":
        return self.scaled(-1)

    def pair(self, x: Sequence, y: Sequence):
        """``x . y`` for coordinate vectors (integers or rationals)."""
        G = self.gram
        total = 0
        for i, a in enumerate(x):
            if a:
                row = G[i]
                total += a * sum(row[j] * b for j, b in enumerate(y) if b)
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.rank == other.rank and self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.gram)

    def __repr__(self) -> str:
        if self.rank <= 6:
            return f"Lattice({[list(r) for r in self.gram]})"
        return f"Lattice(rank={self.rank})"

    # -- exchange formats ---------------------------------------------------

    def to_text(self) -> str:
        lines = [str(self.rank)]
        lines += [" ".join(str(v) for v in row) for row in self.gram]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"rank": self.rank, "gram": [list(row) for row in self.gram]}

    @classmethod
    def from_dict(cls, obj: dict) -> "Lattice":
        try:
            rank, gram = obj["rank"], obj["gram"]
        except (KeyError, TypeError):
            raise LatticeError('expected an object with "rank" and "gram"') from None
        L = cls(gram)
        if L.rank != rank:
            raise LatticeError(f"declared rank {rank} but Gram matrix has side {L.rank}")
        return L

    @classmethod
    def from_text(cls, text: str) -> "Lattice":
        """Parse ``n`` followed by ``n`` rows of ``n`` integers.

        A leading ``{`` switches to the JSON object format.
        """
        if text.lstrip().startswith("{"):
            try:
                return cls.from_dict(json.loads(text))
            except json.JSONDecodeError as e:
                raise LatticeError(f"bad JSON: {e}") from None
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise LatticeError("empty input")
        try:
            n = int(lines[0])
        except ValueError:
            raise LatticeError(f"first line must be the rank, got {lines[0]!r}") from None
        if n < 0:
            raise LatticeError(f"negative rank {n}")
        if len(lines) - 1 != n:
            raise LatticeError(f"expected {n} matrix rows, got {len(lines) - 1}")
        rows = []
        for i, ln in enumerate(lines[1:]):
            try:
                row = [int(tok) for tok in ln.split()]
            except ValueError:
                raise LatticeError(f"row {i} contains a non-integer: {ln!r}") from None
            if len(row) != n:
                raise LatticeError(f"row {i} has {len(row)} entries, expected {n}")
            rows.append(row)
        return cls(rows)


@lru_cache(maxsize=1024)
def _leaf_det(G) -> int:
    return bareiss_det(G)


@lru_cache(maxsize=1024)
def _leaf_inertia(G) -> "Signature":
    return inertia(G)


@lru_cache(maxsize=1024)
def _connected(G) -> tuple[tuple[int, ...], ...]:
    n = len(G)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        row = G[i]
        for j in range(i + 1, n):
            if row[j]:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(v) for v in sorted(groups.values()))


def bareiss_det(G: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer input."""
    A = [list(row) for row in G]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rk = A[k]
        for i in range(k + 1, n):
            ri = A[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def inertia(G: Sequence[Sequence[int]]) -> Signature:
    """Inertia indices by symmetric congruence reduction over the rationals.

    A nonzero diagonal pivot eliminates one row/column pair.  When the
    active block has zero diagonal but a nonzero entry ``a_ij``, the
    ``[[0, a], [a, 0]]`` block contributes one positive and one negative
    square and both indices are eliminated via its Schur complement.
    """
    A = [[Fraction(v) for v in row] for row in G]
    pos = neg = 0
    while A:
        n = len(A)
        k = next((i for i in range(n) if A[i][i]), None)
        if k is not None:
            p = A[k][k]
            if p > 0:
                pos += 1
            else:
                neg += 1
            col = [A[i][k] for i in range(n)]
            keep = [i for i in range(n) if i != k]
            A = [
                [A[i][j] - col[i] * col[j] / p for j in keep]
                for i in keep
            ]
            continue
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if A[i][j]), None)
        if pair is None:
            break
        i0, j0 = pair
        a = A[i0][j0]
        pos += 1
        neg += 1
        keep = [i for i in range(n) if i not in pair]
        # X^T B^{-1} X with B^{-1} = [[0, 1/a], [1/a, 0]]
        A = [
            [A[i][j] - (A[i][i0] * A[j0][j] + A[i][j0] * A[i0][j]) / a for j in keep]
            for i in keep
        ]
    return Signature(pos, neg, len(G) - pos - neg)


def det(L: Lattice) -> int:
    return L.det()


def signature(L: Lattice) -> Signature:
    return L.signature()


def is_unimodular(L: Lattice) -> bool:
    return L.is_unimodular()


def is_p_unimodular(L: Lattice, p: int) -> bool:
    return L.is_p_unimodular(p)


def direct_sum(*lattices: Lattice) -> Lattice:
    """Orthogonal direct sum; accepts any number of lattices (or one iterable)."""
    if len(lattices) == 1 and not isinstance(lattices[0], Lattice):
        lattices = tuple(lattices[0])
    return Lattice._from_summands(lattices)


def rank1(n: int) -> Lattice:
    return Lattice([[n]])


def root_lattice_A(n: int) -> Lattice:
    """Negative definite ``A_n``: -2 on the diagonal, 1 along the chain."""
    if n < 1:
        raise ValueError("A_n needs n >= 1")
    return Lattice([[-2 if i == j else (1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)])


def hyperbolic(scale: int = 2) -> Lattice:
    return Lattice([[0, scale], [scale, 0]])


A1 = root_lattice_A(1)
A2 = root_lattice_A(2)
A3 = root_lattice_A(3)
U2 = hyperbolic(2)


def standard(name: str, arg: int | None = None) -> Lattice:
    """Look up a standard lattice: ``rank1(n)``, ``A1``..``An``, ``U(scale)``."""
    key = name.strip()
    if key.startswith("rank1"):
        if arg is None:
            raise ValueError("rank1 needs its value")
        return rank1(arg)
    if key.upper().startswith("U"):
        return hyperbolic(2 if arg is None else arg)
    if key.upper().startswith("A") and key[1:].isdigit():
        return root_lattice_A(int(key[1:]))
    raise ValueError(f"unknown standard lattice {name!r}")

