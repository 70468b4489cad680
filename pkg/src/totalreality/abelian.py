"""Integer matrix normal forms and finite abelian groups.

Everything here works over Python integers, so entries may grow without
overflow.  Matrices are plain lists of lists (row major).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import gcd, prod
from typing import Iterable, NamedTuple, Sequence

Matrix = list[list[int]]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    if isinstance(p, bool) or not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


@lru_cache(maxsize=4096)
def _factorize(n: int) -> tuple[tuple[int, int], ...]:
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return tuple(out.items())


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``|n|`` by trial division."""
    if n == 0:
        raise ValueError("cannot factor 0")
    return dict(_factorize(abs(n)))


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


class SNFResult(NamedTuple):
    """``left @ M @ right == diag`` with unimodular ``left`` and ``right``."""

    left: Matrix
    diag: Matrix
    right: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.diag[i][i] for i in range(min(len(self.diag), len(self.diag[0]) if self.diag else 0))]


def _swap_rows(A: Matrix, i: int, j: int) -> None:
    A[i], A[j] = A[j], A[i]


def _swap_cols(A: Matrix, i: int, j: int) -> None:
    for row in A:
        row[i], row[j] = row[j], row[i]


def _add_row(A: Matrix, dst: int, src: int, q: int) -> None:
    """row[dst] += q * row[src]"""
    rs, rd = A[src], A[dst]
    for k, v in enumerate(rs):
        if v:
            rd[k] += q * v


def _add_col(A: Matrix, dst: int, src: int, q: int) -> None:
    for row in A:
        v = row[src]
        if v:
            row[dst] += q * v


def smith_normal_form(M: Sequence[Sequence[int]]) -> SNFResult:
    """Smith normal form of a (possibly rectangular) integer matrix.

    Pivots are chosen as the nonzero entry of least absolute value in the
    active block.  The diagonal is returned nonnegative with each entry
    dividing the next; zeros come last.
    """
    A = [[int(v) for v in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    if any(len(row) != n for row in A):
        raise ValueError("ragged matrix")
    U = identity(m)
    V = identity(n)

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            _swap_rows(A, i, t)
            _swap_rows(U, i, t)
        if j != t:
            _swap_cols(A, j, t)
            _swap_cols(V, j, t)

        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        _add_row(A, i, t, -q)
                        _add_row(U, i, t, -q)
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        _add_col(A, j, t, -q)
                        _add_col(V, j, t, -q)
            # leftover remainders are smaller than |p|; move the least one in
            best = None
            for i in range(t + 1, m):
                v = A[i][t]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, "r")
            for j in range(t + 1, n):
                v = A[t][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), j, "c")
            if best is None:
                break
            _, k, kind = best
            if kind == "r":
                _swap_rows(A, k, t)
                _swap_rows(U, k, t)
            else:
                _swap_cols(A, k, t)
                _swap_cols(V, k, t)
        t += 1

    r = t
    for i in range(r):
        if A[i][i] < 0:
            A[i] = [-v for v in A[i]]
            U[i] = [-v for v in U[i]]

    # enforce d_i | d_{i+1}
    for i in range(r):
        for j in range(i + 1, r):
            a, b = A[i][i], A[j][j]
            if b % a == 0:
                continue
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            # [[x, y], [-b/g, a/g]] diag(a, b) [[1, -y b/g], [1, x a/g]] = diag(g, ab/g)
            ui, uj = U[i], U[j]
            U[i] = [x * p + y * q for p, q in zip(ui, uj)]
            U[j] = [-bg * p + ag * q for p, q in zip(ui, uj)]
            for row in V:
                p, q = row[i], row[j]
                row[i] = p + q
                row[j] = -y * bg * p + x * ag * q
            A[i][i], A[j][j] = g, a * bg
    return SNFResult(U, A, V)


def hermite_rows(rows: Iterable[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows only: echelon shape, positive pivots, entries
    above each pivot reduced into ``[0, pivot)``.
    """
    A = [[int(v) for v in r] for r in rows]
    A = [r for r in A if any(r)]
    if not A:
        return []
    n = len(A[0])
    out: Matrix = []
    col = 0
    while A and col < n:
        nz = [r for r in A if r[col]]
        rest = [r for r in A if not r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            nxt = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            nz = nxt
        piv = nz[0]
        if piv[col] < 0:
            piv = [-v for v in piv]
        for k, r in enumerate(out):
            q = r[col] // piv[col]
            if q:
                out[k] = [a - q * b for a, b in zip(r, piv)]
        out.append(piv)
        A = rest
        col += 1
    return out


def reduce_by_hermite(v: Sequence[int], basis: Matrix) -> list[int] | None:
    """Remainder of ``v`` modulo the HNF ``basis``; None if it cannot be zeroed.

    ``None`` means ``v`` is not in the row span.
    """
    v = list(v)
    for row in basis:
        c = next(k for k, a in enumerate(row) if a)
        if v[c] % row[c]:
            return None
        q = v[c] // row[c]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return v if not any(v) else None


def matrix_rank(M: Sequence[Sequence[int]]) -> int:
    if not M:
        return 0
    return len(hermite_rows(M))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """A finite abelian group in invariant-factor form ``Z_{d1} + ... + Z_{dm}``.

    ``invariant_factors`` is ascending with ``d_i | d_{i+1}`` and all
    ``d_i >= 2``; the empty tuple is the trivial group.
    """

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        fs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise ValueError(f"invariant factors {fs} do not form a divisibility chain")
        if any(d < 2 for d in fs):
            raise ValueError(f"invariant factors must be >= 2, got {fs}")

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "FiniteAbelianGroup":
        """Canonical form of ``Z_{o1} + Z_{o2} + ...`` for arbitrary orders."""
        return cls(invariant_factors(orders))

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def ell(self) -> int:
        """Minimal number of generators."""
        return len(self.invariant_factors)

    def ell_p(self, p: int) -> int:
        check_prime(p)
        return sum(1 for d in self.invariant_factors if d % p == 0)

    def p_primary(self, p: int) -> "FiniteAbelianGroup":
        check_prime(p)
        parts = []
        for d in self.invariant_factors:
            q = 1
            while d % p == 0:
                d //= p
                q *= p
            if q > 1:
                parts.append(q)
        return FiniteAbelianGroup(tuple(parts))

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " ⊕ ".join(f"Z{d}" for d in self.invariant_factors)


def ell(G: FiniteAbelianGroup) -> int:
    return G.ell()


def ell_p(G: FiniteAbelianGroup, p: int) -> int:
    return G.ell_p(p)


def p_primary(G: FiniteAbelianGroup, p: int) -> FiniteAbelianGroup:
    return G.p_primary(p)


def cokernel(M: Sequence[Sequence[int]]) -> FiniteAbelianGroup:
    """``Z^n / M Z^n`` for a nonsingular square integer matrix."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("cokernel needs a square matrix")
    diag = smith_normal_form(M).diagonal
    if n and diag[-1] == 0:
        raise ValueError("singular matrix has infinite cokernel")
    return FiniteAbelianGroup(tuple(d for d in diag if d > 1))


def invariant_factors(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors of ``Z_{o1} + Z_{o2} + ...`` (ascending, trivial ones dropped)."""
    per_prime: dict[int, list[int]] = {}
    for o, mult in Counter(orders).items():
        if o < 1:
            raise ValueError(f"cyclic order must be positive, got {o}")
        for p, e in _factorize(o):
            per_prime.setdefault(p, []).extend([p ** e] * mult)
    m = max((len(v) for v in per_prime.values()), default=0)
    factors = [1] * m
    for qs in per_prime.values():
        qs.sort(reverse=True)
        for k, q in enumerate(qs):
            factors[k] *= q
    return tuple(reversed(factors))


def _crt_unit(moduli: list[int]) -> list[int]:
    """Idempotents ``e_i`` with ``e_i = 1 mod m_i`` and ``0 mod m_j`` (coprime m)."""
    M = prod(moduli)
    out = []
    for m in moduli:
        rest = M // m
        out.append(rest * pow(rest, -1, m) % M if m > 1 else 0)
    return out


def normalize_cyclic(orders: list[int]):
    """Rewrite ``Z_{o_1} + ... + Z_{o_r}`` (generators ``z_j``) in invariant form.

    Returns ``(factors, gens, coords)``:

    * ``factors`` -- ascending invariant factors ``d_1 | ... | d_m``;
    * ``gens[i]`` -- sparse list ``[(j, a), ...]`` with ``g_i = sum a z_j``;
    * ``coords[j]`` -- sparse list ``[(i, a), ...]`` with ``z_j = sum a g_i``.

    Works prime by prime: the k-th largest invariant factor collects the
    k-th largest prime-power piece of every prime.
    """
    pieces: dict[int, list[tuple[int, int]]] = {}
    for j, o in enumerate(orders):
        if o < 1:
            raise ValueError(f"cyclic order must be positive, got {o}")
        for p, e in factorize(o).items() if o > 1 else ():
            pieces.setdefault(p, []).append((p ** e, j))
    m = max((len(v) for v in pieces.values()), default=0)
    # slot 0 is the largest factor
    slots: list[list[tuple[int, int, int]]] = [[] for _ in range(m)]
    for p, lst in pieces.items():
        lst.sort(key=lambda t: -t[0])
        for k, (q, j) in enumerate(lst):
            slots[k].append((p, q, j))
    slots.reverse()
    factors = [prod(q for _, q, _ in s) for s in slots]

    gens: list[list[tuple[int, int]]] = []
    coords: list[list[tuple[int, int]]] = [[] for _ in orders]
    for i, s in enumerate(slots):
        d = factors[i]
        idem = _crt_unit([q for _, q, _ in s])
        g = []
        for (p, q, j), e in zip(s, idem):
            o = orders[j]
            # piece of z_j of order q, and how z_j's q-part sits in g_i
            g.append((j, o // q))
            u = pow(o // q, -1, q)
            coords[j].append((i, u * e % d))
        gens.append(g)
    return tuple(factors), gens, coords


def rational_inverse(M: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan over the rationals."""
    n = len(M)
    A = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            raise ValueError("matrix is singular")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [v / piv for v in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [row[n:] for row in A]


def _common_denominator(rows: Iterable[Iterable]) -> int:
    den = 1
    for row in rows:
        for v in row:
            d = Fraction(v).denominator
            den = den * d // gcd(den, d)
    return den


def integer_kernel(A: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis (as rows) of ``{x in Z^n : A x = 0}``."""
    if not A:
        if ncols is None:
            raise ValueError("need ncols for an empty matrix")
        return identity(ncols)
    n = len(A[0])
    snf = smith_normal_form(A)
    r = sum(1 for d in snf.diagonal if d)
    V = snf.right
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


def solve_integer(rows: Sequence[Sequence], target: Sequence) -> list[int] | None:
    """Integers ``w`` with ``sum_k w_k rows[k] == target``, or None.

    ``rows`` and ``target`` may be rational.
    """
    k = len(rows)
    n = len(target)
    if k == 0:
        return [] if not any(target) else None
    N = _common_denominator(list(rows) + [target])
    # columns of A are the scaled rows
    A = [[int(Fraction(rows[c][i]) * N) for c in range(k)] for i in range(n)]
    t = [int(Fraction(v) * N) for v in target]
    U, D, V = smith_normal_form(A)
    y = [sum(u * v for u, v in zip(urow, t)) for urow in U]
    z = [0] * k
    for i in range(n):
        d = D[i][i] if i < k else 0
        if d:
            if y[i] % d:
                return None
            z[i] = y[i] // d
        elif y[i]:
            return None
    return [sum(V[i][j] * z[j] for j in range(k)) for i in range(k)]
