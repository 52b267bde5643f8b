"""Finitely generated abelian groups in invariant-factor normal form.

A group is ``Z^r x Z/d_1 x ... x Z/d_t`` with ``d_1 | d_2 | ... | d_t``
and every ``d_i >= 2``; constructors canonicalize, so two groups are
isomorphic exactly when they are equal.  The exact integer kernel
(Smith normal form over Z, Bareiss determinants) lives here as well:
generation tests, expressing elements in generators, and the residual
quotient construction all reduce to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import count, product
from typing import Iterable, Iterator, Sequence

INFINITE = math.inf

Matrix = list[list[int]]


# ---------------------------------------------------------------------------
# Exact integer linear algebra


def _identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    if rows and len(a[0]) != inner:
        raise ValueError("matrix shape mismatch")
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(row[k] * v[k] for k in range(len(v))) for row in a]


def determinant(mat: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(mat)
    if n == 0:
        return 1
    if any(len(row) != n for row in mat):
        raise ValueError("determinant needs a square matrix")
    a = [list(map(int, row)) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _snf_valid(mat, u, d, v) -> bool:
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    if matmul(matmul(u, [list(r) for r in mat]), v) != d:
        return False
    if abs(determinant(u)) != 1 or abs(determinant(v)) != 1:
        return False
    diag = []
    for i in range(rows):
        for j in range(cols):
            if i == j:
                diag.append(d[i][j])
            elif d[i][j] != 0:
                return False
    if any(x < 0 for x in diag):
        return False
    for a, b in zip(diag, diag[1:]):
        if a == 0 and b != 0:
            return False
        if a != 0 and b % a != 0:
            return False
    return True


def smith_normal_form(
    mat: Sequence[Sequence[int]],
) -> tuple[Matrix, Matrix, Matrix]:
    """Decompose an integer matrix as U * mat * V = D.

    U and V are unimodular and D is diagonal with nonnegative entries
    forming a divisibility chain.  Pivots are chosen by minimal absolute
    value to limit intermediate growth; all arithmetic is exact.
    """
    a = [list(map(int, row)) for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if any(len(row) != cols for row in a):
        raise ValueError("ragged matrix")
    u = _identity_matrix(rows)
    v = _identity_matrix(cols)

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def row_addmul(dst, src, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def col_addmul(dst, src, q):
        for r in a:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def min_nonzero(t):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        return best

    for t in range(min(rows, cols)):
        piv = min_nonzero(t)
        if piv is None:
            break
        while True:
            i0, j0 = piv
            if i0 != t:
                row_swap(t, i0)
            if j0 != t:
                col_swap(t, j0)
            if a[t][t] < 0:
                row_negate(t)
            p = a[t][t]
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    row_addmul(i, t, -q)
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    col_addmul(j, t, -q)
            piv = None
            for i in range(t + 1, rows):
                if a[i][t]:
                    piv = (i, t)
                    break
            if piv is None:
                for j in range(t + 1, cols):
                    if a[t][j]:
                        piv = (t, j)
                        break
            if piv is not None:
                continue
            # pivot must divide the whole trailing block for the chain
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_addmul(t, bad, 1)
            piv = (t, t)
    assert _snf_valid(mat, u, a, v), "internal error: invalid decomposition"
    return u, a, v


# ---------------------------------------------------------------------------
# Groups and elements


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def primes() -> Iterator[int]:
    return (n for n in count(2) if _is_prime(n))


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^free_rank x Z/d_1 x ... x Z/d_t`` in invariant-factor form."""

    free_rank: int
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for d in self.invariant_factors:
            if not isinstance(d, int) or d < 2:
                raise ValueError(f"invariant factor {d!r} must be an integer >= 2")
        for d, e in zip(self.invariant_factors, self.invariant_factors[1:]):
            if e % d != 0:
                raise ValueError(
                    f"invariant factors {self.invariant_factors} do not form a chain"
                )

    @property
    def torsion_rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def rank(self) -> int:
        """Minimal number of generators."""
        return self.free_rank + len(self.invariant_factors)

    def order(self):
        if self.free_rank:
            return INFINITE
        return self.torsion_order()

    def torsion_order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def exponent(self):
        if self.free_rank:
            return INFINITE
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def element(self, free: Sequence[int] = (), torsion: Sequence[int] = ()) -> "AbelianElement":
        free = tuple(int(x) for x in free)
        torsion = tuple(int(x) for x in torsion)
        if len(free) != self.free_rank or len(torsion) != self.torsion_rank:
            raise ValueError(
                f"expected {self.free_rank} free and {self.torsion_rank} torsion "
                f"coordinates, got {len(free)} and {len(torsion)}"
            )
        torsion = tuple(x % d for x, d in zip(torsion, self.invariant_factors))
        return AbelianElement(self, free, torsion)

    def from_coordinates(self, coords: Sequence[int]) -> "AbelianElement":
        """Build an element from a flat coordinate list (free then torsion)."""
        coords = list(coords)
        if len(coords) == 1 and coords[0] == 0 and self.rank != 1:
            coords = [0] * self.rank
        if len(coords) != self.rank:
            raise ValueError(
                f"expected {self.rank} coordinates for {self}, got {len(coords)}"
            )
        return self.element(coords[: self.free_rank], coords[self.free_rank :])

    def identity(self) -> "AbelianElement":
        return self.element((0,) * self.free_rank, (0,) * self.torsion_rank)

    def free_generator(self, index: int) -> "AbelianElement":
        if not 0 <= index < self.free_rank:
            raise ValueError("free generator index out of range")
        free = tuple(1 if i == index else 0 for i in range(self.free_rank))
        return self.element(free, (0,) * self.torsion_rank)

    def torsion_generator(self, index: int) -> "AbelianElement":
        if not 0 <= index < self.torsion_rank:
            raise ValueError("torsion generator index out of range")
        tors = tuple(1 if i == index else 0 for i in range(self.torsion_rank))
        return self.element((0,) * self.free_rank, tors)

    def generators(self) -> tuple["AbelianElement", ...]:
        return tuple(self.free_generator(i) for i in range(self.free_rank)) + tuple(
            self.torsion_generator(i) for i in range(self.torsion_rank)
        )

    def elements(self) -> Iterator["AbelianElement"]:
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        for tors in product(*(range(d) for d in self.invariant_factors)):
            yield self.element((), tors)

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " x ".join(parts) if parts else "Z/1"


@dataclass(frozen=True)
class AbelianElement:
    group: AbelianGroup
    free: tuple[int, ...]
    torsion: tuple[int, ...]

    def _check(self, other: "AbelianElement") -> None:
        if self.group != other.group:
            raise ValueError("elements belong to different groups")

    def __add__(self, other: "AbelianElement") -> "AbelianElement":
        self._check(other)
        return self.group.element(
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
        )

    def __neg__(self) -> "AbelianElement":
        return self.group.element(
            tuple(-a for a in self.free), tuple(-a for a in self.torsion)
        )

    def __sub__(self, other: "AbelianElement") -> "AbelianElement":
        return self + (-other)

    def __rmul__(self, n: int) -> "AbelianElement":
        if not isinstance(n, int):
            return NotImplemented
        return self.group.element(
            tuple(n * a for a in self.free), tuple(n * a for a in self.torsion)
        )

    def is_identity(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    def order(self):
        if any(self.free):
            return INFINITE
        out = 1
        for x, d in zip(self.torsion, self.group.invariant_factors):
            out = math.lcm(out, d // math.gcd(x, d))
        return out

    def coordinates(self) -> tuple[int, ...]:
        return self.free + self.torsion

    def coords_str(self) -> str:
        free = ",".join(map(str, self.free))
        tors = ",".join(map(str, self.torsion))
        if free and tors:
            return f"{free};{tors}"
        return free or tors or "0"

    def __str__(self) -> str:
        return f"({self.coords_str()})"


def canonical_invariant_factors(orders: Iterable) -> AbelianGroup:
    """Direct product of cyclic groups, normalized to invariant factors.

    Each entry is a cyclic order: a positive integer, or infinity
    (math.inf or None) for an infinite cyclic factor.  Order-independent
    and idempotent.
    """
    free = 0
    exponents: dict[int, list[int]] = {}
    for n in orders:
        if n is None or n == INFINITE:
            free += 1
            continue
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"cyclic order {n!r} must be a positive integer or infinity")
        for p, e in _factorize(n).items():
            exponents.setdefault(p, []).append(e)
    slots = max((len(v) for v in exponents.values()), default=0)
    factors = []
    for s in range(slots):
        d = 1
        for p, exps in exponents.items():
            exps_sorted = sorted(exps, reverse=True)
            if s < len(exps_sorted):
                d *= p ** exps_sorted[s]
        factors.append(d)
    factors = [d for d in factors if d > 1]
    return AbelianGroup(free, tuple(sorted(factors)))


def abelian_product(a: AbelianGroup, b: AbelianGroup) -> AbelianGroup:
    orders: list = [INFINITE] * (a.free_rank + b.free_rank)
    orders.extend(a.invariant_factors)
    orders.extend(b.invariant_factors)
    return canonical_invariant_factors(orders)


# ---------------------------------------------------------------------------
# Generation and expression


def _relation_columns(group: AbelianGroup) -> list[list[int]]:
    dims = group.rank
    cols = []
    for i, d in enumerate(group.invariant_factors):
        col = [0] * dims
        col[group.free_rank + i] = d
        cols.append(col)
    return cols


def _generator_matrix(group: AbelianGroup, gens: Sequence[AbelianElement]) -> Matrix:
    dims = group.rank
    cols = [list(g.coordinates()) for g in gens] + _relation_columns(group)
    return [[col[i] for col in cols] for i in range(dims)]


def generates_full(group: AbelianGroup, gens: Sequence[AbelianElement]) -> bool:
    """Exact test of whether the given elements generate the whole group.

    The generator coordinates, together with the torsion relations, span
    the full integer lattice exactly when all Smith invariants are 1.
    """
    for g in gens:
        if g.group != group:
            raise ValueError("generator belongs to a different group")
    dims = group.rank
    if dims == 0:
        return True
    mat = _generator_matrix(group, gens)
    _, d, _ = smith_normal_form(mat)
    diag = [d[i][i] for i in range(min(dims, len(mat[0])))]
    return len(diag) == dims and all(x == 1 for x in diag)


def express_in_generators(
    group: AbelianGroup,
    gens: Sequence[AbelianElement],
    target: AbelianElement,
) -> list[int] | None:
    """Integer coefficients c with sum(c_i * gens_i) = target, or None."""
    if target.group != group:
        raise ValueError("target belongs to a different group")
    for g in gens:
        if g.group != group:
            raise ValueError("generator belongs to a different group")
    dims = group.rank
    if dims == 0:
        return [0] * len(gens)
    mat = _generator_matrix(group, gens)
    ncols = len(mat[0])
    u, d, v = smith_normal_form(mat)
    rhs = matvec(u, list(target.coordinates()))
    y = [0] * ncols
    for i in range(dims):
        di = d[i][i] if i < ncols else 0
        if di == 0:
            if rhs[i] != 0:
                return None
        else:
            if rhs[i] % di != 0:
                return None
            y[i] = rhs[i] // di
    x = matvec(v, y)
    return x[: len(gens)]


def is_limit_of_cyclic(group: AbelianGroup) -> bool:
    """True exactly when the torsion part is cyclic."""
    return len(group.invariant_factors) <= 1


# ---------------------------------------------------------------------------
# Residual quotients onto finite cyclic groups


@dataclass(frozen=True)
class CyclicQuotientMap:
    """A surjection onto Z/modulus given by per-coordinate multipliers."""

    source: AbelianGroup
    modulus: int
    free_multipliers: tuple[int, ...]
    torsion_multipliers: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        if len(self.free_multipliers) != self.source.free_rank:
            raise ValueError("one multiplier per free coordinate required")
        if len(self.torsion_multipliers) != self.source.torsion_rank:
            raise ValueError("one multiplier per torsion coordinate required")
        for m, d in zip(self.torsion_multipliers, self.source.invariant_factors):
            if (m * d) % self.modulus != 0:
                raise ValueError("map is not well defined on the torsion part")

    def target_group(self) -> AbelianGroup:
        if self.modulus == 1:
            return AbelianGroup(0, ())
        return AbelianGroup(0, (self.modulus,))

    def apply(self, x: AbelianElement) -> int:
        if x.group != self.source:
            raise ValueError("element belongs to a different group")
        total = sum(c * m for c, m in zip(x.free, self.free_multipliers))
        total += sum(c * m for c, m in zip(x.torsion, self.torsion_multipliers))
        return total % self.modulus

    def __call__(self, x: AbelianElement) -> int:
        return self.apply(x)

    def is_surjective(self) -> bool:
        return math.gcd(self.modulus, *self.free_multipliers, *self.torsion_multipliers, 0) == 1


def cyclic_residual_quotient(
    group: AbelianGroup, kill_none_of: Iterable[AbelianElement]
) -> CyclicQuotientMap:
    """A finite cyclic quotient that keeps every listed element nontrivial.

    Requires cyclic torsion (order k).  One prime is chosen per free
    coordinate, smallest first, avoiding k and every nonzero free
    coordinate that occurs in the given elements; the quotient is
    reduction of coordinate j mod p_j glued with reduction mod k, which
    is cyclic of order k * p_1 * ... * p_r.
    """
    if len(group.invariant_factors) > 1:
        raise ValueError("torsion part is not cyclic")
    elements = list(kill_none_of)
    for x in elements:
        if x.group != group:
            raise ValueError("element belongs to a different group")
        if x.is_identity():
            raise ValueError("the identity cannot be kept nontrivial")
    k = group.invariant_factors[0] if group.invariant_factors else 1
    forbidden = {abs(c) for x in elements for c in x.free if c != 0}
    chosen: list[int] = []
    for p in primes():
        if len(chosen) == group.free_rank:
            break
        if k % p == 0:
            continue
        if any(e % p == 0 for e in forbidden):
            continue
        chosen.append(p)
    modulus = k * math.prod(chosen)
    free_mult = tuple(modulus // p for p in chosen)
    torsion_mult = (modulus // k,) if group.invariant_factors else ()
    return CyclicQuotientMap(group, modulus, free_mult, torsion_mult)
