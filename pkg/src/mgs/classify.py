"""Classification of markings up to automorphisms of the group.

For finite groups the orbits of generating tuples under the diagonal
automorphism action are enumerated outright.  For the free-by-flip
groups Z^(m-1) x| Z/2 the full automorphism group is the semidirect
product Z^(m-1) x| GL_(m-1)(Z), the involution pattern I(S) (which
entries square to the identity) is a complete invariant, and explicit
witness automorphisms are constructed and verified entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .abelian import AbelianGroup, determinant
from .dihedral import GenDihedralElement, GenDihedralGroup, is_generating_dih
from .tables import FiniteGroupTable, automorphism_group


def free_by_flip(arity: int) -> GenDihedralGroup:
    """The group Z^(arity-1) x| Z/2 whose markings of length `arity`
    realize every involution pattern."""
    if arity < 2:
        raise ValueError("need at least 2 generators")
    return GenDihedralGroup(AbelianGroup(arity - 1, ()))


def reflection_index_set(gens: Sequence[GenDihedralElement]) -> frozenset[int]:
    """1-based indices of the entries that square to the identity."""
    return frozenset(
        i + 1 for i, g in enumerate(gens) if (g * g).is_identity()
    )


# ---------------------------------------------------------------------------
# Automorphisms of Z^(m-1) x| Z/2


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _mat_vec(a, v):
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in a)


def _mat_identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _mat_inverse_unimodular(a):
    """Inverse of an integer matrix with determinant +-1 (adjugate)."""
    n = len(a)
    det = determinant(a)
    if abs(det) != 1:
        raise ValueError("matrix is not unimodular")
    if n == 0:
        return ()
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [
                [a[r][c] for c in range(n) if c != j] for r in range(n) if r != i
            ]
            row.append(((-1) ** (i + j)) * determinant(minor))
        cof.append(row)
    # adjugate transpose over det
    return tuple(
        tuple(cof[j][i] * det for j in range(n)) for i in range(n)
    )


@dataclass(frozen=True)
class DihAutomorphism:
    """An automorphism of Z^(m-1) x| Z/2.

    Acts by rot(w) -> rot(f w) and ref(w) -> ref(f w + v); composition
    matches the semidirect product Z^(m-1) x| GL_(m-1)(Z).
    """

    translation: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.translation)
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise ValueError("translation and matrix dimensions disagree")
        if abs(determinant(self.matrix)) != 1:
            raise ValueError("matrix must be unimodular")

    @property
    def arity(self) -> int:
        return len(self.translation) + 1

    @classmethod
    def identity(cls, arity: int) -> "DihAutomorphism":
        return cls((0,) * (arity - 1), _mat_identity(arity - 1))

    def apply(self, x: GenDihedralElement) -> GenDihedralElement:
        base = x.group.base
        if base.free_rank != len(self.translation) or base.invariant_factors:
            raise ValueError("element is not in the matching free-by-flip group")
        w = _mat_vec(self.matrix, x.v.free)
        if x.eps:
            w = tuple(a + b for a, b in zip(w, self.translation))
        return x.group.element(base.element(w, ()), x.eps)

    def apply_tuple(self, gens: Sequence[GenDihedralElement]) -> tuple:
        return tuple(self.apply(g) for g in gens)

    def compose(self, other: "DihAutomorphism") -> "DihAutomorphism":
        """self after other."""
        return DihAutomorphism(
            tuple(
                a + b
                for a, b in zip(_mat_vec(self.matrix, other.translation), self.translation)
            ),
            _mat_mul(self.matrix, other.matrix),
        )

    def inverse(self) -> "DihAutomorphism":
        inv = _mat_inverse_unimodular(self.matrix)
        return DihAutomorphism(
            tuple(-a for a in _mat_vec(inv, self.translation)), inv
        )


# ---------------------------------------------------------------------------
# Canonical markings and equivalence


def canonical_marking(arity: int, pattern) -> tuple[GenDihedralElement, ...]:
    """The canonical generating tuple with the given involution pattern.

    Positions outside the pattern receive the free basis rotations in
    order; pattern positions receive the plain flip and then flips
    translated by the remaining basis vectors.  Every pattern must be
    nonempty: a generating tuple always contains an involution.
    """
    pattern = frozenset(pattern)
    if not pattern:
        raise ValueError("the involution pattern of a generating tuple is nonempty")
    if not pattern <= set(range(1, arity + 1)):
        raise ValueError(f"pattern {sorted(pattern)} out of range for arity {arity}")
    group = free_by_flip(arity)
    base = group.base
    n_rot = arity - len(pattern)
    out = []
    rot_seen = 0
    ref_seen = 0
    for i in range(1, arity + 1):
        if i in pattern:
            if ref_seen == 0:
                out.append(group.reflection(base.identity()))
            else:
                out.append(group.reflection(base.free_generator(n_rot + ref_seen - 1)))
            ref_seen += 1
        else:
            out.append(group.rotation(base.free_generator(rot_seen)))
            rot_seen += 1
    return tuple(out)


def _basis_automorphism(gens: Sequence[GenDihedralElement]) -> DihAutomorphism:
    """The automorphism taking the canonical marking of I(gens) to gens.

    Columns are read off the tuple: rotation parts in position order,
    then differences of the reflection parts from the first reflection;
    the translation is the first reflection's part.
    """
    rot_cols = []
    ref_cols = []
    first_ref = None
    for g in gens:
        if g.eps == 0:
            rot_cols.append(g.v.free)
        elif first_ref is None:
            first_ref = g.v.free
        else:
            ref_cols.append(tuple(a - b for a, b in zip(g.v.free, first_ref)))
    if first_ref is None:
        raise ValueError("tuple contains no reflection")
    cols = rot_cols + ref_cols
    n = len(cols)
    matrix = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    return DihAutomorphism(first_ref, matrix)


def decide_marking_equivalence(
    source: Sequence[GenDihedralElement], target: Sequence[GenDihedralElement]
) -> DihAutomorphism | None:
    """An automorphism carrying one generating tuple to the other, if any.

    Two generating tuples of Z^(m-1) x| Z/2 are equivalent exactly when
    their involution patterns agree; the returned witness is verified
    entrywise before being handed back.
    """
    source = tuple(source)
    target = tuple(target)
    if len(source) != len(target) or not source:
        raise ValueError("tuples must have equal positive length")
    group = source[0].group
    if any(g.group != group for g in source + target):
        raise ValueError("tuples must live in one group")
    base = group.base
    if base.invariant_factors:
        raise ValueError("equivalence witnesses are built for torsion-free bases")
    if len(source) != base.free_rank + 1:
        raise ValueError("tuple length must be the rank of the group")
    if not is_generating_dih(group, source) or not is_generating_dih(group, target):
        raise ValueError("both tuples must generate the group")
    if reflection_index_set(source) != reflection_index_set(target):
        return None
    phi = _basis_automorphism(target).compose(_basis_automorphism(source).inverse())
    if phi.apply_tuple(source) != target:
        raise AssertionError("internal error: witness failed entrywise verification")
    return phi


def count_marking_classes(arity: int) -> int:
    """Number of marking classes of Z^(arity-1) x| Z/2: 2^arity - 1."""
    if arity < 2:
        raise ValueError("need at least 2 generators")
    return 2**arity - 1


def canonical_classes(arity: int) -> list["MarkingClass"]:
    """One canonical class per nonempty involution pattern."""
    group = free_by_flip(arity)
    out = []
    patterns = sorted(
        (frozenset(p) for p in _nonempty_subsets(arity)),
        key=lambda s: (len(s), sorted(s)),
    )
    for pattern in patterns:
        rep = canonical_marking(arity, pattern)
        out.append(MarkingClass(group, arity, pattern, rep, None))
    return out


def _nonempty_subsets(arity: int):
    for mask in range(1, 2**arity):
        yield frozenset(i + 1 for i in range(arity) if mask >> i & 1)


# ---------------------------------------------------------------------------
# Orbit enumeration on finite tables


@dataclass(frozen=True)
class MarkingClass:
    group: object
    arity: int
    involutions: frozenset[int]
    representative: tuple
    orbit_size: int | None

    def to_json(self) -> dict:
        if isinstance(self.group, FiniteGroupTable):
            rep = [self.group.labels[i] for i in self.representative]
        else:
            rep = [str(x) for x in self.representative]
        return {
            "I": sorted(self.involutions),
            "representative": rep,
            "orbit_size": self.orbit_size,
        }


def enumerate_markings(
    table: FiniteGroupTable, arity: int, budget: int = 10_000_000
) -> list[MarkingClass]:
    """Orbit representatives of generating tuples under all automorphisms.

    Representatives are the lexicographically least tuples of their
    orbits, listed in lexicographic order; orbit sizes add up to the
    number of generating tuples.
    """
    n = table.order
    if n**arity > budget:
        raise ValueError(f"{n}^{arity} tuples exceed the enumeration budget")
    autos = automorphism_group(table)
    classes = []
    seen: set[tuple[int, ...]] = set()
    for tup in product(range(n), repeat=arity):
        if tup in seen:
            continue
        if len(table.closure(tup)) != n:
            continue
        orbit = {tuple(phi[x] for x in tup) for phi in autos}
        seen.update(orbit)
        involutions = frozenset(
            i + 1 for i, x in enumerate(tup) if table.mul(x, x) == 0
        )
        classes.append(
            MarkingClass(table, arity, involutions, min(orbit), len(orbit))
        )
    return classes
