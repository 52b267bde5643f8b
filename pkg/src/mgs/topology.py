"""Marked groups and the finite-window view of their space.

A marked group is a group together with an ordered generating tuple;
through a radius-R window it is seen as its relation ball: the reduced
words of length at most R that evaluate to the identity.  Agreement of
relation balls induces the metric 2^-(R+1); everything here (distances,
convergence reports, accumulation witnesses) is phrased in terms of
exactly computed balls.

Two comparison routes are implemented.  The generic route enumerates
reduced words outright.  For abelian and generalized dihedral markings
a word's value depends only on its net letter contributions, so balls
can be compared through small integer profile vectors instead; both
routes return identical radii and the enumeration route doubles as the
test oracle for the profile route.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from .abelian import (
    AbelianElement,
    AbelianGroup,
    CyclicQuotientMap,
    cyclic_residual_quotient,
    express_in_generators,
    generates_full,
    is_limit_of_cyclic,
    primes,
)
from .dihedral import (
    GenDihedralElement,
    GenDihedralGroup,
    evaluate_word,
    is_generating_dih,
)
from .tables import FiniteGroupTable
from .words import (
    BallCapExceeded,
    Word,
    active_ball_cap,
    free_reduce,
    letter_order,
    stratum_size,
)

GroupLike = Union[AbelianGroup, GenDihedralGroup, FiniteGroupTable]


class NotGenerating(ValueError):
    """The proposed tuple does not generate the group."""


class FamilyError(ValueError):
    """The group is outside the requested family of marked groups."""


# ---------------------------------------------------------------------------
# Marked groups


@dataclass(frozen=True)
class MarkedGroup:
    group: GroupLike
    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        g = self.group
        S = self.generators
        if isinstance(g, AbelianGroup):
            for x in S:
                if not isinstance(x, AbelianElement) or x.group != g:
                    raise ValueError("marking entries must be elements of the group")
            if not generates_full(g, S):
                raise NotGenerating(f"tuple does not generate {g}")
        elif isinstance(g, GenDihedralGroup):
            for x in S:
                if not isinstance(x, GenDihedralElement) or x.group != g:
                    raise ValueError("marking entries must be elements of the group")
            if not is_generating_dih(g, S):
                raise NotGenerating(f"tuple does not generate {g}")
        elif isinstance(g, FiniteGroupTable):
            for x in S:
                if not isinstance(x, int) or not 0 <= x < g.order:
                    raise ValueError("marking entries must be element indices")
            if len(g.closure(S)) != g.order:
                raise NotGenerating("tuple does not generate the table group")
        else:
            raise TypeError(f"unsupported group kind {type(g).__name__}")

    @property
    def arity(self) -> int:
        return len(self.generators)

    @property
    def kind(self) -> str:
        if isinstance(self.group, AbelianGroup):
            return "abelian"
        if isinstance(self.group, GenDihedralGroup):
            return "dihedral"
        return "table"

    def evaluate(self, word: Word):
        if word.arity != self.arity:
            raise ValueError("word arity does not match the marking")
        g, S = self.group, self.generators
        if isinstance(g, AbelianGroup):
            out = g.identity()
            for e, s in zip(word.exponent_vector(), S):
                out = out + e * s
            return out
        if isinstance(g, GenDihedralGroup):
            return evaluate_word(g, S, word)
        v = 0
        for ell in word.letters:
            x = S[ell - 1] if ell > 0 else g.inv(S[-ell - 1])
            v = g.rows[v][x]
        return v

    def is_relation(self, word: Word) -> bool:
        value = self.evaluate(word)
        if isinstance(self.group, FiniteGroupTable):
            return value == 0
        return value.is_identity()

    def __str__(self) -> str:
        if isinstance(self.group, FiniteGroupTable):
            gens = ",".join(self.group.labels[i] for i in self.generators)
        else:
            gens = ",".join(str(x) for x in self.generators)
        return f"{self.group}:{gens}"


@dataclass(frozen=True)
class RelationBall:
    arity: int
    radius: int
    relations: tuple[Word, ...]

    def __post_init__(self):
        for w in self.relations:
            if w.arity != self.arity or len(w) > self.radius:
                raise ValueError("relation outside the stated ball")
        if not self.relations or not self.relations[0].is_identity():
            raise ValueError("a relation ball must contain the empty word")
        as_set = set(self.relations)
        for w in self.relations:
            if w.inverse() not in as_set:
                raise ValueError("a relation ball must be closed under inversion")

    @cached_property
    def as_set(self) -> frozenset[Word]:
        return frozenset(self.relations)

    def __contains__(self, word: Word) -> bool:
        return word in self.as_set

    def stratum(self, length: int) -> tuple[Word, ...]:
        return tuple(w for w in self.relations if len(w) == length)

    def restrict(self, radius: int) -> "RelationBall":
        if radius > self.radius:
            raise ValueError("cannot grow a ball by restriction")
        return RelationBall(
            self.arity, radius, tuple(w for w in self.relations if len(w) <= radius)
        )

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "radius": self.radius,
            "count": len(self.relations),
            "relations": [str(w) for w in self.relations],
        }


def _raw_ops(marked: MarkedGroup):
    """(identity, mul, letter -> value) in a flat representation."""
    g, S = marked.group, marked.generators
    if isinstance(g, FiniteGroupTable):
        rows = g.rows
        values = {}
        for i, s in enumerate(S, start=1):
            values[i] = s
            values[-i] = g.inv(s)
        return 0, (lambda a, b: rows[a][b]), values
    if isinstance(g, AbelianGroup):
        moduli = (None,) * g.free_rank + g.invariant_factors

        def mul(a, b):
            return tuple(
                (x + y) if m is None else (x + y) % m
                for x, y, m in zip(a, b, moduli)
            )

        identity = (0,) * len(moduli)
        values = {}
        for i, s in enumerate(S, start=1):
            values[i] = s.coordinates()
            values[-i] = (-s).coordinates()
        return identity, mul, values
    base = g.base
    moduli = (None,) * base.free_rank + base.invariant_factors

    def dmul(a, b):
        va, ea = a
        vb, eb = b
        if ea:
            vb = tuple(-x for x in vb)
        return (
            tuple(
                (x + y) if m is None else (x + y) % m
                for x, y, m in zip(va, vb, moduli)
            ),
            ea ^ eb,
        )

    identity = ((0,) * len(moduli), 0)
    values = {}
    for i, s in enumerate(S, start=1):
        values[i] = (s.v.coordinates(), s.eps)
        inv = s.inverse()
        values[-i] = (inv.v.coordinates(), inv.eps)
    return identity, dmul, values


def relation_ball(marked: MarkedGroup, radius: int, cap: int | None = None) -> RelationBall:
    """All relations of length <= radius, by breadth-first evaluation."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    cap = active_ball_cap() if cap is None else cap
    m = marked.arity
    if stratum_size(m, radius) > cap:
        raise BallCapExceeded(
            f"radius-{radius} stratum over {m} generators exceeds the cap of {cap}"
        )
    identity, mul, values = _raw_ops(marked)
    letters = letter_order(m)
    relations = [Word((), m)]
    frontier = [((), identity)]
    for _ in range(radius):
        nxt = []
        for w, val in frontier:
            last = w[-1] if w else 0
            for ell in letters:
                if ell == -last:
                    continue
                w2 = w + (ell,)
                v2 = mul(val, values[ell])
                nxt.append((w2, v2))
                if v2 == identity:
                    relations.append(Word(w2, m))
        frontier = nxt
    return RelationBall(m, radius, tuple(relations))


# ---------------------------------------------------------------------------
# Ball comparison: enumeration route


def _word_key(letters: tuple[int, ...]) -> tuple:
    return tuple((abs(l), 0 if l > 0 else 1) for l in letters)


def _compare_enumerate(a: MarkedGroup, b: MarkedGroup, r_max: int, cap: int | None):
    cap = active_ball_cap() if cap is None else cap
    m = a.arity
    id_a, mul_a, val_a = _raw_ops(a)
    id_b, mul_b, val_b = _raw_ops(b)
    letters = letter_order(m)
    frontier = [((), id_a, id_b)]
    for length in range(1, r_max + 1):
        if stratum_size(m, length) > cap:
            raise BallCapExceeded(
                f"radius-{length} stratum over {m} generators exceeds the cap of {cap}"
            )
        nxt = []
        mismatches = []
        for w, xa, xb in frontier:
            last = w[-1] if w else 0
            for ell in letters:
                if ell == -last:
                    continue
                w2 = w + (ell,)
                ya = mul_a(xa, val_a[ell])
                yb = mul_b(xb, val_b[ell])
                nxt.append((w2, ya, yb))
                if (ya == id_a) != (yb == id_b):
                    mismatches.append(w2)
        if mismatches:
            witness = min(mismatches, key=_word_key)
            return length - 1, Word(witness, m)
        frontier = nxt
    return r_max, None


# ---------------------------------------------------------------------------
# Ball comparison: profile route
#
# For a marking of an abelian group or of Dih(A), the value of a reduced
# word depends only on its net letter contributions: an integer vector x
# over the rotation positions and d over the reflection positions, where
# successive reflection occurrences contribute with alternating signs.
# A profile (x, d) is realized by some reduced word of length
# |x|_1 + |d|_1 and by none shorter, and it can be a relation only when
# sum(d) = 0; hence two markings have equal balls of radius L exactly
# when their relation profiles with |x|_1 + |d|_1 <= L coincide.


def _profile_pattern(marked: MarkedGroup):
    g = marked.group
    if isinstance(g, AbelianGroup):
        return (0,) * marked.arity
    if isinstance(g, GenDihedralGroup):
        return tuple(x.eps for x in marked.generators)
    return None


def profile_comparable(a: MarkedGroup, b: MarkedGroup) -> bool:
    pa, pb = _profile_pattern(a), _profile_pattern(b)
    return pa is not None and pa == pb


def _profile_parts(marked: MarkedGroup):
    g = marked.group
    if isinstance(g, AbelianGroup):
        return list(marked.generators), []
    rot = [x.v for x in marked.generators if x.eps == 0]
    ref = [x.v for x in marked.generators if x.eps == 1]
    return rot, ref


def _signed_vectors(dim: int, total: int):
    """Integer vectors with L1 norm exactly `total`, first coordinate high."""
    if dim == 0:
        if total == 0:
            yield ()
        return
    for head in range(total, -total - 1, -1):
        rest = total - abs(head)
        if dim == 1:
            if rest == 0:
                yield (head,)
            continue
        for tail in _signed_vectors(dim - 1, rest):
            yield (head,) + tail


def _profile_is_relation(rot_parts, ref_parts, x, d) -> bool:
    value = None
    for c, v in zip(x, rot_parts):
        if c:
            value = c * v if value is None else value + c * v
    for c, w in zip(d, ref_parts):
        if c:
            value = c * w if value is None else value + c * w
    return value is None or value.is_identity()


def _profile_word(marked: MarkedGroup, x: tuple[int, ...], d: tuple[int, ...]) -> Word:
    g = marked.group
    if isinstance(g, AbelianGroup):
        rot_pos = list(range(1, marked.arity + 1))
        ref_pos = []
    else:
        rot_pos = [i + 1 for i, s in enumerate(marked.generators) if s.eps == 0]
        ref_pos = [i + 1 for i, s in enumerate(marked.generators) if s.eps == 1]
    plus = []
    minus = []
    for c, pos in zip(d, ref_pos):
        if c > 0:
            plus.extend([pos] * c)
        elif c < 0:
            minus.extend([pos] * (-c))
    letters: list[int] = []
    for p, q in zip(plus, minus):
        letters.extend((p, q))
    for c, pos in zip(x, rot_pos):
        if c > 0:
            letters.extend([pos] * c)
        elif c < 0:
            letters.extend([-pos] * (-c))
    word = free_reduce(letters, marked.arity)
    if len(word) != sum(abs(c) for c in x) + sum(abs(c) for c in d):
        raise AssertionError("profile word construction produced cancellation")
    return word


def _compare_profiles(a: MarkedGroup, b: MarkedGroup, r_max: int):
    rot_a, ref_a = _profile_parts(a)
    rot_b, ref_b = _profile_parts(b)
    n_rot, n_ref = len(rot_a), len(ref_a)
    for norm in range(1, r_max + 1):
        for d_norm in range(0, norm + 1):
            x_norm = norm - d_norm
            for d in _signed_vectors(n_ref, d_norm):
                if sum(d) != 0:
                    continue
                for x in _signed_vectors(n_rot, x_norm):
                    in_a = _profile_is_relation(rot_a, ref_a, x, d)
                    in_b = _profile_is_relation(rot_b, ref_b, x, d)
                    if in_a != in_b:
                        return norm - 1, _profile_word(a, x, d)
    return r_max, None


def _compare(a: MarkedGroup, b: MarkedGroup, r_max: int, method: str, cap: int | None):
    if a.arity != b.arity:
        raise ValueError("markings have different arities")
    if r_max < 0:
        raise ValueError("r_max must be nonnegative")
    if method == "auto":
        method = "profile" if profile_comparable(a, b) else "enumerate"
    if method == "profile":
        if not profile_comparable(a, b):
            raise ValueError(
                "profile comparison needs abelian or matching dihedral markings"
            )
        return _compare_profiles(a, b, r_max)
    if method == "enumerate":
        return _compare_enumerate(a, b, r_max, cap)
    raise ValueError(f"unknown comparison method {method!r}")


def agreement_radius(
    a: MarkedGroup,
    b: MarkedGroup,
    r_max: int = 8,
    method: str = "auto",
    cap: int | None = None,
) -> int:
    """Largest radius <= r_max at which the relation balls agree.

    A return value equal to r_max means the balls agree on the whole
    tested window (the true radius is at least r_max).
    """
    radius, _ = _compare(a, b, r_max, method, cap)
    return radius


def separating_word(
    a: MarkedGroup,
    b: MarkedGroup,
    r_max: int = 8,
    method: str = "auto",
    cap: int | None = None,
) -> Word | None:
    """A shortest word that is a relation of exactly one marking."""
    _, witness = _compare(a, b, r_max, method, cap)
    return witness


def marked_distance(
    a: MarkedGroup,
    b: MarkedGroup,
    r_max: int = 8,
    method: str = "auto",
    cap: int | None = None,
) -> Fraction:
    """2^-(R+1) with R the agreement radius; 0 if indistinguishable."""
    radius, witness = _compare(a, b, r_max, method, cap)
    if witness is None:
        return Fraction(0)
    return Fraction(1, 2 ** (radius + 1))


# ---------------------------------------------------------------------------
# Convergence certification


@dataclass(frozen=True)
class ConvergenceReport:
    indices: tuple[int, ...]
    radii: tuple[int, ...]
    schedule: tuple[int, ...]
    verdict: str  # 'consistent-with-convergence' | 'refuted'
    witness: Word | None = None
    witness_index: int | None = None

    def consistent(self) -> bool:
        return self.verdict == "consistent-with-convergence"

    def to_json(self) -> dict:
        return {
            "indices": list(self.indices),
            "radii": list(self.radii),
            "schedule": list(self.schedule),
            "verdict": self.verdict,
            "witness": None if self.witness is None else str(self.witness),
            "witness_index": self.witness_index,
        }


def check_convergence(
    family,
    limit: MarkedGroup,
    indices: Sequence[int],
    schedule: Sequence[int] | None = None,
    r_max: int | None = None,
    method: str = "auto",
    cap: int | None = None,
) -> ConvergenceReport:
    """Certify a family against a limit through a radius schedule.

    The verdict is consistent-with-convergence when the agreement radii
    are nondecreasing and meet every schedule target; otherwise the
    report is a refutation carrying a separating word.  Consistency is
    only a certificate up to the tested radii; refutations are exact.
    """
    indices = tuple(indices)
    if schedule is None:
        schedule = tuple(range(1, len(indices) + 1))
    else:
        schedule = tuple(schedule)
    if len(schedule) != len(indices):
        raise ValueError("schedule and indices must have equal length")
    if r_max is None:
        r_max = max(schedule, default=0) + 1
    if max(schedule, default=0) > r_max:
        raise ValueError("schedule exceeds the tested radius window")
    if callable(family):
        members = [family(n) for n in indices]
    else:
        members = list(family)
        if len(members) != len(indices):
            raise ValueError("family and indices must have equal length")
    for member in members:
        if member.arity != limit.arity:
            raise ValueError("family and limit must share one arity")
    radii = []
    witnesses = []
    for member in members:
        radius, witness = _compare(member, limit, r_max, method, cap)
        radii.append(radius)
        witnesses.append(witness)
    for pos in range(len(indices)):
        bad = radii[pos] < schedule[pos] or (pos > 0 and radii[pos] < radii[pos - 1])
        if bad:
            return ConvergenceReport(
                indices,
                tuple(radii),
                schedule,
                "refuted",
                witnesses[pos],
                indices[pos],
            )
    return ConvergenceReport(
        indices, tuple(radii), schedule, "consistent-with-convergence"
    )


# ---------------------------------------------------------------------------
# Limit decisions


@dataclass(frozen=True)
class LimitDecision:
    value: bool
    reason: str

    def __bool__(self) -> bool:
        return self.value


_KLEIN = AbelianGroup(0, (2, 2))
_ORDER_TWO = AbelianGroup(0, (2,))


def _abelian_model(group: GroupLike) -> AbelianGroup | None:
    """The abelian group a marked group abstractly is, when abelian."""
    if isinstance(group, AbelianGroup):
        return group
    if isinstance(group, GenDihedralGroup) and group.is_abelian():
        # Dih(A) with exponent-2 base is A x Z/2
        factors = group.base.invariant_factors + (2,)
        return AbelianGroup(0, tuple(sorted(factors)))
    return None


def is_limit_of_dihedral(group: GroupLike) -> LimitDecision:
    """Decide membership in the closure of the dihedral groups.

    Nonabelian Dih(A) qualifies exactly when the torsion of A is cyclic;
    an abelian group qualifies exactly when it is the order-2 group or
    the Klein group (the two abelian dihedral groups).
    """
    if isinstance(group, GenDihedralGroup) and not group.is_abelian():
        if is_limit_of_cyclic(group.base):
            return LimitDecision(True, "base group has cyclic torsion")
        return LimitDecision(
            False,
            f"base torsion {group.base.invariant_factors} is not cyclic",
        )
    model = _abelian_model(group)
    if model is None:
        raise TypeError(f"unsupported group kind {type(group).__name__}")
    if model == _ORDER_TWO:
        return LimitDecision(True, "isomorphic to the dihedral group of order 2")
    if model == _KLEIN:
        return LimitDecision(True, "isomorphic to the dihedral group of order 4")
    return LimitDecision(
        False, "abelian but not of order 2 or the Klein group"
    )


def rank_of_limit(group: GroupLike) -> int:
    """Minimal generator count of a member of the dihedral closure."""
    decision = is_limit_of_dihedral(group)
    if not decision:
        raise FamilyError(decision.reason)
    if isinstance(group, GenDihedralGroup):
        return group.base.rank + 1
    return group.rank


# ---------------------------------------------------------------------------
# Residual witnesses


@dataclass(frozen=True)
class DihedralResidualWitness:
    source: GenDihedralGroup
    half_order: int
    quotient: CyclicQuotientMap

    @cached_property
    def target(self) -> GenDihedralGroup:
        return GenDihedralGroup(self.quotient.target_group())

    def apply(self, x: GenDihedralElement) -> GenDihedralElement:
        if x.group != self.source:
            raise ValueError("element does not belong to the source group")
        image = self.quotient.apply(x.v)
        base = self.target.base
        coords = (image,) if base.invariant_factors else ()
        return self.target.element(base.element((), coords), x.eps)

    def __call__(self, x: GenDihedralElement) -> GenDihedralElement:
        return self.apply(x)


def dihedral_residual_witness(
    group: GenDihedralGroup, kill_none_of: Iterable[GenDihedralElement]
) -> DihedralResidualWitness:
    """A finite dihedral quotient keeping the listed elements nontrivial.

    Reflections stay nontrivial under any base quotient, so it is enough
    to choose a cyclic residual quotient of the base for the rotation
    parts that occur.
    """
    decision = is_limit_of_dihedral(group)
    if not decision:
        raise FamilyError(decision.reason)
    if group.is_abelian():
        raise FamilyError("the group is abelian; use a cyclic residual quotient")
    elements = list(kill_none_of)
    rotations = []
    for x in elements:
        if x.group != group:
            raise ValueError("element does not belong to the group")
        if x.is_identity():
            raise ValueError("the identity cannot be kept nontrivial")
        if x.eps == 0:
            rotations.append(x.v)
    quotient = cyclic_residual_quotient(group.base, rotations)
    witness = DihedralResidualWitness(group, quotient.modulus, quotient)
    for x in elements:
        if witness.apply(x).is_identity():
            raise AssertionError("internal error: witness killed a listed element")
    return witness


# ---------------------------------------------------------------------------
# Embedding of abelian markings into dihedral ones


def dih_embed(marked: MarkedGroup) -> MarkedGroup:
    """(A, S) -> (Dih(A), (flip, S...)); injective and ball-preserving."""
    if not isinstance(marked.group, AbelianGroup):
        raise TypeError("only abelian marked groups embed this way")
    group = GenDihedralGroup(marked.group)
    flip = group.reflection(marked.group.identity())
    gens = (flip,) + tuple(group.rotation(x) for x in marked.generators)
    return MarkedGroup(group, gens)


# ---------------------------------------------------------------------------
# Cantor-Bendixson ranks and accumulation witnesses


RANK_FAMILIES = ("dihedral-closure", "cyclic-closure", "all-marked")


def cb_rank(group: GroupLike, family: str) -> int:
    """Cantor-Bendixson rank within the named family: the free rank.

    Rank 0 means isolated; finite groups always get 0, and the rank of
    Dih(A) in the dihedral closure equals the free rank of A.
    """
    if family not in RANK_FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {RANK_FAMILIES}")
    if family == "dihedral-closure":
        decision = is_limit_of_dihedral(group)
        if not decision:
            raise FamilyError(decision.reason)
        if isinstance(group, GenDihedralGroup):
            return group.base.free_rank
        return 0
    model = _abelian_model(group)
    if model is None:
        raise FamilyError(
            "rank in this family is computed for abelian groups "
            "(or abelian dihedral groups) only"
        )
    if family == "cyclic-closure" and not is_limit_of_cyclic(model):
        raise FamilyError("torsion is not cyclic, so the group is outside the closure")
    return model.free_rank


def _quotient_by_prime(base: AbelianGroup, p: int):
    """Kill p times the last free generator; returns (group, element map)."""
    if base.free_rank == 0:
        raise ValueError("no infinite cyclic factor to collapse")
    factors = base.invariant_factors
    if factors:
        d = factors[-1]
        new_factors = factors[:-1] + (d * p,)
    else:
        d = 1
        new_factors = (p,)
    target = AbelianGroup(base.free_rank - 1, new_factors)

    def convert(x: AbelianElement) -> AbelianElement:
        extra = x.free[-1] % p
        if factors:
            # glue the old last torsion coordinate with the new mod-p one
            a = x.torsion[-1]
            inv = pow(d, -1, p)
            glued = a + d * (((extra - a) * inv) % p)
            torsion = x.torsion[:-1] + (glued,)
        else:
            torsion = (extra,)
        return target.element(x.free[:-1], torsion)

    return target, convert


@dataclass(frozen=True)
class AccumulationWitness:
    target: MarkedGroup
    primes: tuple[int, ...]
    members: tuple[MarkedGroup, ...]
    separators: dict
    report: ConvergenceReport


def _rotation_word_blocks(marked: MarkedGroup):
    """Words over the marking that evaluate into the base group.

    For an abelian marking every generator already does; for a dihedral
    marking the rotation entries do, and products of two reflections do.
    Returns (letter tuples, base elements) pairs generating the base.
    """
    if isinstance(marked.group, AbelianGroup):
        return [((i + 1,), s) for i, s in enumerate(marked.generators)]
    blocks = []
    first_ref = None
    for i, s in enumerate(marked.generators):
        if s.eps == 0:
            blocks.append(((i + 1,), s.v))
        elif first_ref is None:
            first_ref = (i, s)
        else:
            blocks.append(((i + 1, first_ref[0] + 1), s.v - first_ref[1].v))
    return blocks


def accumulation_witness(
    marked: MarkedGroup,
    count: int,
    r_max: int | None = None,
    method: str = "auto",
    cap: int | None = None,
) -> AccumulationWitness:
    """A verified family of distinct marked groups accumulating on `marked`.

    One infinite cyclic factor is collapsed modulo increasing odd primes
    coprime to the torsion order.  Pairwise distinctness is certified by
    explicit separating words (verified by evaluation) and the report
    carries the agreement radii with the target.
    """
    if count < 1:
        raise ValueError("count must be positive")
    group = marked.group
    if isinstance(group, AbelianGroup):
        base = group
    elif isinstance(group, GenDihedralGroup):
        base = group.base
    else:
        raise TypeError("accumulation witnesses need an abelian or dihedral marking")
    if base.free_rank == 0:
        raise FamilyError("rank 0: the marked group is isolated in its family")
    torsion = base.torsion_order()
    chosen = []
    for p in primes():
        if p == 2 or torsion % p == 0:
            continue
        chosen.append(p)
        if len(chosen) == count:
            break

    members = []
    for p in chosen:
        quotient, convert = _quotient_by_prime(base, p)
        if isinstance(group, AbelianGroup):
            members.append(MarkedGroup(quotient, tuple(convert(s) for s in marked.generators)))
        else:
            dq = GenDihedralGroup(quotient)
            members.append(
                MarkedGroup(
                    dq,
                    tuple(dq.element(convert(s.v), s.eps) for s in marked.generators),
                )
            )

    # a word evaluating to the collapsed free generator
    blocks = _rotation_word_blocks(marked)
    target_elem = base.free_generator(base.free_rank - 1)
    coeffs = express_in_generators(base, [b for _, b in blocks], target_elem)
    if coeffs is None:
        raise AssertionError("internal error: marking does not express the base")
    letters: list[int] = []
    for (block, _), c in zip(blocks, coeffs):
        if c >= 0:
            letters.extend(block * c)
        else:
            inverse_block = tuple(-l for l in reversed(block))
            letters.extend(inverse_block * (-c))
    unit_word = free_reduce(letters, marked.arity)

    separators = {}
    for i in range(len(members)):
        word = unit_word ** chosen[i]
        if marked.is_relation(word) or not members[i].is_relation(word):
            raise AssertionError("internal error: bad separating word")
        for j in range(i + 1, len(members)):
            if members[j].is_relation(word):
                raise AssertionError("internal error: bad separating word")
            separators[(i, j)] = word

    if r_max is None:
        r_max = max(chosen) - 1
    report = check_convergence(
        members,
        marked,
        chosen,
        schedule=tuple(range(1, len(chosen) + 1)),
        r_max=r_max,
        method=method,
        cap=cap,
    )
    return AccumulationWitness(
        marked, tuple(chosen), tuple(members), separators, report
    )


# ---------------------------------------------------------------------------
# Characteristic systems of the closures


@dataclass(frozen=True)
class CharacteristicSystem:
    """(alpha, n): the space looks like omega^alpha * n + 1."""

    alpha: int
    points: int

    def __str__(self) -> str:
        return f"omega^{self.alpha} * {self.points} + 1"


def closure_characteristic(arity: int, family: str) -> CharacteristicSystem:
    """Characteristic system of a closure inside the marked groups of
    the given arity: dihedral needs arity >= 2 and gives
    (arity - 1, 2^arity - 1); abelian gives (arity, 1); cyclic is the
    arity-1 case (1, 1).
    """
    if arity < 1:
        raise ValueError("arity must be positive")
    if family == "dihedral":
        if arity < 2:
            raise ValueError("the dihedral closure needs at least 2 generators")
        return CharacteristicSystem(arity - 1, 2**arity - 1)
    if family == "abelian":
        return CharacteristicSystem(arity, 1)
    if family == "cyclic":
        if arity != 1:
            raise ValueError("the cyclic closure is computed on one generator")
        return CharacteristicSystem(1, 1)
    raise ValueError(f"unknown family {family!r}")
