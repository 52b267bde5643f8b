"""Finite groups presented by Cayley tables.

Tables are validated on load: index 0 must be the identity, every row
and column must be a permutation, inverses must exist and associativity
is checked exhaustively (O(n^3), capped).  On top of the validated
tables sit structural queries, brute-force automorphism groups, and a
recognizer for generalized dihedral structure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from itertools import product
from typing import Iterable, Sequence

from .abelian import AbelianGroup

ASSOCIATIVITY_BOUND = 256
AUTOMORPHISM_BOUND = 100


class TableError(ValueError):
    """A raw table failed validation; the message carries the first witness."""


@dataclass(frozen=True)
class FiniteGroupTable:
    order: int
    rows: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]

    def mul(self, i: int, j: int) -> int:
        return self.rows[i][j]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        inv = [0] * self.order
        for i in range(self.order):
            inv[i] = self.rows[i].index(0)
        return tuple(inv)

    def inv(self, i: int) -> int:
        return self.inverses[i]

    def power(self, i: int, n: int) -> int:
        if n < 0:
            return self.power(self.inv(i), -n)
        out = 0
        base = i
        while n:
            if n & 1:
                out = self.rows[out][base]
            base = self.rows[base][base]
            n >>= 1
        return out

    def element_order(self, i: int) -> int:
        n = 1
        x = i
        while x != 0:
            x = self.rows[x][i]
            n += 1
        return n

    def is_abelian(self) -> bool:
        r = self.rows
        return all(
            r[i][j] == r[j][i] for i in range(self.order) for j in range(i + 1, self.order)
        )

    def center(self) -> tuple[int, ...]:
        r = self.rows
        return tuple(
            i
            for i in range(self.order)
            if all(r[i][j] == r[j][i] for j in range(self.order))
        )

    def closure(self, seed: Iterable[int]) -> frozenset[int]:
        seen = {0}
        frontier = [0]
        gens = [g for g in seed]
        for g in gens:
            if g not in seen:
                seen.add(g)
                frontier.append(g)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.rows[x][g]
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)

    def subgroup_table(self, members: Iterable[int]) -> tuple["FiniteGroupTable", tuple[int, ...]]:
        """Table of a subgroup given by its element indices.

        Returns the new table and the tuple of original indices in the
        new order (identity first, then ascending).
        """
        members = sorted(set(members))
        if not members or members[0] != 0:
            raise ValueError("a subgroup must contain the identity")
        where = {x: i for i, x in enumerate(members)}
        try:
            rows = tuple(
                tuple(where[self.rows[x][y]] for y in members) for x in members
            )
        except KeyError as exc:
            raise ValueError(f"set is not closed under multiplication: {exc}") from None
        labels = tuple(self.labels[x] for x in members)
        return FiniteGroupTable(len(members), rows, labels), tuple(members)

    def __str__(self) -> str:
        return f"<group table of order {self.order}>"


def validate_table(
    raw: Sequence[Sequence[int]],
    labels: Sequence[str] | None = None,
    *,
    assoc_bound: int = ASSOCIATIVITY_BOUND,
    check_associativity: bool = True,
) -> FiniteGroupTable:
    """Validate a raw multiplication table and wrap it.

    Raises TableError with the first offending entry or triple.
    """
    n = len(raw)
    if n == 0:
        raise TableError("empty table")
    rows = []
    for i, row in enumerate(raw):
        row = tuple(int(x) for x in row)
        if len(row) != n:
            raise TableError(f"row {i} has length {len(row)}, expected {n}")
        for j, x in enumerate(row):
            if not 0 <= x < n:
                raise TableError(f"entry at ({i},{j}) is {x}, out of range")
        rows.append(row)
    rows = tuple(rows)
    full = frozenset(range(n))
    for i in range(n):
        if rows[0][i] != i or rows[i][0] != i:
            raise TableError(f"index 0 is not the identity (fails at {i})")
    for i in range(n):
        if frozenset(rows[i]) != full:
            raise TableError(f"row {i} is not a permutation")
    for j in range(n):
        if frozenset(rows[i][j] for i in range(n)) != full:
            raise TableError(f"column {j} is not a permutation")
    for i in range(n):
        row = rows[i]
        j = row.index(0)
        if rows[j][i] != 0:
            raise TableError(f"element {i} has no two-sided inverse")
    if check_associativity:
        if n > assoc_bound:
            raise TableError(
                f"order {n} exceeds the associativity check bound {assoc_bound}; "
                "pass check_associativity=False to skip"
            )
        for a in range(n):
            for b in range(n):
                ab = rows[a][b]
                row_b = rows[b]
                row_ab = rows[ab]
                for c in range(n):
                    if row_ab[c] != rows[a][row_b[c]]:
                        raise TableError(
                            f"associativity fails at ({a},{b},{c}): "
                            f"({a}*{b})*{c} != {a}*({b}*{c})"
                        )
    if labels is None:
        labels = tuple(f"g{i}" for i in range(n))
    else:
        labels = tuple(str(s) for s in labels)
        if len(labels) != n:
            raise TableError(f"{len(labels)} labels for {n} elements")
    return FiniteGroupTable(n, rows, labels)


# ---------------------------------------------------------------------------
# Serialization


def dumps_json(table: FiniteGroupTable) -> str:
    payload = {
        "order": table.order,
        "labels": list(table.labels),
        "table": [list(row) for row in table.rows],
    }
    return json.dumps(payload, indent=1) + "\n"


def loads_json(text: str, **kwargs) -> FiniteGroupTable:
    payload = json.loads(text)
    table = validate_table(payload["table"], payload.get("labels"), **kwargs)
    if payload.get("order") not in (None, table.order):
        raise TableError("declared order does not match the table")
    return table


def dumps_text(table: FiniteGroupTable) -> str:
    lines = [str(table.order)]
    lines.extend(" ".join(str(x) for x in row) for row in table.rows)
    return "\n".join(lines) + "\n"


def loads_text(text: str, **kwargs) -> FiniteGroupTable:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise TableError("empty table file")
    n = int(lines[0])
    raw = [[int(x) for x in ln.split()] for ln in lines[1 : n + 1]]
    if len(raw) != n:
        raise TableError(f"expected {n} rows, found {len(raw)}")
    return validate_table(raw, **kwargs)


def load_table(path, **kwargs) -> FiniteGroupTable:
    text = open(path, "r", encoding="utf-8").read()
    if str(path).endswith(".json"):
        return loads_json(text, **kwargs)
    return loads_text(text, **kwargs)


def fixture_names() -> list[str]:
    root = resources.files("mgs") / "fixtures"
    return sorted(entry.name for entry in root.iterdir())


def load_fixture(name: str) -> FiniteGroupTable:
    root = resources.files("mgs") / "fixtures"
    for suffix in ("", ".json", ".txt"):
        candidate = root / (name + suffix)
        if candidate.is_file():
            text = candidate.read_text(encoding="utf-8")
            if candidate.name.endswith(".json"):
                return loads_json(text)
            return loads_text(text)
    raise FileNotFoundError(f"no fixture named {name!r}")


# ---------------------------------------------------------------------------
# Automorphisms


def _greedy_generating_sequence(table: FiniteGroupTable) -> list[int]:
    # Order-descending scan; minimality is not required for correctness,
    # only that the result generates.
    candidates = sorted(
        range(1, table.order), key=lambda i: (-table.element_order(i), i)
    )
    gens: list[int] = []
    reached = frozenset({0})
    for x in candidates:
        if x in reached:
            continue
        gens.append(x)
        reached = table.closure(gens)
        if len(reached) == table.order:
            break
    return gens


def _expressions(table: FiniteGroupTable, gens: Sequence[int]) -> list[tuple[int, ...]]:
    """For each element, a product of generator positions reaching it."""
    n = table.order
    expr: list[tuple[int, ...] | None] = [None] * n
    expr[0] = ()
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, g in enumerate(gens):
                y = table.rows[x][g]
                if expr[y] is None:
                    expr[y] = expr[x] + (gi,)
                    nxt.append(y)
        frontier = nxt
    if any(e is None for e in expr):
        raise ValueError("generators do not generate the group")
    return expr  # type: ignore[return-value]


def automorphism_group(
    table: FiniteGroupTable, bound: int = AUTOMORPHISM_BOUND
) -> list[tuple[int, ...]]:
    """All automorphisms as permutation tuples, sorted.

    Candidate images for a generating sequence are filtered by element
    order, extended to the whole group through stored generator words,
    then verified to be bijective homomorphisms.
    """
    n = table.order
    if n > bound:
        raise ValueError(f"order {n} exceeds the automorphism search bound {bound}")
    gens = _greedy_generating_sequence(table)
    expr = _expressions(table, gens)
    orders = [table.element_order(i) for i in range(n)]
    pools = [
        [x for x in range(n) if orders[x] == orders[g]]
        for g in gens
    ]
    rows = table.rows
    found = []
    for images in product(*pools):
        phi = [0] * n
        for y in range(1, n):
            v = 0
            for gi in expr[y]:
                v = rows[v][images[gi]]
            phi[y] = v
        if len(set(phi)) != n:
            continue
        ok = True
        for a in range(n):
            ra = rows[a]
            pa = phi[a]
            for b in range(n):
                if phi[ra[b]] != rows[pa][phi[b]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(tuple(phi))
    return sorted(found)


# ---------------------------------------------------------------------------
# Abelian invariants of a subgroup, by counting solutions of x^(p^j) = 1


def abelian_invariant_factors_of(
    table: FiniteGroupTable, members: Iterable[int]
) -> tuple[int, ...]:
    members = sorted(set(members))
    orders = [table.element_order(x) for x in members]
    exponent = math.lcm(*orders)
    if exponent == 1:
        return ()
    partitions: dict[int, list[int]] = {}
    for p in _prime_factors(exponent):
        logs = [0]
        j = 1
        while True:
            pj = p**j
            cnt = sum(1 for x in members if table.power(x, pj) == 0)
            s, c = 0, cnt
            while c > 1 and c % p == 0:
                c //= p
                s += 1
            if c != 1:
                raise ValueError("subgroup is not abelian")
            logs.append(s)
            if s == logs[j - 1]:
                break
            j += 1
        conj = [logs[i] - logs[i - 1] for i in range(1, len(logs))]
        parts = []
        i = 1
        while True:
            width = sum(1 for c in conj if c >= i)
            if width == 0:
                break
            parts.append(width)
            i += 1
        partitions[p] = parts
    slots = max(len(v) for v in partitions.values())
    factors = []
    for s in range(slots):
        d = 1
        for p, parts in partitions.items():
            if s < len(parts):
                d *= p ** parts[s]
        factors.append(d)
    return tuple(sorted(d for d in factors if d > 1))


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Generalized dihedral recognition


@dataclass(frozen=True)
class DihedralRecognition:
    """Outcome of structure recognition on a finite group table.

    kind is 'abelian', 'generalized-dihedral' or 'no'.  For the
    generalized dihedral case, base holds the invariant factors of the
    rotation subgroup and the two partition fields give the witness
    coset split.
    """

    kind: str
    base: AbelianGroup | None = None
    rotation_part: tuple[int, ...] | None = None
    flip_coset: tuple[int, ...] | None = None
    reason: str = ""

    def is_generalized_dihedral(self) -> bool:
        return self.kind == "generalized-dihedral"


def recognize_generalized_dihedral(table: FiniteGroupTable) -> DihedralRecognition:
    """Decide whether a table is abelian, generalized dihedral, or neither.

    For a nonabelian table the candidate rotation subgroup is generated
    by all elements of order > 2 together with the center; the table is
    generalized dihedral exactly when that subgroup is abelian of index
    2 and every outside element inverts it under conjugation.
    """
    n = table.order
    if table.is_abelian():
        invs = abelian_invariant_factors_of(table, range(n))
        return DihedralRecognition("abelian", base=AbelianGroup(0, invs))
    rows = table.rows
    seed = [x for x in range(n) if rows[x][x] != 0]
    seed.extend(table.center())
    sub = table.closure(seed)
    if 2 * len(sub) != n:
        return DihedralRecognition(
            "no", reason=f"candidate subgroup has index {n // len(sub) if n % len(sub) == 0 else 'non-integer'}, not 2"
        )
    members = sorted(sub)
    for i in members:
        for j in members:
            if rows[i][j] != rows[j][i]:
                return DihedralRecognition("no", reason="candidate subgroup is not abelian")
    outside = [x for x in range(n) if x not in sub]
    for s in outside:
        s_inv = table.inv(s)
        for a in members:
            if rows[rows[s][a]][s_inv] != table.inv(a):
                return DihedralRecognition(
                    "no", reason=f"element {s} does not invert the subgroup"
                )
    invs = abelian_invariant_factors_of(table, members)
    return DihedralRecognition(
        "generalized-dihedral",
        base=AbelianGroup(0, invs),
        rotation_part=tuple(members),
        flip_coset=tuple(outside),
    )
