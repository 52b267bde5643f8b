"""Universal sentences of group theory and exhaustive model checking.

Sentences are ``forall x_1 ... x_k  phi`` with phi quantifier-free over
atoms ``term = term`` / ``term != term`` (terms are reduced words in the
variables; the empty word is the constant 1).  There are no existential
quantifiers anywhere: the AST cannot express them.

Checking is exhaustive over all k-tuples of a finite group, in
lexicographic order, but assignments are extended one variable at a
time and the body is partially evaluated after each binding; subtrees
whose truth value is already decided are skipped.  The reported
counterexample is still the lexicographically first failing tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .tables import FiniteGroupTable
from .words import Word, free_reduce

DEFAULT_EVAL_BUDGET = 10_000_000


class BudgetExceeded(ValueError):
    """The requested exhaustive check is larger than the allowed budget."""


@dataclass(frozen=True)
class Atom:
    """``left = right`` when positive, ``left != right`` otherwise."""

    left: Word
    right: Word
    positive: bool = True


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    children: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["Formula", ...]


@dataclass(frozen=True)
class Implies:
    hypothesis: "Formula"
    conclusion: "Formula"


Formula = Union[Atom, Not, And, Or, Implies]


@lru_cache(maxsize=None)
def _max_variable(formula: Formula) -> int:
    if isinstance(formula, Atom):
        letters = formula.left.letters + formula.right.letters
        return max((abs(l) for l in letters), default=0)
    if isinstance(formula, Not):
        return _max_variable(formula.child)
    if isinstance(formula, (And, Or)):
        return max((_max_variable(c) for c in formula.children), default=0)
    return max(_max_variable(formula.hypothesis), _max_variable(formula.conclusion))


@dataclass(frozen=True)
class UniversalSentence:
    variables: int
    body: Formula

    def __post_init__(self):
        if self.variables < 0:
            raise ValueError("variable count must be nonnegative")
        used = _max_variable(self.body)
        if used > self.variables:
            raise ValueError(
                f"body uses variable x{used} but only {self.variables} are quantified"
            )


@dataclass(frozen=True)
class SentenceCheck:
    holds: bool
    counterexample: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.holds


def _eval_term(word: Word, assignment, rows, inverses) -> int:
    v = 0
    for ell in word.letters:
        g = assignment[ell - 1] if ell > 0 else inverses[assignment[-ell - 1]]
        v = rows[v][g]
    return v


def _partial(formula, assignment, bound, rows, inverses):
    """Three-valued evaluation: True, False, or a residual formula."""
    if isinstance(formula, Atom):
        if _max_variable(formula) > bound:
            return formula
        a = _eval_term(formula.left, assignment, rows, inverses)
        b = _eval_term(formula.right, assignment, rows, inverses)
        return (a == b) == formula.positive
    if isinstance(formula, Not):
        c = _partial(formula.child, assignment, bound, rows, inverses)
        if isinstance(c, bool):
            return not c
        return Not(c)
    if isinstance(formula, And):
        residual = []
        for child in formula.children:
            c = _partial(child, assignment, bound, rows, inverses)
            if c is False:
                return False
            if c is not True:
                residual.append(c)
        if not residual:
            return True
        return residual[0] if len(residual) == 1 else And(tuple(residual))
    if isinstance(formula, Or):
        residual = []
        for child in formula.children:
            c = _partial(child, assignment, bound, rows, inverses)
            if c is True:
                return True
            if c is not False:
                residual.append(c)
        if not residual:
            return False
        return residual[0] if len(residual) == 1 else Or(tuple(residual))
    h = _partial(formula.hypothesis, assignment, bound, rows, inverses)
    if h is False:
        return True
    c = _partial(formula.conclusion, assignment, bound, rows, inverses)
    if c is True:
        return True
    if h is True:
        return c
    if c is False:
        return Not(h)
    return Implies(h, c)


def holds_in(
    table: FiniteGroupTable,
    sentence: UniversalSentence,
    budget: int = DEFAULT_EVAL_BUDGET,
) -> SentenceCheck:
    """Exhaustively decide a universal sentence on a finite group.

    Returns the verdict together with the lexicographically first
    failing tuple of element indices when the sentence fails.
    """
    n = table.order
    k = sentence.variables
    if n**k > budget:
        raise BudgetExceeded(
            f"{n}^{k} assignments exceed the evaluation budget of {budget}"
        )
    rows = table.rows
    inverses = table.inverses

    def search(depth, assignment, residual):
        if residual is True:
            return None
        if residual is False:
            return assignment + (0,) * (k - depth)
        for v in range(n):
            extended = assignment + (v,)
            res2 = _partial(residual, extended, depth + 1, rows, inverses)
            hit = search(depth + 1, extended, res2)
            if hit is not None:
                return hit
        return None

    start = _partial(sentence.body, (), 0, rows, inverses)
    witness = search(0, (), start)
    if witness is None:
        return SentenceCheck(True, None)
    # counterexamples are re-evaluated before being handed back
    confirmed = _partial(sentence.body, witness, k, rows, inverses)
    if confirmed is not False:
        raise AssertionError("internal error: counterexample does not falsify the body")
    return SentenceCheck(False, witness)


def evaluate_body(table: FiniteGroupTable, body: Formula, assignment) -> bool:
    """Plain evaluation of a quantifier-free body at a full assignment."""
    out = _partial(body, tuple(assignment), len(assignment), table.rows, table.inverses)
    if not isinstance(out, bool):
        raise ValueError("assignment does not bind every variable")
    return out


# ---------------------------------------------------------------------------
# Built-in sentences


def _term(k: int, *letters: int) -> Word:
    return free_reduce(letters, k)


def _one(k: int) -> Word:
    return Word((), k)


def _sentences() -> dict[str, UniversalSentence]:
    x, y, z, t = 1, 2, 3, 4

    # every pair of non-involutions commutes
    p1 = UniversalSentence(
        2,
        Implies(
            And((Atom(_term(2, x, x), _one(2), False), Atom(_term(2, y, y), _one(2), False))),
            Atom(_term(2, x, y), _term(2, y, x)),
        ),
    )
    # a non-central involution conjugates every non-involution to its inverse
    p2 = UniversalSentence(
        3,
        Implies(
            And(
                (
                    Atom(_term(3, x), _one(3), False),
                    Atom(_term(3, x, x), _one(3)),
                    Atom(_term(3, y, y), _one(3), False),
                    Atom(_term(3, x, z), _term(3, z, x), False),
                )
            ),
            Atom(_term(3, -x, y, x), _term(3, -y)),
        ),
    )
    # the product of two commuting non-central involutions is central
    p3 = UniversalSentence(
        5,
        Implies(
            And(
                (
                    Atom(_term(5, x, z), _term(5, z, x), False),
                    Atom(_term(5, y, t), _term(5, t, y), False),
                    Atom(_term(5, x, x), _one(5)),
                    Atom(_term(5, y, y), _one(5)),
                    Atom(_term(5, x, y, x, y), _one(5)),
                )
            ),
            Atom(_term(5, x, y, 5), _term(5, 5, x, y)),
        ),
    )
    # at most one central element of order 2
    p4 = UniversalSentence(
        4,
        Implies(
            And(
                (
                    Atom(_term(4, x), _one(4), False),
                    Atom(_term(4, x, x), _one(4)),
                    Atom(_term(4, y), _one(4), False),
                    Atom(_term(4, y, y), _one(4)),
                    Atom(_term(4, z, z), _one(4), False),
                    Atom(_term(4, t, t), _one(4), False),
                    Atom(_term(4, x, z), _term(4, z, x)),
                    Atom(_term(4, y, t), _term(4, t, y)),
                )
            ),
            Atom(_term(4, x), _term(4, y)),
        ),
    )
    return {"P1": p1, "P2": p2, "P3": p3, "P4": p4}


BUILTIN_SENTENCES = _sentences()


def builtin_sentence(name: str) -> UniversalSentence:
    try:
        return BUILTIN_SENTENCES[name.upper().lstrip("@")]
    except KeyError:
        raise ValueError(f"unknown built-in sentence {name!r}") from None


# ---------------------------------------------------------------------------
# The squared transform


def _square_word(word: Word) -> Word:
    letters = []
    for ell in word.letters:
        letters.extend((ell, ell))
    return free_reduce(letters, word.arity)


def _square_formula(formula: Formula) -> Formula:
    if isinstance(formula, Atom):
        return Atom(_square_word(formula.left), _square_word(formula.right), formula.positive)
    if isinstance(formula, Not):
        return Not(_square_formula(formula.child))
    if isinstance(formula, And):
        return And(tuple(_square_formula(c) for c in formula.children))
    if isinstance(formula, Or):
        return Or(tuple(_square_formula(c) for c in formula.children))
    return Implies(_square_formula(formula.hypothesis), _square_formula(formula.conclusion))


def squared_sentence(sentence: UniversalSentence) -> UniversalSentence:
    """Substitute x_i^2 for every variable occurrence.

    The result holds in G exactly when the original sentence holds with
    witnesses ranging over the set of squares.
    """
    return UniversalSentence(sentence.variables, _square_formula(sentence.body))
