import pytest

from mgs.abelian import AbelianGroup
from mgs.dihedral import GenDihedralGroup, materialize_table
from mgs.logic import (
    And,
    Atom,
    BudgetExceeded,
    Implies,
    UniversalSentence,
    builtin_sentence,
    evaluate_body,
    holds_in,
    squared_sentence,
)
from mgs.tables import load_fixture
from mgs.words import Word, free_reduce

from helpers import abelian_groups_up_to


def dihedral_table(n):
    return materialize_table(GenDihedralGroup(AbelianGroup(0, (n,))))


def test_builtin_p1_structure():
    one = Word((), 2)
    expected = UniversalSentence(
        2,
        Implies(
            And(
                (
                    Atom(free_reduce([1, 1], 2), one, False),
                    Atom(free_reduce([2, 2], 2), one, False),
                )
            ),
            Atom(free_reduce([1, 2], 2), free_reduce([2, 1], 2), True),
        ),
    )
    assert builtin_sentence("P1") == expected
    assert builtin_sentence("@p4") == builtin_sentence("P4")
    with pytest.raises(ValueError):
        builtin_sentence("P9")


def test_variable_bound_validation():
    with pytest.raises(ValueError):
        UniversalSentence(1, Atom(free_reduce([2], 2), Word((), 2), True))


def test_p_sentences_hold_in_dihedral_groups():
    for n in range(3, 9):
        t = dihedral_table(n)
        for name in ("P1", "P2", "P3", "P4"):
            assert holds_in(t, builtin_sentence(name), budget=10**8).holds


def test_p1_fails_in_a4_with_two_noncommuting_three_cycles():
    a4 = load_fixture("A4")
    out = holds_in(a4, builtin_sentence("P1"))
    assert not out.holds
    x, y = out.counterexample
    assert a4.element_order(x) == 3 and a4.element_order(y) == 3
    assert a4.mul(x, y) != a4.mul(y, x)
    assert evaluate_body(a4, builtin_sentence("P1").body, out.counterexample) is False


def test_p4_fails_in_dih_z4_z4():
    t = materialize_table(GenDihedralGroup(AbelianGroup(0, (4, 4))))
    out = holds_in(t, builtin_sentence("P4"), budget=10**8)
    assert not out.holds
    assert evaluate_body(t, builtin_sentence("P4").body, out.counterexample) is False
    x, y = out.counterexample[:2]
    # two distinct central involutions witness the failure
    assert x != y
    assert t.element_order(x) == 2 and t.element_order(y) == 2


def test_p1_to_p3_hold_in_generalized_dihedral():
    t = materialize_table(GenDihedralGroup(AbelianGroup(0, (4, 4))))
    for name in ("P1", "P2", "P3"):
        assert holds_in(t, builtin_sentence(name), budget=10**8).holds


def test_counterexample_is_lexicographically_first():
    # forall x : x = 1 fails at the first non-identity element
    s = UniversalSentence(1, Atom(free_reduce([1], 1), Word((), 1), True))
    t = materialize_table(AbelianGroup(0, (5,)))
    out = holds_in(t, s)
    assert out.counterexample == (1,)


def test_budget():
    t = dihedral_table(6)
    with pytest.raises(BudgetExceeded):
        holds_in(t, builtin_sentence("P3"), budget=1000)


def test_squared_commutativity_in_d16():
    commute = UniversalSentence(
        2, Atom(free_reduce([1, 2], 2), free_reduce([2, 1], 2), True)
    )
    sq = squared_sentence(commute)
    d16 = dihedral_table(8)
    assert not holds_in(d16, commute).holds
    assert holds_in(d16, sq).holds


def test_squared_tautology_is_tautology():
    taut = UniversalSentence(
        1, Atom(free_reduce([1], 1), free_reduce([1], 1), True)
    )
    sq = squared_sentence(taut)
    for t in (dihedral_table(5), materialize_table(AbelianGroup(0, (7,)))):
        assert holds_in(t, sq).holds


def test_squared_x_equals_one():
    s = UniversalSentence(1, Atom(free_reduce([1], 1), Word((), 1), True))
    sq = squared_sentence(s)
    assert sq.body.left.letters == (1, 1)
    klein = materialize_table(AbelianGroup(0, (2, 2)))
    z3 = materialize_table(AbelianGroup(0, (3,)))
    assert holds_in(klein, sq).holds
    out = holds_in(z3, sq)
    assert not out.holds and out.counterexample == (1,)


def test_squared_reduces_terms():
    # x * y^-1 squares to x^2 * y^-2 with reduction applied across letters
    s = UniversalSentence(2, Atom(free_reduce([1, -2], 2), Word((), 2), True))
    sq = squared_sentence(s)
    assert sq.body.left.letters == (1, 1, -2, -2)


def test_universal_sentences_pass_to_subgroups():
    t = dihedral_table(6)
    rotations = [i for i in range(12) if t.labels[i].startswith("rot")]
    sub, _ = t.subgroup_table(rotations)
    for name in ("P1", "P2", "P3", "P4"):
        s = builtin_sentence(name)
        if holds_in(t, s).holds:
            assert holds_in(sub, s).holds


def test_p_sentences_hold_in_all_small_dihedral():
    for base in abelian_groups_up_to(8):
        t = materialize_table(GenDihedralGroup(base))
        for name in ("P1", "P2", "P3"):
            assert holds_in(t, builtin_sentence(name), budget=10**8).holds
