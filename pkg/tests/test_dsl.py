import random

import pytest

from mgs.abelian import AbelianGroup, canonical_invariant_factors
from mgs.dihedral import GenDihedralGroup
from mgs.dsl import (
    ElementLiteral,
    ParseError,
    parse_element,
    parse_elements,
    parse_group,
    parse_marked,
    parse_sentence,
    parse_spec,
    parse_word,
    print_group,
    print_marked,
    print_sentence,
    print_word,
)
from mgs.logic import And, Atom, Implies, Not, Or, UniversalSentence, builtin_sentence
from mgs.topology import MarkedGroup
from mgs.words import Word, free_reduce


def test_parse_group_examples():
    g = parse_group("Dih(Z^2 x Z/6)")
    assert isinstance(g, GenDihedralGroup)
    assert g.base == AbelianGroup(2, (6,))
    assert parse_group("Z") == AbelianGroup(1)
    assert parse_group("Z^3") == AbelianGroup(3)
    assert parse_group("Z/4 x Z/2") == AbelianGroup(0, (2, 4))
    assert parse_group("Z/1") == AbelianGroup(0, ())
    assert parse_group("D12") == GenDihedralGroup(AbelianGroup(0, (6,)))
    assert parse_group("D2") == GenDihedralGroup(AbelianGroup(0, ()))
    assert parse_group("Dinf") == GenDihedralGroup(AbelianGroup(1))
    assert parse_group("Z/2 x Z/3") == AbelianGroup(0, (6,))


def test_parse_group_errors():
    with pytest.raises(ParseError):
        parse_group("D13")
    with pytest.raises(ParseError):
        parse_group("Dih(Z")
    with pytest.raises(ParseError):
        parse_group("Q8")
    with pytest.raises(ParseError):
        parse_group("Dih(Z) x Z")
    with pytest.raises(ParseError):
        parse_group("Z x")


def test_parse_error_position():
    try:
        parse_group("Z/")
    except ParseError as exc:
        assert exc.line == 1
        assert exc.column == 3
    else:
        raise AssertionError("expected a parse error")


def test_parse_marked_examples():
    m = parse_marked("D12:a,b")
    d12 = GenDihedralGroup(AbelianGroup(0, (6,)))
    assert m == MarkedGroup(d12, (d12.reflection([0]), d12.rotation([1])))
    m2 = parse_marked("Z^2:(1,0),(0,1)")
    z2 = AbelianGroup(2)
    assert m2 == MarkedGroup(z2, (z2.element((1, 0)), z2.element((0, 1))))
    m3 = parse_marked("Dinf:ref(0),rot(1)")
    dinf = GenDihedralGroup(AbelianGroup(1))
    assert m3 == MarkedGroup(dinf, (dinf.reflection([0]), dinf.rotation([1])))
    m4 = parse_marked("Dinf:b,a")
    assert m4.generators == (dinf.rotation([1]), dinf.reflection([0]))


def test_parse_element_with_semicolon():
    g = parse_group("Dih(Z^2 x Z/6)")
    e = parse_element("rot(3,-1;2)", g)
    assert e == g.rotation(g.base.element((3, -1), (2,)))
    e2 = parse_element("ref(0;1)", GenDihedralGroup(AbelianGroup(1, (2,))))
    assert e2.eps == 1
    # positional split without the semicolon
    e3 = parse_element("rot(3,-1,2)", g)
    assert e3 == e


def test_parse_element_zero_shorthand():
    g = parse_group("Dih(Z^2)")
    assert parse_element("ref(0)", g) == g.reflection([0, 0])
    d2 = parse_group("D2")
    assert parse_element("ref(0)", d2) == d2.reflection(d2.base.identity())


def test_parse_elements_list():
    z2 = AbelianGroup(2)
    elems = parse_elements("(1,0),(0,1)", z2)
    assert elems == (z2.element((1, 0)), z2.element((0, 1)))


def test_parse_element_errors():
    g = parse_group("D12")
    with pytest.raises(ValueError):
        parse_element("(1)", g)  # needs rot/ref tag
    with pytest.raises(ValueError):
        parse_element("rot(1)", AbelianGroup(1))
    with pytest.raises(ValueError):
        parse_element("rot(1,2,3)", g)


def test_parse_word_examples():
    w = parse_word("a b^3 a^-1")
    assert w == free_reduce([1, 2, 2, 2, -1], 2)
    assert parse_word("g1*g2^-2") == free_reduce([1, -2, -2], 2)
    assert parse_word("ab^2") == free_reduce([1, 2, 2], 2)
    assert parse_word("1", arity=2) == Word((), 2)
    assert parse_word("g2", arity=5).arity == 5
    with pytest.raises(ParseError):
        parse_word("g3", arity=2)


def test_parse_sentence_matches_builtin():
    s = parse_sentence("forall x y : (x^2 != 1 & y^2 != 1) -> x*y = y*x")
    assert s == builtin_sentence("P1")
    assert parse_sentence("@P1") == builtin_sentence("P1")
    assert parse_sentence("@P3") == builtin_sentence("P3")


def test_parse_sentence_shapes():
    s = parse_sentence("forall x : x = 1 | x^2 != 1")
    assert isinstance(s.body, Or)
    s2 = parse_sentence("forall x y : !(x = y)")
    assert isinstance(s2.body, Not)
    s3 = parse_sentence("forall x y : (x*y)^2 = 1 -> x = y")
    assert s3.body.hypothesis.left.letters == (1, 2, 1, 2)
    s4 = parse_sentence("forall x y : xy = yx")
    assert s4.body == Atom(free_reduce([1, 2], 2), free_reduce([2, 1], 2), True)


def test_parse_sentence_errors():
    with pytest.raises(ParseError):
        parse_sentence("forall : x = 1")
    with pytest.raises(ParseError):
        parse_sentence("forall x x : x = 1")
    with pytest.raises(ParseError):
        parse_sentence("forall x : y = 1")
    with pytest.raises(ParseError):
        parse_sentence("@P7")


def test_print_round_trips():
    for name in ("P1", "P2", "P3", "P4"):
        s = builtin_sentence(name)
        assert parse_sentence(print_sentence(s)) == s
    for text in ("Z", "Z^2 x Z/6", "Dih(Z/4)", "Dih(Z^2 x Z/3)", "Z/1"):
        g = parse_group(text)
        assert parse_group(print_group(g)) == g
    for text in ("D12:a,b", "Z^2:(1,0),(0,1)", "Dinf:rot(1),ref(0)"):
        m = parse_marked(text)
        assert parse_marked(print_marked(m)) == m


def test_print_round_trips_random_words():
    rng = random.Random(4)
    for _ in range(100):
        raw = [rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(rng.randint(0, 12))]
        w = free_reduce(raw, 3)
        assert parse_word(print_word(w), arity=3) == w


def random_formula(rng, depth=3):
    k = 3
    if depth == 0 or rng.random() < 0.4:
        raw = [rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(rng.randint(0, 4))]
        left = free_reduce(raw, k)
        right = (
            Word((), k)
            if rng.random() < 0.5
            else free_reduce([rng.choice([1, 2, 3])], k)
        )
        return Atom(left, right, rng.random() < 0.5)
    kind = rng.choice(["and", "or", "not", "implies"])
    if kind == "and":
        return And(tuple(random_formula(rng, depth - 1) for _ in range(rng.randint(2, 3))))
    if kind == "or":
        return Or(tuple(random_formula(rng, depth - 1) for _ in range(rng.randint(2, 3))))
    if kind == "not":
        return Not(random_formula(rng, depth - 1))
    return Implies(random_formula(rng, depth - 1), random_formula(rng, depth - 1))


def test_print_round_trips_random_sentences():
    rng = random.Random(12)
    for _ in range(120):
        s = UniversalSentence(3, random_formula(rng))
        assert parse_sentence(print_sentence(s)) == s


def test_parse_spec_dispatch():
    assert isinstance(parse_spec("D12:a,b"), MarkedGroup)
    assert isinstance(parse_spec("Z/5"), AbelianGroup)
    assert isinstance(parse_spec("Dih(Z^2)"), GenDihedralGroup)
    assert isinstance(parse_spec("@P2"), UniversalSentence)
    assert isinstance(parse_spec("forall x : x = 1"), UniversalSentence)
    assert isinstance(parse_spec("g1*g2^-1"), Word)
    assert isinstance(parse_spec("rot(1,0)"), ElementLiteral)
    assert parse_spec("Dih(Z^2 x Z/6)") == GenDihedralGroup(canonical_invariant_factors([None, None, 6]))
