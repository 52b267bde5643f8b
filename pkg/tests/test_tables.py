import math

import pytest

from mgs.abelian import AbelianGroup
from mgs.dihedral import GenDihedralGroup, materialize_table
from mgs.tables import (
    TableError,
    abelian_invariant_factors_of,
    automorphism_group,
    dumps_json,
    dumps_text,
    load_fixture,
    loads_json,
    loads_text,
    recognize_generalized_dihedral,
    validate_table,
)

from helpers import abelian_groups_up_to


def cyclic_table(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def test_validate_cyclic():
    t = validate_table(cyclic_table(3))
    assert t.order == 3
    assert t.inverses == (0, 2, 1)


def test_validate_detects_latin_violation():
    rows = cyclic_table(3)
    rows[1][1], rows[1][2] = rows[1][2], rows[1][1]
    with pytest.raises(TableError, match="not a permutation|associativity"):
        validate_table(rows)


def test_validate_detects_bad_identity():
    rows = [[1, 0], [0, 1]]
    with pytest.raises(TableError, match="identity"):
        validate_table(rows)


def test_validate_detects_associativity():
    # Latin square with identity row/column that is not a group:
    # swap two entries inside the lower-right block of Z/5's table
    rows = cyclic_table(5)
    rows[2][3], rows[2][4] = rows[2][4], rows[2][3]
    rows[3][3], rows[3][4] = rows[3][4], rows[3][3]
    with pytest.raises(TableError):
        validate_table(rows)


def test_validate_assoc_bound():
    rows = cyclic_table(10)
    with pytest.raises(TableError, match="bound"):
        validate_table(rows, assoc_bound=5)
    t = validate_table(rows, assoc_bound=5, check_associativity=False)
    assert t.order == 10


def test_materialized_d12_is_valid():
    t = materialize_table(GenDihedralGroup(AbelianGroup(0, (6,))))
    again = validate_table(t.rows, t.labels)
    assert again.rows == t.rows


def test_serialization_roundtrip():
    t = materialize_table(GenDihedralGroup(AbelianGroup(0, (4,))))
    assert loads_json(dumps_json(t)).rows == t.rows
    assert loads_text(dumps_text(t)).rows == t.rows


def test_fixtures_match_materialization():
    for n in range(1, 13):
        base = AbelianGroup(0, (n,)) if n > 1 else AbelianGroup(0, ())
        fresh = materialize_table(GenDihedralGroup(base))
        fixture = load_fixture(f"D{2 * n}")
        assert fixture.rows == fresh.rows
        assert fixture.labels == fresh.labels
    assert load_fixture("DihZ4xZ4").rows == materialize_table(
        GenDihedralGroup(AbelianGroup(0, (4, 4)))
    ).rows


def test_fixture_a4_and_q8_are_valid():
    a4 = load_fixture("A4")
    q8 = load_fixture("Q8")
    assert a4.order == 12 and not a4.is_abelian()
    assert q8.order == 8 and not q8.is_abelian()
    assert sorted(a4.element_order(i) for i in range(12)) == [1] + [2] * 3 + [3] * 8
    assert sorted(q8.element_order(i) for i in range(8)) == [1, 2] + [4] * 6


def test_subgroup_table():
    t = materialize_table(GenDihedralGroup(AbelianGroup(0, (6,))))
    rotations = [i for i in range(12) if t.labels[i].startswith("rot")]
    sub, members = t.subgroup_table(rotations)
    assert sub.order == 6 and sub.is_abelian()
    with pytest.raises(ValueError):
        t.subgroup_table([0, 1])  # not closed


def test_automorphism_counts():
    d12 = materialize_table(GenDihedralGroup(AbelianGroup(0, (6,))))
    assert len(automorphism_group(d12)) == 12
    z5 = materialize_table(AbelianGroup(0, (5,)))
    assert len(automorphism_group(z5)) == 4
    klein = materialize_table(AbelianGroup(0, (2, 2)))
    assert len(automorphism_group(klein)) == 6


def euler_phi(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def test_automorphism_dihedral_formula():
    for n in range(3, 9):
        t = materialize_table(GenDihedralGroup(AbelianGroup(0, (n,))))
        assert len(automorphism_group(t)) == n * euler_phi(n)


def test_automorphism_group_axioms():
    t = materialize_table(GenDihedralGroup(AbelianGroup(0, (5,))))
    autos = automorphism_group(t)
    identity = tuple(range(t.order))
    assert identity in autos
    auto_set = set(autos)
    for phi in autos:
        inv = [0] * t.order
        for i, img in enumerate(phi):
            inv[img] = i
        assert tuple(inv) in auto_set
        for psi in autos:
            assert tuple(phi[psi[i]] for i in range(t.order)) in auto_set
        # automorphisms preserve element orders
        for i in range(t.order):
            assert t.element_order(i) == t.element_order(phi[i])


def test_automorphisms_sorted_deterministic():
    t = materialize_table(AbelianGroup(0, (8,)))
    autos = automorphism_group(t)
    assert autos == sorted(autos)


def test_automorphism_bound():
    t = materialize_table(GenDihedralGroup(AbelianGroup(0, (4, 4))))
    with pytest.raises(ValueError, match="bound"):
        automorphism_group(t, bound=16)


def test_abelian_invariants_recovery():
    for group in abelian_groups_up_to(24):
        t = materialize_table(group)
        assert abelian_invariant_factors_of(t, range(t.order)) == group.invariant_factors


def test_recognize_d12():
    t = materialize_table(GenDihedralGroup(AbelianGroup(0, (6,))))
    out = recognize_generalized_dihedral(t)
    assert out.kind == "generalized-dihedral"
    assert out.base == AbelianGroup(0, (6,))
    assert len(out.rotation_part) == 6 and len(out.flip_coset) == 6
    assert set(out.rotation_part) | set(out.flip_coset) == set(range(12))


def test_recognize_q8_and_klein():
    assert recognize_generalized_dihedral(load_fixture("Q8")).kind == "no"
    assert recognize_generalized_dihedral(load_fixture("D4")).kind == "abelian"


def test_recognize_a4():
    assert recognize_generalized_dihedral(load_fixture("A4")).kind == "no"


def test_recognize_all_small_bases():
    for base in abelian_groups_up_to(12):
        g = GenDihedralGroup(base)
        t = materialize_table(g)
        out = recognize_generalized_dihedral(t)
        if g.is_abelian():
            assert out.kind == "abelian"
        else:
            assert out.kind == "generalized-dihedral"
            assert out.base == base
