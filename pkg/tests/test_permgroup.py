# tests/test_permgroup.py
import itertools

import pytest

from src.chartable import align_tables, frobenius_count, structure_constant_a
from src.errors import CapExceeded, DimensionMismatch, ParseError
from src.permgroup import (Perm, all_structure_constants, conjugacy_classes, count_power_solutions,
                           group_from_generators, inverse_class, parse_cycles, power_class,
                           structure_constant_bruteforce)


def test_perm_basics():
    a = parse_cycles("(1,2,3)", 3)
    b = parse_cycles("(1,2)", 3)
    assert a.order() == 3 and b.order() == 2
    # 모듈러 거듭제곱에 그대로 쓰이므로 내장 int
    assert type(a.order()) is int
    assert (a * a.inverse()).is_identity()
    assert (a ** 3).is_identity() and a ** -1 == a.inverse()
    # 왼쪽 먼저 적용
    assert (a * b).images == tuple(b.images[i] for i in a.images)
    assert str(parse_cycles("()", 4)) == "()"


@pytest.mark.parametrize("bad", ["(1,2", "(1,1)", "(0,1)", "(1,x)", "1,2"])
def test_bad_cycles(bad):
    with pytest.raises(ParseError):
        parse_cycles(bad, 3)


def test_identity_only_group():
    g = group_from_generators([], degree=3)
    assert g.order == 1
    assert [c.name for c in g.classes] == ["C1"]


def test_symmetric_group_s3():
    g = group_from_generators([parse_cycles("(1,2)", 3), parse_cycles("(1,2,3)", 3)])
    assert g.order == 6
    assert [(c.element_order, c.size, c.centralizer_order) for c in conjugacy_classes(g)] == \
        [(1, 1, 6), (2, 3, 2), (3, 2, 3)]
    # 전치 두 개의 곱이 3-순환이 되는 경우
    assert structure_constant_bruteforce(g, "C2", "C2", "C3") == 3
    assert count_power_solutions(g, 2) == 4
    assert inverse_class(g, 2) == 2
    assert power_class(g, 2, 3) == 0


def test_cap_and_degree_checks():
    gens = [parse_cycles("(1,2)", 5), parse_cycles("(1,2,3,4,5)", 5)]
    with pytest.raises(CapExceeded):
        group_from_generators(gens, cap=100)
    with pytest.raises(DimensionMismatch):
        group_from_generators([parse_cycles("(1,2)", 2), parse_cycles("(1,2)", 3)])


def test_h_group_classes_match_the_table(h_group, table):
    assert h_group.order == 648
    got = [(c.element_order, c.centralizer_order) for c in h_group.classes]
    want = [(c.element_order, c.centralizer_order) for c in table.classes]
    assert got == want
    assert h_group.exponent() == 36


def test_bruteforce_constant_against_table(h_group, table):
    assert structure_constant_bruteforce(h_group, "C6", "C7", "C7") == 6
    assert structure_constant_bruteforce(h_group, "C6", "C7", "C7") == structure_constant_a(table, "C6", "C7", "C7")


def test_all_structure_constants_sum_to_class_products(h_group):
    N = all_structure_constants(h_group)
    sizes = [c.size for c in h_group.classes]
    k = len(sizes)
    for x in range(k):
        for y in range(k):
            # |C_x|·|C_y| = Σ_z N[x][y][z]·|C_z|
            assert sum(N[x][y][z] * sizes[z] for z in range(k)) == sizes[x] * sizes[y]


def test_frobenius_count_direct(h_group, table):
    assert count_power_solutions(h_group, 81) == frobenius_count(table, 81) == 243
    assert count_power_solutions(h_group, 2) == 1 + 27 + 54


def test_every_structure_constant_of_h_matches_the_table(h_group, dixon_table, table):
    perm = align_tables(dixon_table, table)
    assert perm is not None
    N = all_structure_constants(h_group)
    k = len(h_group.classes)
    for x, y, z in itertools.product(range(k), repeat=3):
        assert N[x][y][z] == structure_constant_a(table, perm[x], perm[y], perm[z]), (x, y, z)


def test_class_data_are_builtin_ints(h_group):
    for c in h_group.classes:
        assert {type(c.size), type(c.element_order), type(c.centralizer_order)} == {int}
