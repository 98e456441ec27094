# tests/test_chartable.py
from fractions import Fraction

import pytest

from src.chartable import (Character, CharacterTable, ClassFunction, ConjClass, align_tables,
                           frobenius_count, inner_product, mod_p_degree_congruence,
                           solve_linear_congruence, structure_constant_a, structure_constant_alpha,
                           validate_orthogonality)
from src.doc_io import parse_table
from src.errors import NonIntegerValue, StructureError, TableMismatch
from src.exact import Scalar

from .conftest import TABLE


def test_shipped_table_is_valid(table):
    rep = validate_orthogonality(table)
    assert rep.ok
    assert rep.degree_sum == 648
    assert len(table) == 14


def test_trivial_table_is_valid():
    t = CharacterTable(1, [ConjClass("C1", 1, 1)], [Character("psi1", (Scalar(1),))])
    assert validate_orthogonality(t).ok


def test_corrupted_entry_names_the_failing_pair():
    with open(TABLE, encoding="utf-8") as f:
        text = f.read()
    bad = text.replace("char psi2   1  1 -1", "char psi2   1  1  1", 1)
    rep = validate_orthogonality(parse_table(bad, "bad.txt"))
    assert not rep.ok
    assert any(a == "psi1" and b == "psi2" for a, b, _ in rep.first)
    assert any("psi2" in line for line in rep.lines())


@pytest.mark.parametrize("classes", [
    [ConjClass("C1", 2, 2), ConjClass("C2", 1, 2)],
    [ConjClass("C1", 1, 2), ConjClass("C1", 2, 2)],
    [ConjClass("C1", 1, 2), ConjClass("C2", 2, 3)],
])
def test_structural_errors(classes):
    chars = [Character("a", (Scalar(1), Scalar(1))), Character("b", (Scalar(1), Scalar(-1)))]
    with pytest.raises(StructureError):
        CharacterTable(2, classes, chars)


@pytest.mark.parametrize("value", [1j, 0.5, Fraction(-1)])
def test_values_must_lie_in_the_real_field(value):
    classes = [ConjClass("C1", 1, 2), ConjClass("C2", 2, 2)]
    chars = [Character("a", (Scalar(1), Scalar(1))), Character("b", (Scalar(1), value))]
    with pytest.raises(StructureError, match="outside"):
        CharacterTable(2, classes, chars)


def test_conjugation_is_the_identity(table):
    for ch in table.characters:
        assert all(v.conj() == v for v in ch.values)
    assert Scalar(Fraction(1, 2), 3).conj() == Scalar(Fraction(1, 2), 3)


def test_structure_constants(table):
    assert structure_constant_a(table, "C6", "C7", "C7") == 6
    assert structure_constant_alpha(table, "C6", "C7", "C7") == Fraction(9, 2)
    # 항등류와의 곱
    assert structure_constant_a(table, "C1", "C5", "C5") == 1
    assert structure_constant_a(table, "C1", "C5", "C6") == 0


def test_frobenius_count(table):
    assert frobenius_count(table, 81) == 243
    assert frobenius_count(table, 1) == 1
    assert frobenius_count(table, 648) == 648


def test_class_function_arithmetic(table):
    psi1 = ClassFunction.of_character(table, "psi1")
    psi2 = ClassFunction.of_character(table, "psi2")
    lam = ClassFunction.combination(table, {"psi1": Scalar(1), "psi2": Scalar(1), "psi3": Scalar(-1)})
    assert lam == psi1 + psi2 - ClassFunction.of_character(table, "psi3")
    assert inner_product(lam, lam) == 3
    assert inner_product(psi1, psi2) == 0
    assert lam.value("C1") == 0
    assert (-psi1).value("C1") == -1


def test_class_functions_must_share_a_table(table):
    other = parse_table(open(TABLE, encoding="utf-8").read(), "copy.txt")
    with pytest.raises(TableMismatch):
        ClassFunction.of_character(table, "psi1") + ClassFunction.of_character(other, "psi1")
    with pytest.raises(TableMismatch):
        table.class_index("C99")
    with pytest.raises(TableMismatch):
        table.character("chi1")


def test_mod_p_congruence():
    vals = [Scalar(8), Scalar(2), Scalar(-1)]
    c = mod_p_degree_congruence(vals, 3, 2, subject="d")
    assert (c.residue, c.modulus) == (2, 3)
    assert c.holds(8) and not c.holds(9)
    assert str(c) == "d ≡ 2 (mod 3)"
    with pytest.raises(NonIntegerValue):
        mod_p_degree_congruence([Scalar(1), Scalar(0, 1)], 3, 1)


@pytest.mark.parametrize("a,b,n,expected", [
    (1, 52, 81, (29, 81)),
    (1, -1, 81, (1, 81)),
    (2, 1, 4, None),
    (6, 3, 9, (1, 3)),
    (3, 3, 3, (0, 1)),
])
def test_solve_linear_congruence(a, b, n, expected):
    assert solve_linear_congruence(a, b, n) == expected


def test_align_tables_with_reordered_columns(table):
    # 열 C11, C12 을 서로 바꾼 사본
    order = list(range(14))
    order[10], order[11] = 11, 10
    classes = [table.classes[k] for k in order]
    chars = [Character(ch.name, tuple(ch.values[k] for k in order)) for ch in table.characters]
    swapped = CharacterTable(648, classes, chars)
    perm = align_tables(swapped, table)
    assert perm is not None
    for ch in swapped.characters:
        moved = [None] * 14
        for src, dst in enumerate(perm):
            moved[dst] = ch.values[src]
        assert tuple(moved) in {c.values for c in table.characters}
