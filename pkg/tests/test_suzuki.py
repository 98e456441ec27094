# tests/test_suzuki.py
import dataclasses
import random
from fractions import Fraction

import pytest
import sympy

from src.chartable import PartialColumnSet, PartialRow
from src.doc_io import load_case1_config
from src.errors import ConfigError, InfeasibleGram
from src.exact import Scalar
from src.gramsearch import canonical_form, gram_of
from src.linalg import as_matrix, matmul
from src.pipelines import SuzukiPipeline
from src.suzuki import (AlphaCondition, DecompositionCandidate, SpecialClassSet, _row_feasible,
                        alpha_expression, analyse_signs, case1_eliminate,
                        degree_zero_rows, enumerate_decompositions, gamma_expansion, induced_gram,
                        lumpable_rows, trivial_column, vanishing_basis)

from .conftest import CASE1
from .test_gramsearch import brute_force

SPECIAL = ["C6", "C7", "C11", "C12"]
PREFERRED = [
    ("lambda1", {"psi1": Fraction(1), "psi2": Fraction(1), "psi3": Fraction(-1)}),
    ("lambda2", {"psi3": Fraction(1), "psi4": Fraction(1), "psi5": Fraction(1), "psi10": Fraction(1),
                 "psi11": Fraction(1), "psi13": Fraction(-1), "psi14": Fraction(-1)}),
    ("lambda3", {"psi10": Fraction(1), "psi12": Fraction(-1)}),
    ("lambda4", {"psi11": Fraction(1), "psi12": Fraction(-1)}),
]


@pytest.fixture(scope="module")
def basis(table):
    return vanishing_basis(SpecialClassSet.from_names(table, SPECIAL), PREFERRED)


def test_vanishing_basis(basis):
    assert basis.names == ["lambda1", "lambda2", "lambda3", "lambda4"]
    for f in basis.functions:
        assert f.vanishes_off(basis.special.class_indices)
    assert matmul(basis.change_of_basis, basis.rref_A) == basis.A


def test_rref_basis_without_preference(table):
    vb = vanishing_basis(SpecialClassSet.from_names(table, SPECIAL))
    assert len(vb.A) == 4
    assert vb.names[0] == "lambda1"


def test_preferred_basis_must_vanish(table):
    special = SpecialClassSet.from_names(table, SPECIAL)
    with pytest.raises(ConfigError):
        vanishing_basis(special, [("bad", {"psi1": Fraction(1)})] + PREFERRED[1:])
    with pytest.raises(ConfigError):
        vanishing_basis(special, PREFERRED[:3])


def test_single_special_class(table):
    vb = vanishing_basis(SpecialClassSet.from_names(table, ["C5"]))
    assert len(vb.A) == 1
    gx = gamma_expansion(vb)
    assert len(gx.C) == 1


def test_gamma_expansion_reproduces_columns(basis, table):
    gx = gamma_expansion(basis)
    gamma = [[ch.values[k] for ch in table.characters] for k in basis.special.class_indices]
    assert matmul(gx.C, basis.A) == gamma


def test_induced_gram_and_trivial_column(basis):
    assert induced_gram(basis) == as_matrix([[3, -1, 0, 0], [-1, 7, 1, 1], [0, 1, 2, 1], [0, 1, 1, 2]])
    assert trivial_column(basis) == as_matrix([[1, 0, 0, 0]])[0]
    assert degree_zero_rows(basis) == [0, 1, 2, 3]


def test_lumped_row_is_lumpable(case1_result):
    res = case1_result
    labels = res.special.labels
    triples = [tuple(labels.index(c) for c in cond.classes) for cond in res.conditions]
    assert res.lumped_row in lumpable_rows(res.gamma.C, triples)
    assert lumpable_rows(res.gamma.C, []) == []


@pytest.mark.parametrize("seed", range(8))
def test_small_decompositions_match_brute_force(seed):
    rng = random.Random(100 + seed)
    n = rng.choice((1, 2))
    vecs = [[rng.choice((-1, 0, 1)) for _ in range(n)] for _ in range(rng.randint(1, 3))]
    vecs = [v for v in vecs if any(v)] or [[1] * n]
    T = gram_of(vecs, n)
    t = [rng.choice((0, 1)) for _ in range(n)]
    gram = [[T[i][j] + t[i] * t[j] for j in range(n)] for i in range(n)]
    cands = enumerate_decompositions(as_matrix(gram), [Scalar(x) for x in t])
    got = set()
    for c in cands:
        assert [row[0] for row in c.B] == t
        cols = [tuple(c.B[i][j] for i in range(n)) for j in range(1, c.columns)]
        got.add(canonical_form(cols))
    assert got == brute_force(tuple(tuple(r) for r in T))


def test_infeasible_grams():
    with pytest.raises(InfeasibleGram):
        enumerate_decompositions(as_matrix([[1, 2], [2, 1]]), [Scalar(0), Scalar(0)])
    with pytest.raises(InfeasibleGram):
        enumerate_decompositions(as_matrix([[1]]), [Scalar(2)])
    with pytest.raises(InfeasibleGram):
        enumerate_decompositions(as_matrix([[Fraction(1, 2)]]), [Scalar(0)])


@pytest.mark.parametrize("coeffs,const,ok", [
    ([1, 1], -2, True),
    ([2], -3, False),
    ([1, -1], 5, True),
    ([2, -2], 1, False),
    ([], 0, True),
    ([], 1, False),
    ([-3, -1], 7, True),
])
def test_row_feasible(coeffs, const, ok):
    assert _row_feasible(coeffs, const) is ok


def test_sign_analysis_ties_columns():
    cand = DecompositionCandidate(1, [[0, 1, 1]])
    analyse_signs(cand, [0], {0: "delta"})
    assert cand.feasible_patterns == 2
    assert cand.column_signs == [("delta", 1), ("delta", -1)]
    delta, d2, d3 = sympy.symbols("delta d2 d3")
    assert len(cand.relations) == 1
    assert sympy.expand(cand.relations[0] - (delta * d2 - delta * d3)) == 0


def test_sign_analysis_without_feasible_pattern():
    cand = DecompositionCandidate(1, [[1, 2]])
    analyse_signs(cand, [0], {})
    assert cand.feasible_patterns == 0


# ──────────────────────────────────────────────────────────────────────────────
# 시나리오 전체
# ──────────────────────────────────────────────────────────────────────────────
# δ = -1 과 δ = +1 가지 모두에서 나오는 다항식
ROOT_POLYS = {"d6**2 - 2*d6 + 1", "d6**2 - 8*d6 + 16", "d6**2 + 2*d6 + 1", "d6**2 + 8*d6 + 16"}


def test_case1_scenario(case1_result):
    res = case1_result
    assert res.lumped_row == 1
    assert len(res.items) == 5
    assert res.items[0].candidate.residual == 1
    assert all(it.report.eliminated for it in res.items)
    assert res.exit_code == 0


def test_case1_roots_are_positive_integers(case1_result):
    polys = set()
    for it in case1_result.items:
        for b in it.report.branches:
            polys.update(b.polynomials)
            assert all(v > 0 for v in b.roots.values())
            if b.roots:
                assert b.verified
    assert polys <= ROOT_POLYS


def test_case1_partial_tables_have_trivial_row(case1_result):
    for it in case1_result.items:
        first = it.partial.rows[0]
        assert first.known_degree == 1
        assert all(v == 1 for v in first.values)


def test_weak_order_bound_leaves_survivors():
    cfg = dataclasses.replace(load_case1_config(CASE1), order_ratio_bound=1)
    res = SuzukiPipeline(cfg).run()
    assert not res.all_eliminated
    assert res.exit_code == 1


# ──────────────────────────────────────────────────────────────────────────────
# |G| 하한은 근마다
# ──────────────────────────────────────────────────────────────────────────────
def _two_root_partial():
    """d3 = d2 + 1 이고 alpha(A,B,B) = 0 이면 (d2, d3) = (2, 3) 또는 (3, 4)"""
    d2, d3 = sympy.symbols("d2 d3")
    rows = [
        PartialRow("theta1", (Scalar(1), Scalar(1)), known_degree=1),
        PartialRow("theta2", (Scalar(6), Scalar(1)), degree_symbol="d2"),
        PartialRow("theta3", (Scalar(-12), Scalar(1)), degree_symbol="d3"),
    ]
    return PartialColumnSet("G", ("A", "B"), (24, 24), (2, 3), rows, [d3 - d2 - 1])


def _two_root_conditions():
    G = sympy.Symbol("G")
    # alpha(B,B,B) = 1 + 1/d2 + 1/d3, 따라서 |G| = 4400 (d3 = 3) 또는 3800 (d3 = 4)
    return [AlphaCondition(("A", "B", "B"), sympy.Integer(0), "0"),
            AlphaCondition(("B", "B", "B"), G / 2400, "|G|/2400")]


def test_alpha_expression_two_roots():
    d2, d3 = sympy.symbols("d2 d3")
    a = alpha_expression(_two_root_partial(), ("A", "B", "B"))
    assert sympy.simplify(a - (1 + 6 / d2 - 12 / d3)) == 0


def test_every_root_is_bounded_before_elimination():
    rep = case1_eliminate(_two_root_partial(), _two_root_conditions(), 40, 100)
    assert not rep.eliminated
    (b,) = rep.branches
    assert b.polynomials == ["d3**2 - 7*d3 + 12"]
    assert b.roots == {"d2": 2, "d3": 3}
    assert b.order_expression == "4400"
    assert b.alternatives == []
    assert b.verified
    assert any(s.startswith("root d2 = 3, d3 = 4: eliminated") for s in b.steps)


def test_elimination_needs_every_root_below_the_bound():
    rep = case1_eliminate(_two_root_partial(), _two_root_conditions(), 45, 100)
    assert rep.eliminated
    assert rep.branches[0].reason.startswith("all 2 admissible roots contradicted")
    rep = case1_eliminate(_two_root_partial(), _two_root_conditions(), 30, 100)
    assert not rep.eliminated
    assert len(rep.branches[0].alternatives) == 1


def test_lumped_note_only_when_a_row_is_lumped(case1_result):
    assert case1_eliminate(_two_root_partial(), _two_root_conditions(), 40, 100).note == ""
    assert case1_eliminate(_two_root_partial(), _two_root_conditions(), 40, 100, lumped=True).note
    for it in case1_result.items:
        assert bool(it.report.note) == (it.candidate.lumped_row is not None)
