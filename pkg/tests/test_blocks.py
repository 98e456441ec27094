# tests/test_blocks.py
from fractions import Fraction

import pytest

from src.blocks import (PENDING, REJECTED, SURVIVING, D_SYM, BrauerTable2x2, CandidateK,
                        ColumnMethodInstance, DegreeRules, LabelledRow, RestrictionContext,
                        apply_filters, canonical_k, compare_golden, enumerate_K,
                        filter_congruence, filter_decomposition_parity, filter_pcentral_nonvanishing,
                        frobenius_orders, label_rows, linear_character_exclusion)
from src.errors import ConfigError, InfeasibleInstance, NonIntegerValue, UnderdeterminedSystem
from src.exact import Scalar
from src.linalg import as_matrix, identity

from .test_gramsearch import brute_force


def _instance(table, gram, first_row, max_rows, **kw):
    n = len(gram)
    return ColumnMethodInstance(
        table=table, labels=[f"x{i + 1}" for i in range(n)], class_indices=list(range(n)),
        N=[], M=identity(n), gram=gram, first_row=first_row, max_rows=max_rows, **kw)


def _cand(L, index=1):
    L = as_matrix(L)
    return CandidateK(index, [[0] * len(L[0])], L)


# ──────────────────────────────────────────────────────────────────────────────
# K 열거
# ──────────────────────────────────────────────────────────────────────────────
def test_reduced_instance_matches_brute_force(table):
    gram = [[2, 0, 1], [0, 2, -1], [1, -1, 3]]
    inst = _instance(table, gram, [0, 0, 0], 6)
    enum = enumerate_K(inst)
    got = {canonical_k(c.K)[1:] for c in enum.candidates}
    want = {s for s in brute_force(tuple(tuple(r) for r in gram)) if len(s) <= 5}
    assert got == want
    assert enum.count_without_zero_rule == sum(6 - len(s) for s in want)
    for c in enum.candidates:
        assert c.status == PENDING
        assert c.K[0] == [0, 0, 0]
        assert c.L == as_matrix(c.K)


def test_row_cap_is_enforced(table):
    with pytest.raises(InfeasibleInstance):
        enumerate_K(_instance(table, [[2]], [0], 2))
    assert len(enumerate_K(_instance(table, [[2]], [0], 3)).candidates) == 1


@pytest.mark.parametrize("gram,first_row", [
    ([[1, 2], [2, 1]], [0, 0]),
    ([[1]], [2]),
])
def test_infeasible_instances(table, gram, first_row):
    with pytest.raises(InfeasibleInstance):
        enumerate_K(_instance(table, gram, first_row, 4))


def test_canonical_k():
    assert canonical_k([[0, 1], [0, -1], [0, 0], [1, 0]]) == ((0, 1), (0, 1), (1, 0))
    assert canonical_k([[1, 1], [-1, 2], [0, -3]]) == canonical_k([[1, 1], [0, 3], [1, -2], [0, 0]])


def test_compare_golden():
    cands = [CandidateK(1, [[1], [1]], []), CandidateK(2, [[1], [2]], []), CandidateK(3, [[1], [3]], [])]
    cmp = compare_golden(cands, [("a", [[1], [-2]]), ("b", [[1], [1], [0]]), ("c", [[1], [5]])])
    assert cmp.matched == {"a": 2, "b": 1}
    assert cmp.missing == ["c"]
    assert cmp.extras == [3]
    assert not cmp.exact
    assert compare_golden(cands[:1], [("a", [[1], [1]]), ("b", [[1], [-1]])]).collisions == ["b"]


# ──────────────────────────────────────────────────────────────────────────────
# 필터
# ──────────────────────────────────────────────────────────────────────────────
def test_brauer_solve():
    c1, c2 = BrauerTable2x2().solve(Scalar(3), Scalar(1))
    assert (c1, c2) == (Scalar(2), Scalar(1))
    c1, _ = BrauerTable2x2().solve(Scalar(2), Scalar(1))
    assert c1 == Fraction(3, 2)


def test_pcentral_filter(table):
    inst = _instance(table, [[1, 0], [0, 1]], [0, 0], 3, pcentral=0)
    assert filter_pcentral_nonvanishing(_cand([[1, 0], [-1, 1]]), inst) == PENDING
    c = _cand([[1, 0], [0, 1]])
    assert filter_pcentral_nonvanishing(c, inst) == REJECTED
    assert c.rejected_by == "pcentral" and "[2]" in c.reason


def test_parity_filter(table):
    inst = _instance(table, [[1, 0], [0, 1]], [0, 0], 3, parity=(0, 1))
    assert filter_decomposition_parity(_cand([[3, 1], [1, -1]]), inst) == PENDING
    c = _cand([[3, 1], [2, 1]])
    assert filter_decomposition_parity(c, inst) == REJECTED
    assert c.reason.startswith("row 2")
    with pytest.raises(NonIntegerValue):
        filter_decomposition_parity(_cand([[Scalar(0, 1), 1]]), inst)


def test_congruence_filter(table):
    inst = _instance(table, [[1, 0], [0, 1]], [0, 0], 3, congruences=[(0, 1, 3)])
    assert filter_congruence(_cand([[4, 1], [-1, 2]]), inst) == PENDING
    c = _cand([[4, 1], [4, 2]])
    assert filter_congruence(c, inst) == REJECTED
    assert c.rejected_by == "congruence"


def test_apply_filters_tally(table):
    inst = _instance(table, [[1, 0], [0, 1]], [0, 0], 3, pcentral=0, parity=(0, 1),
                     congruences=[(0, 1, 3)])
    cands = [_cand([[0, 1]], 1), _cand([[2, 1]], 2), _cand([[3, 1]], 3), _cand([[7, 1]], 4)]
    tally = apply_filters(cands, inst)
    assert tally == {"pcentral": 1, "parity": 1, "congruence": 1, "surviving": 1}
    assert [c.status for c in cands] == [REJECTED, REJECTED, REJECTED, SURVIVING]
    assert [c.rejected_by for c in cands] == ["pcentral", "parity", "congruence", None]


def test_rejection_is_final():
    c = _cand([[1]])
    c.reject("pcentral", "first")
    c.reject("parity", "second")
    assert (c.status, c.rejected_by, c.reason) == (REJECTED, "pcentral", "first")


def test_disabled_filters_leave_candidates_pending(table):
    inst = _instance(table, [[1]], [0], 2, pcentral=0)
    cands = [_cand([[0]])]
    assert apply_filters(cands, inst, enabled=False) == {"pcentral": 0, "parity": 0, "congruence": 0,
                                                         "surviving": 0}
    assert cands[0].status == PENDING


# ──────────────────────────────────────────────────────────────────────────────
# 행 이름과 차수 규칙
# ──────────────────────────────────────────────────────────────────────────────
def test_label_rows():
    c = _cand([[1, 1], [-2, 0], [5, 5], [1, 1]])
    profiles = [("a", [Scalar(1), Scalar(1)]), ("b", [Scalar(2), Scalar(0)])]
    rows = label_rows(c, profiles)
    assert [(r.label, r.orientation) for r in rows] == [("a", 1), ("b", -1), ("row3", 1), ("row4", 1)]
    assert rows[1].values == [Scalar(2), Scalar(0)]


def test_linear_character_exclusion():
    row = LabelledRow("chi", 1, [Scalar(1), Scalar(1), Scalar(-1)])
    assert linear_character_exclusion(row, 1, [0, 1])
    assert not linear_character_exclusion(row, 1, [0, 2])
    assert not linear_character_exclusion(row, 2, [0, 1])
    flipped = LabelledRow("chi", 1, [Scalar(-1), Scalar(-1)])
    assert linear_character_exclusion(flipped, -1, [0, 1])


def test_zero_degree_is_never_admissible(table):
    ctx = RestrictionContext(table, [], {})
    assert not DegreeRules().admissible(LabelledRow("chi", 1, []), 0, ctx)
    assert DegreeRules().admissible(LabelledRow("chi", 1, []), 5, ctx)


def test_restriction_needs_fusion_rules(table, case2_result):
    row = case2_result.analysis.rows["chi6"]
    inst = case2_result.instance
    with pytest.raises(ConfigError):
        RestrictionContext(table, inst.labels, {}).inner(row.values, {"psi12": Fraction(1)}, D_SYM)
    ctx = RestrictionContext(table, inst.labels, case2_result.config.fusion)
    with pytest.raises(UnderdeterminedSystem):
        ctx.inner(row.values, {"psi1": Fraction(1)}, D_SYM)


def test_frobenius_orders():
    assert frobenius_orders(10, 1, 2, [Fraction(1, 2)]) == [2, 6, 10]
    assert frobenius_orders(36630, 648, 81, [Fraction(1, 108), Fraction(1, 81), Fraction(1, 54),
                                             Fraction(1, 9), Fraction(1, 9)]) == [6480]


# ──────────────────────────────────────────────────────────────────────────────
# 출하 인스턴스
# ──────────────────────────────────────────────────────────────────────────────
def test_shipped_instance_enumeration(case2_result):
    res = case2_result
    assert res.integer_transfer
    assert len(res.candidates) == 16
    assert res.count_without_zero_rule == 25
    assert res.consistency.diagonal[:3] == [Scalar(108), Scalar(81), Scalar(54)]
    assert len(res.golden.matched) == 13
    assert res.golden.missing == [] and len(res.golden.extras) == 3


def test_shipped_instance_filters(case2_result):
    res = case2_result
    assert res.tally == {"pcentral": 13, "parity": 2, "congruence": 0, "surviving": 1}
    assert [c.index for c in res.survivors] == [res.golden.matched["case2_k01"]]


def test_survivor_congruences(case2_result):
    a = case2_result.analysis
    assert set(a.rows) == {f"chi{i}" for i in range(1, 15)}
    got = {c.row: (c.congruence.residue, c.congruence.modulus) for c in a.congruences}
    assert got == {"chi6": (29, 81), "chi7": (1, 81), "chi11": (30, 81), "chi12": (30, 81)}
    exprs = {c.row: c.expression for c in a.congruences}
    assert exprs["chi6"] == "(d + 52)/81"
    assert exprs["chi7"] == "(d - 1)/81"
    assert exprs["chi11"] == exprs["chi12"] == "(d + 51)/81"


def test_survivor_exclusions(case2_result):
    ex = case2_result.analysis.exclusions
    assert [(e.row, e.degree, e.rule, e.excluded) for e in ex] == [
        ("chi11", -51, "aggregate", True),
        ("chi12", -51, "aggregate", True),
        ("chi7", 1, "linear", True),
    ]
    assert ex[0].expressions[0] == "(n + 7)/12"
    assert ex[0].consistent_n == []


def test_order_endgame(case2_result):
    eg = case2_result.analysis.endgame
    assert eg.coefficients == {"chi6": 8, "chi7": 1, "chi11": 27, "chi12": 27}
    assert eg.constant == 1
    assert eg.extremal_degrees == {"chi6": -52, "chi7": -80, "chi11": -132, "chi12": -132}
    assert eg.lower_bound == Fraction(4857, 11440)
    assert eg.order_limit == 36630
    assert eg.orders == [6480]
    assert eg.square_degrees == {"chi6": 29, "chi7": 80}
    assert eg.square_sum == 7241
    assert eg.contradiction
