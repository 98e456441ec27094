# src/blocks.py
# -*- coding: utf-8 -*-
"""
주블록 열 방법 (principal block column method)
- N·M 정수성 검사, K 후보 열거 (K 의 열 Gram 과 첫 행 고정)
- L = K·M⁻¹ 복원, 블록 이론 필터 (3-central 비소멸, 분해수 홀짝, 합동)
- 생존 후보의 차수 합동식, 미지값이 있는 배제, 선형 지표 배제
- 구조상수 조합으로 |G| 상계 → Frobenius 조건 → 차수 제곱합 모순
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, lcm
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .chartable import (CharacterTable, Congruence, mod_p_degree_congruence,
                        solve_linear_congruence)
from .doc_io import Case2Config
from .errors import (ConfigError, InfeasibleInstance, NonIntegerValue,
                     UnderdeterminedSystem)
from .exact import ZERO, Scalar, render
from .gramsearch import GramSearchSpec, canonical_form, search
from .linalg import (Matrix, as_matrix, inverse, is_integral,
                     is_positive_semidefinite, matmul, transpose)

logger = logging.getLogger(__name__)

PENDING, REJECTED, SURVIVING = "pending", "rejected", "surviving"


# ──────────────────────────────────────────────────────────────────────────────
# 타입
# ──────────────────────────────────────────────────────────────────────────────
@dataclass
class ColumnMethodInstance:
    table: CharacterTable
    labels: List[str]
    class_indices: List[int]
    N: Matrix
    M: Matrix
    gram: List[List[int]]
    first_row: List[int]
    max_rows: int
    prime: int = 3
    pcentral: Optional[int] = None
    parity: Optional[Tuple[int, int]] = None
    congruences: List[Tuple[int, int, int]] = field(default_factory=list)
    _M_inv: Optional[Matrix] = field(default=None, repr=False)

    @classmethod
    def from_config(cls, cfg: Case2Config, table: CharacterTable) -> "ColumnMethodInstance":
        classes = [table.class_index(c) for _, c in cfg.columns]
        N = [[ch.values[k] for k in classes] for ch in table.characters]
        return cls(
            table=table,
            labels=cfg.labels,
            class_indices=classes,
            N=N,
            M=[list(r) for r in cfg.M],
            gram=[list(r) for r in cfg.gram],
            first_row=list(cfg.first_row),
            max_rows=cfg.max_rows,
            prime=cfg.prime or 3,
            pcentral=cfg.column(cfg.pcentral) if cfg.pcentral else None,
            parity=(cfg.column(cfg.parity[0]), cfg.column(cfg.parity[1])) if cfg.parity else None,
            congruences=[(cfg.column(a), cfg.column(b), m) for a, b, m in cfg.congruences],
        )

    @property
    def M_inv(self) -> Matrix:
        if self._M_inv is None:
            self._M_inv = inverse(self.M)
        return self._M_inv

    def column(self, label: str) -> int:
        if label not in self.labels:
            raise ConfigError(f"unknown column {label!r}")
        return self.labels.index(label)


@dataclass
class CandidateK:
    index: int
    K: List[List[int]]
    L: Matrix
    status: str = PENDING
    reason: str = ""
    rejected_by: Optional[str] = None

    @property
    def rows(self) -> int:
        return len(self.K)

    def reject(self, filter_name: str, reason: str) -> None:
        # 필터는 pending → rejected 로만 옮긴다
        if self.status == REJECTED:
            return
        self.status, self.rejected_by, self.reason = REJECTED, filter_name, reason


@dataclass(frozen=True)
class BrauerTable2x2:
    """C_G(x) 의 2-모듈러 Brauer 지표표: 열은 위수 1, 2 인 원소"""
    rows: Tuple[Tuple[int, int], Tuple[int, int]] = ((1, 1), (1, -1))

    def solve(self, at_one: Scalar, at_two: Scalar) -> Tuple[Scalar, Scalar]:
        """c1·φ1 + c2·φ2 = (at_one, at_two)"""
        A = as_matrix([[self.rows[0][0], self.rows[1][0]], [self.rows[0][1], self.rows[1][1]]])
        c = matmul(inverse(A), [[at_one], [at_two]])
        return c[0][0], c[1][0]


@dataclass
class KEnumeration:
    candidates: List[CandidateK]
    count_without_zero_rule: int


# ──────────────────────────────────────────────────────────────────────────────
# 정수성 / 일관성
# ──────────────────────────────────────────────────────────────────────────────
def verify_integer_transfer(inst: ColumnMethodInstance) -> bool:
    return is_integral(matmul(inst.N, inst.M))


@dataclass
class GramConsistency:
    diagonal: List[Scalar]
    is_diagonal: bool


def gram_consistency(inst: ColumnMethodInstance) -> GramConsistency:
    """M⁻ᵀ·Gram·M⁻¹ 이 대각이면 대각 성분이 L 열의 노름 (블록 안 직교성)"""
    Mi = inst.M_inv
    D = matmul(matmul(transpose(Mi), as_matrix(inst.gram)), Mi)
    n = len(D)
    off = all(not D[i][j] for i in range(n) for j in range(n) if i != j)
    return GramConsistency([D[i][i] for i in range(n)], off)


# ──────────────────────────────────────────────────────────────────────────────
# K 열거
# ──────────────────────────────────────────────────────────────────────────────
def recover_L(K: Sequence[Sequence[int]], inst: ColumnMethodInstance) -> Matrix:
    return matmul(as_matrix(K), inst.M_inv)


def enumerate_K(inst: ColumnMethodInstance, jobs: int = 1) -> KEnumeration:
    n = len(inst.labels)
    G = inst.gram
    if not is_positive_semidefinite(G):
        raise InfeasibleInstance("gram_K is not positive semidefinite")
    r0 = inst.first_row
    T = tuple(tuple(G[i][j] - r0[i] * r0[j] for j in range(n)) for i in range(n))
    if any(T[i][i] < 0 for i in range(n)):
        raise InfeasibleInstance("first row exceeds a column norm")
    sols = search(GramSearchSpec(T, max_vectors=inst.max_rows - 1), jobs=jobs)
    if not sols:
        raise InfeasibleInstance(f"no K with at most {inst.max_rows} rows")
    cands = []
    extra = 0
    for idx, sol in enumerate(sols, start=1):
        K = [list(r0)] + [list(v) for v in sol.vectors]
        cands.append(CandidateK(idx, K, recover_L(K, inst)))
        # 0 행을 허용하면 0 행 개수만큼 더 생긴다
        extra += inst.max_rows - len(K) + 1
    logger.info("enumerate_K: %d candidates (%d allowing zero rows)", len(cands), extra)
    return KEnumeration(cands, extra)


def canonical_k(K: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    """첫 행 고정, 나머지 행 부호 정규화 후 정렬, 0 행 제거"""
    rest = [r for r in K[1:] if any(r)]
    return (tuple(K[0]),) + canonical_form(rest)


@dataclass
class GoldenComparison:
    matched: Dict[str, int] = field(default_factory=dict)
    missing: List[str] = field(default_factory=list)
    extras: List[int] = field(default_factory=list)
    collisions: List[str] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return not self.missing and not self.extras and not self.collisions


def compare_golden(cands: Sequence[CandidateK], golden: Sequence[Tuple[str, List[List[int]]]]) -> GoldenComparison:
    by_form = {canonical_k(c.K): c.index for c in cands}
    out = GoldenComparison()
    used: Dict[int, str] = {}
    for name, K in golden:
        idx = by_form.get(canonical_k(K))
        if idx is None:
            out.missing.append(name)
        elif idx in used:
            out.collisions.append(name)
        else:
            out.matched[name] = idx
            used[idx] = name
    out.extras = [c.index for c in cands if c.index not in used]
    return out


# ──────────────────────────────────────────────────────────────────────────────
# 필터
# ──────────────────────────────────────────────────────────────────────────────
def _rational_int(v: Scalar, where: str) -> int:
    if not v.is_rational_integer():
        raise NonIntegerValue(f"{where}: {render(v)} is not a rational integer")
    return v.as_int()


def filter_pcentral_nonvanishing(cand: CandidateK, inst: ColumnMethodInstance) -> str:
    if inst.pcentral is None:
        return cand.status
    c = inst.pcentral
    zero = [r + 1 for r, row in enumerate(cand.L) if not row[c]]
    if zero:
        cand.reject("pcentral", f"rows {zero} vanish on {inst.labels[c]}")
    return cand.status


def filter_decomposition_parity(cand: CandidateK, inst: ColumnMethodInstance,
                                brauer: BrauerTable2x2 = BrauerTable2x2()) -> str:
    if inst.parity is None:
        return cand.status
    a, b = inst.parity
    for r, row in enumerate(cand.L):
        va = _rational_int(row[a], f"row {r + 1}, {inst.labels[a]}")
        vb = _rational_int(row[b], f"row {r + 1}, {inst.labels[b]}")
        c1, c2 = brauer.solve(Scalar.of(va), Scalar.of(vb))
        if not (c1.is_rational_integer() and c2.is_rational_integer()):
            cand.reject("parity", f"row {r + 1}: ({inst.labels[a]}, {inst.labels[b]}) = ({va}, {vb}) "
                                  f"gives c1 = {render(c1)}, c2 = {render(c2)}")
            break
    return cand.status


def filter_congruence(cand: CandidateK, inst: ColumnMethodInstance) -> str:
    for a, b, m in inst.congruences:
        for r, row in enumerate(cand.L):
            va = _rational_int(row[a], f"row {r + 1}, {inst.labels[a]}")
            vb = _rational_int(row[b], f"row {r + 1}, {inst.labels[b]}")
            if (va - vb) % m:
                cand.reject("congruence", f"row {r + 1}: {va} ≢ {vb} (mod {m})")
                return cand.status
    return cand.status


def apply_filters(cands: Sequence[CandidateK], inst: ColumnMethodInstance, enabled: bool = True) -> Dict[str, int]:
    tally = {"pcentral": 0, "parity": 0, "congruence": 0, SURVIVING: 0}
    if not enabled:
        return tally
    for c in cands:
        for name, fn in (("pcentral", filter_pcentral_nonvanishing),
                         ("parity", filter_decomposition_parity),
                         ("congruence", filter_congruence)):
            if fn(c, inst) == REJECTED:
                tally[name] += 1
                break
        if c.status == PENDING:
            c.status = SURVIVING
            tally[SURVIVING] += 1
    logger.info("filters: %s", tally)
    return tally


# ──────────────────────────────────────────────────────────────────────────────
# 생존 후보의 행 이름
# ──────────────────────────────────────────────────────────────────────────────
@dataclass
class LabelledRow:
    label: str
    orientation: int
    values: List[Scalar]


def label_rows(cand: CandidateK, profiles: Sequence[Tuple[str, Sequence[Scalar]]]) -> List[LabelledRow]:
    """L 의 각 행을 부호 무시하고 profile 에 맞추고, profile 방향으로 뒤집는다"""
    out = []
    taken = set()
    for r, row in enumerate(cand.L):
        hit = None
        for name, prof in profiles:
            if name in taken:
                continue
            if list(prof) == list(row):
                hit = (name, 1)
            elif list(prof) == [-v for v in row]:
                hit = (name, -1)
            if hit:
                break
        if hit is None:
            out.append(LabelledRow(f"row{r + 1}", 1, list(row)))
            continue
        taken.add(hit[0])
        out.append(LabelledRow(hit[0], hit[1], [v * hit[1] for v in row]))
    return out


# ──────────────────────────────────────────────────────────────────────────────
# H 로 제한한 내적
# ──────────────────────────────────────────────────────────────────────────────
D_SYM = sympy.Symbol("d")
N_SYM = sympy.Symbol("n")


@dataclass
class RestrictionContext:
    """G 의 부분 행을 H 의 류로 끌어오는 규칙 (fuse 지시어)"""
    table: CharacterTable
    labels: List[str]
    fusion: Dict[str, str]

    def combo_values(self, combo: Dict[str, Fraction]) -> List[Scalar]:
        vals = [ZERO] * len(self.table)
        for name, c in combo.items():
            ch = self.table.character(name)
            vals = [v + w * c for v, w in zip(vals, ch.values)]
        return vals

    def inner(self, row: Sequence[Scalar], combo: Dict[str, Fraction], degree: sympy.Expr,
              unknown: Optional[str] = None) -> sympy.Expr:
        """(행|_H, ψ)_H. 값이 미지인 류는 ψ 가 0 이거나 unknown 으로 지정돼야 한다"""
        psi = self.combo_values(combo)
        total = sympy.Integer(0)
        for k, c in enumerate(self.table.classes):
            if not psi[k]:
                continue
            target = self.fusion.get(c.name)
            if target is None:
                raise ConfigError(f"no fusion rule for class {c.name}")
            if target == "degree":
                v = degree
            elif target == "?":
                if c.name != unknown:
                    raise UnderdeterminedSystem(f"value at {c.name} is unknown and the H-character is nonzero there")
                v = N_SYM
            else:
                v = row[self.labels.index(target)].to_sympy()
            total += v * psi[k].to_sympy() / c.centralizer_order
        return sympy.expand(total)


@dataclass
class DegreeCongruence:
    row: str
    character: str
    expression: str
    congruence: Optional[Congruence]


def _linear_congruence(expr: sympy.Expr, var: sympy.Symbol, subject: str) -> Optional[Congruence]:
    """expr = b·var + a 가 정수가 되는 var 의 잉여류"""
    poly = sympy.Poly(expr, var)
    if poly.degree() != 1:
        raise UnderdeterminedSystem(f"{expr} is not linear in {var}")
    b, a = poly.coeff_monomial(var), poly.coeff_monomial(1)
    if not (b.is_Rational and a.is_Rational):
        raise NonIntegerValue(f"{expr} has irrational coefficients")
    D = lcm(int(b.q), int(a.q))
    sol = solve_linear_congruence(int(b * D), int(a * D), D)
    if sol is None:
        return None
    return Congruence(sol[0], sol[1], subject)


def degree_congruences(rows: Dict[str, LabelledRow], ctx: RestrictionContext,
                       checks: Sequence[Tuple[str, str]]) -> List[DegreeCongruence]:
    out = []
    for label, psi in checks:
        if label not in rows:
            raise ConfigError(f"surviving candidate has no row {label!r}")
        expr = ctx.inner(rows[label].values, {psi: Fraction(1)}, D_SYM)
        cong = _linear_congruence(expr, D_SYM, f"d({label})")
        out.append(DegreeCongruence(label, psi, str(sympy.together(expr)), cong))
    return out


def mod_p_degree_checks(rows: Dict[str, LabelledRow], column: int, p: int) -> Dict[str, Congruence]:
    """χ(g) ≡ χ(1) (mod p), g 는 p-원소 열"""
    out = {}
    for label, r in rows.items():
        if r.values[column].is_rational_integer():
            out[label] = mod_p_degree_congruence(r.values, p, column, subject=f"d({label})")
    return out


# ──────────────────────────────────────────────────────────────────────────────
# 배제 규칙
# ──────────────────────────────────────────────────────────────────────────────
@dataclass
class ExclusionReport:
    row: str
    degree: int
    expressions: List[str] = field(default_factory=list)
    consistent_n: List[int] = field(default_factory=list)
    excluded: bool = False
    rule: str = ""


def exclude_degree_with_unknown(row: LabelledRow, degree: int, ctx: RestrictionContext,
                                unknown: str, combos: Sequence[Dict[str, Fraction]]) -> ExclusionReport:
    """degree 를 넣고 미지값 n 에 대해 정수성과 부호 조건을 동시에 만족하는 n 이 있는지"""
    rep = ExclusionReport(row.label, degree, rule="aggregate")
    eps = 1 if degree > 0 else -1
    exprs = [ctx.inner(row.values, combo, sympy.Integer(degree), unknown=unknown) for combo in combos]
    rep.expressions = [str(sympy.together(e)) for e in exprs]
    bound = abs(degree)
    for n in range(-bound, bound + 1):
        ok = True
        for e in exprs:
            v = e.subs(N_SYM, n)
            if not v.is_Integer or eps * v < 0:
                ok = False
                break
        if ok:
            rep.consistent_n.append(n)
    rep.excluded = not rep.consistent_n
    return rep


def linear_character_exclusion(row: LabelledRow, degree: int, columns: Sequence[int]) -> bool:
    """|d| = 1 이고 지정 열에서 모두 1 이면 그 열의 원소들이 핵에 들어가므로 배제"""
    if abs(degree) != 1:
        return False
    return all(row.values[c] * degree == 1 for c in columns)


@dataclass
class DegreeRules:
    congruences: Dict[str, List[Congruence]] = field(default_factory=dict)
    aggregates: Dict[str, Tuple[str, List[Dict[str, Fraction]]]] = field(default_factory=dict)
    linear: Dict[str, List[int]] = field(default_factory=dict)

    def admissible(self, row: LabelledRow, d: int, ctx: RestrictionContext) -> bool:
        if d == 0:
            return False
        if any(c is None or not c.holds(d) for c in self.congruences.get(row.label, [])):
            return False
        if row.label in self.linear and linear_character_exclusion(row, d, self.linear[row.label]):
            return False
        if row.label in self.aggregates:
            unknown, combos = self.aggregates[row.label]
            if exclude_degree_with_unknown(row, d, ctx, unknown, combos).excluded:
                return False
        return True

    def step(self, label: str) -> Tuple[int, int]:
        cs = [c for c in self.congruences.get(label, []) if c is not None]
        if not cs:
            return 0, 1
        return cs[0].residue, cs[0].modulus


def nearest_admissible(row: LabelledRow, side: int, rules: DegreeRules, ctx: RestrictionContext,
                       limit: int = 200) -> Optional[int]:
    """side 쪽(±1)에서 0 에 가장 가까운 허용 차수"""
    r, m = rules.step(row.label)
    d = r if side > 0 else r - m
    if side > 0 and d <= 0:
        d += m * ((-d) // m + 1)
    for _ in range(limit):
        if rules.admissible(row, d, ctx):
            return d
        d += side * m
    return None


def minimal_abs_admissible(row: LabelledRow, rules: DegreeRules, ctx: RestrictionContext) -> Optional[int]:
    pos = nearest_admissible(row, 1, rules, ctx)
    neg = nearest_admissible(row, -1, rules, ctx)
    opts = [abs(v) for v in (pos, neg) if v is not None]
    return min(opts) if opts else None


# ──────────────────────────────────────────────────────────────────────────────
# 위수 종결
# ──────────────────────────────────────────────────────────────────────────────
def frobenius_orders(limit: int, divisor: int, modulus: int, terms: Sequence[Fraction]) -> List[int]:
    """divisor 의 배수 중 1 + |G|·Σterms 가 modulus 로 나눠떨어지는 값"""
    s = sum(terms, Fraction(0))
    out = []
    for order in range(divisor, limit + 1, divisor):
        count = 1 + order * s
        if count.denominator == 1 and count.numerator % modulus == 0:
            out.append(order)
    return out


@dataclass
class EndgameReport:
    coefficients: Dict[str, Fraction] = field(default_factory=dict)
    constant: Fraction = Fraction(0)
    identity: str = ""
    extremal_degrees: Dict[str, int] = field(default_factory=dict)
    lower_bound: Optional[Fraction] = None
    order_limit: Optional[int] = None
    orders: List[int] = field(default_factory=list)
    square_degrees: Dict[str, int] = field(default_factory=dict)
    square_sum: Optional[int] = None
    contradiction: bool = False
    reason: str = ""


def order_endgame(rows: Dict[str, LabelledRow], inst: ColumnMethodInstance, ctx: RestrictionContext,
                  rules: DegreeRules, cfg: Case2Config) -> EndgameReport:
    rep = EndgameReport()
    if not cfg.combo or cfg.target is None:
        rep.reason = "no structure-constant combination configured"
        return rep
    # 1) 조합 계수: Σ_χ coef_χ / d_χ = target/|G|
    for label, row in rows.items():
        coef = ZERO
        for a, b, c, w in cfg.combo:
            ia, ib, ic = inst.column(a), inst.column(b), inst.column(c)
            coef = coef + row.values[ia] * row.values[ib] * row.values[ic] * w
        if not coef:
            continue
        if not coef.is_rational():
            raise NonIntegerValue(f"combination coefficient of {label} is {render(coef)}")
        if all(v == 1 for v in row.values):
            rep.constant += coef.as_fraction()
        else:
            rep.coefficients[label] = coef.as_fraction()
    terms = [str(rep.constant)] + [f"{c}/d({lab})" for lab, c in rep.coefficients.items()]
    rep.identity = " + ".join(terms) + f" = {cfg.target}/|G|"

    # 2) 각 항의 최솟값 (계수와 반대 부호 쪽의 가장 가까운 허용 차수)
    bound = rep.constant
    for label, coef in rep.coefficients.items():
        d = nearest_admissible(rows[label], -1 if coef > 0 else 1, rules, ctx)
        if d is None:
            rep.reason = f"no admissible degree found for {label}"
            return rep
        rep.extremal_degrees[label] = d
        bound += coef / d
    rep.lower_bound = bound
    if bound <= 0:
        rep.reason = f"lower bound {bound} is not positive, |G| is not bounded"
        return rep
    rep.order_limit = floor(Fraction(cfg.target) / bound)

    # 3) Frobenius 조건
    if cfg.frobenius_modulus:
        rep.orders = frobenius_orders(rep.order_limit, cfg.order_divisor, cfg.frobenius_modulus,
                                      cfg.frobenius_terms)
    else:
        rep.orders = list(range(cfg.order_divisor, rep.order_limit + 1, cfg.order_divisor))

    # 4) 차수 제곱합
    total = 0
    for label in cfg.squares:
        m = minimal_abs_admissible(rows[label], rules, ctx)
        if m is None:
            rep.reason = f"no admissible degree found for {label}"
            return rep
        rep.square_degrees[label] = m
        total += m * m
    rep.square_sum = total
    if all(total > o for o in rep.orders):
        rep.contradiction = True
        rep.reason = (f"sum of squared degrees {total} exceeds every admissible order {rep.orders}"
                      if rep.orders else "no admissible group order")
    else:
        ok = [o for o in rep.orders if o >= total]
        rep.reason = f"orders {ok} are not excluded by the degree squares"
    return rep
