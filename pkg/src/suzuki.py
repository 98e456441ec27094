# src/suzuki.py
# -*- coding: utf-8 -*-
"""
특수류(special classes) 계산
- 특수류 밖에서 0 인 류함수 공간의 기저 λ (행렬 A: λ_i = Σ A[i][j] ψ_j)
- γ_i = Σ_j ψ_j(x_i) ψ_j 의 λ 전개 (행렬 C, CA = [ψ_j(x_i)])
- 유도 내적 (λ_i^G, λ_j^G)_G = (λ_i, λ_j)_H
- B·Bᵀ = Gram 인 정수 분해 열거와 부호 분석
- 부분 지표표 (C·B)ᵀ 와 Case 1 소거 계산
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy import Interval, Poly, oo, solve_univariate_inequality

from .chartable import (CharacterTable, ClassFunction, PartialColumnSet,
                        PartialRow, inner_product)
from .errors import (ConfigError, InfeasibleGram, SingularBasis, SingularMatrix,
                     StructureError, UnderdeterminedSystem)
from .exact import ZERO, Scalar, render
from .gramsearch import GramSearchSpec, search
from .linalg import (Matrix, as_matrix, is_integral, is_positive_semidefinite,
                     matmul, nullspace, rank, rref, solve_left, to_int_matrix, transpose)

logger = logging.getLogger(__name__)


# ──────────────────────────────────────────────────────────────────────────────
# 타입
# ──────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class SpecialClassSet:
    table: CharacterTable
    class_indices: Tuple[int, ...]
    assumptions: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.class_indices:
            raise ConfigError("special class set is empty")
        if len(set(self.class_indices)) != len(self.class_indices):
            raise ConfigError("special class set has duplicates")
        for k in self.class_indices:
            self.table.class_index(k)

    @classmethod
    def from_names(cls, table: CharacterTable, names: Sequence[str],
                   assumptions: Sequence[str] = ()) -> "SpecialClassSet":
        return cls(table, tuple(table.class_index(n) for n in names), tuple(assumptions))

    @property
    def labels(self) -> List[str]:
        return [self.table.classes[k].name for k in self.class_indices]

    def __len__(self) -> int:
        return len(self.class_indices)


@dataclass
class VanishingBasis:
    special: SpecialClassSet
    names: List[str]
    A: Matrix
    rref_A: Matrix
    change_of_basis: Optional[Matrix] = None

    @property
    def functions(self) -> List[ClassFunction]:
        t = self.special.table
        out = []
        for row in self.A:
            f = ClassFunction(t, [ZERO] * len(t))
            for j, c in enumerate(row):
                if c:
                    f = f + ClassFunction(t, t.characters[j].values) * c
            out.append(f)
        return out


@dataclass
class GammaExpansion:
    C: Matrix


@dataclass
class DecompositionCandidate:
    index: int
    B: List[List[int]]
    lumped_row: Optional[int] = None
    residual: int = 0
    # 열 j ≥ 1 마다 (부호 기호, ±1). 기호가 None 이면 부호가 고정
    column_signs: List[Tuple[Optional[str], int]] = field(default_factory=list)
    relations: List[sympy.Expr] = field(default_factory=list)
    feasible_patterns: int = 0

    @property
    def columns(self) -> int:
        return len(self.B[0]) if self.B else 0

    def degree_symbol(self, j: int) -> str:
        return f"d{j + 1}"

    def theta(self, j: int) -> str:
        return f"theta{j + 1}"


# ──────────────────────────────────────────────────────────────────────────────
# 기저와 γ 전개
# ──────────────────────────────────────────────────────────────────────────────
def _coeff_row(t: CharacterTable, coeffs: Dict[str, Fraction]) -> List[Scalar]:
    names = [ch.name for ch in t.characters]
    row = [ZERO] * len(names)
    for name, c in coeffs.items():
        if name not in names:
            raise ConfigError(f"basis refers to unknown character {name!r}")
        row[names.index(name)] = row[names.index(name)] + c
    return row


def vanishing_basis(special: SpecialClassSet,
                    preferred: Optional[Sequence[Tuple[str, Dict[str, Fraction]]]] = None) -> VanishingBasis:
    t = special.table
    keep = set(special.class_indices)
    X = [[ch.values[k] for ch in t.characters] for k in range(len(t)) if k not in keep]
    null = nullspace(X, ncols=len(t.characters))
    R, _ = rref(null)
    R = [row for row in R if any(row)]
    if len(R) != len(special):
        raise SingularBasis(f"vanishing space has dimension {len(R)}, expected {len(special)}")
    vb = VanishingBasis(special, [f"lambda{i + 1}" for i in range(len(R))], R, R)
    if not preferred:
        return vb

    A = [_coeff_row(t, coeffs) for _, coeffs in preferred]
    cand = VanishingBasis(special, [name for name, _ in preferred], A, R)
    for name, f in zip(cand.names, cand.functions):
        if not f.vanishes_off(special.class_indices):
            raise ConfigError(f"{name} does not vanish off the special classes")
    if len(A) != len(R) or rank(A) != len(R):
        raise ConfigError("preferred basis does not span the vanishing space")
    try:
        cand.change_of_basis = solve_left(R, A)
    except SingularMatrix as e:
        raise ConfigError(f"preferred basis is outside the vanishing space: {e.detail}")
    logger.info("vanishing basis: dimension %d, preferred basis accepted", len(R))
    return cand


def gamma_expansion(vb: VanishingBasis) -> GammaExpansion:
    t = vb.special.table
    gamma = [[ch.values[i] for ch in t.characters] for i in vb.special.class_indices]
    try:
        C = solve_left(vb.A, gamma)
    except SingularMatrix as e:
        raise SingularBasis(f"gamma expansion failed: {e.detail}")
    # 모든 류에서 직접 대조
    lam = vb.functions
    for i, row in zip(vb.special.class_indices, C):
        direct = ClassFunction(t, [sum((ch.values[i] * ch.values[k] for ch in t.characters), ZERO)
                                   for k in range(len(t))])
        built = ClassFunction(t, [ZERO] * len(t))
        for c, f in zip(row, lam):
            built = built + f * c
        if built != direct:
            raise SingularBasis(f"gamma at {t.classes[i].name} does not match its expansion")
    return GammaExpansion(C)


def induced_gram(vb: VanishingBasis) -> Matrix:
    lam = vb.functions
    return [[inner_product(f, g) for g in lam] for f in lam]


def trivial_column(vb: VanishingBasis) -> List[Scalar]:
    """(λ_i^G, 1_G)_G = (λ_i, 1_H)_H"""
    t = vb.special.table
    triv = next((ch for ch in t.characters if all(v == 1 for v in ch.values)), None)
    if triv is None:
        raise StructureError("table has no trivial character")
    one = ClassFunction(t, triv.values)
    return [inner_product(f, one) for f in vb.functions]


def degree_zero_rows(vb: VanishingBasis) -> List[int]:
    return [i for i, f in enumerate(vb.functions) if not f.values[0]]


def lumpable_rows(C: Matrix, triples: Sequence[Tuple[int, int, int]]) -> List[int]:
    """모든 α 삼중쌍에 C[x][k] = 0 인 류 x 가 있는 행 k"""
    if not triples:
        return []
    n = len(C[0]) if C else 0
    return [k for k in range(n) if all(any(not C[x][k] for x in tri) for tri in triples)]


# ──────────────────────────────────────────────────────────────────────────────
# 분해 열거
# ──────────────────────────────────────────────────────────────────────────────
def enumerate_decompositions(gram: Matrix, trivial: Sequence[Scalar], lumped: Optional[int] = None,
                             jobs: int = 1) -> List[DecompositionCandidate]:
    """B·Bᵀ = gram, B 의 첫 열 = trivial. 나머지 열은 부호/순서를 정규화"""
    n = len(gram)
    if not is_integral(gram) or not all(Scalar.of(x).is_rational_integer() for x in trivial):
        raise InfeasibleGram("gram matrix or trivial column is not integral")
    G = to_int_matrix(gram)
    t = [Scalar.of(x).as_int() for x in trivial]
    if not is_positive_semidefinite(G):
        raise InfeasibleGram("gram matrix is not positive semidefinite")
    T = tuple(tuple(G[i][j] - t[i] * t[j] for j in range(n)) for i in range(n))
    if any(T[i][i] < 0 for i in range(n)):
        raise InfeasibleGram("trivial column exceeds a diagonal entry")
    order = tuple(i for i in range(n) if i != lumped) + ((lumped,) if lumped is not None else ())
    spec = GramSearchSpec(T, order, lumped)
    sols = search(spec, jobs=jobs)
    if not sols:
        raise InfeasibleGram("no integer decomposition of the gram matrix")
    out = []
    for idx, sol in enumerate(sols, start=1):
        B = [[t[i]] + [v[i] for v in sol.vectors] for i in range(n)]
        out.append(DecompositionCandidate(idx, B, lumped, sol.residual))
    logger.info("decompositions: %d canonical candidates", len(out))
    return out


def _row_feasible(coeffs: List[int], const: int) -> bool:
    """Σ c_j d_j + const = 0 이 d_j ≥ 1 정수해를 갖는가"""
    if not coeffs:
        return const == 0
    if all(c > 0 for c in coeffs) or all(c < 0 for c in coeffs):
        if coeffs[0] < 0:
            coeffs, const = [-c for c in coeffs], -const
        rest = -const - sum(coeffs)
        if rest < 0:
            return False
        reach = [False] * (rest + 1)
        reach[0] = True
        for v in range(1, rest + 1):
            reach[v] = any(c <= v and reach[v - c] for c in coeffs)
        return reach[rest]
    g = 0
    for c in coeffs:
        g = gcd(g, abs(c))
    return const % g == 0


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def analyse_signs(cand: DecompositionCandidate, degree_zero: Sequence[int],
                  sign_names: Dict[int, str]) -> DecompositionCandidate:
    """열 부호 σ 중 양의 차수를 허용하는 것만 남기고, 상대 부호가 고정된 열끼리 묶는다"""
    n, s = len(cand.B), cand.columns - 1
    rows = [i for i in degree_zero if i != cand.lumped_row]
    feasible = []
    for sigma in itertools.product((1, -1), repeat=s):
        ok = True
        for i in rows:
            coeffs = [sigma[j] * cand.B[i][j + 1] for j in range(s) if cand.B[i][j + 1]]
            if not _row_feasible(coeffs, cand.B[i][0]):
                ok = False
                break
        if ok:
            feasible.append(sigma)
    cand.feasible_patterns = len(feasible)
    if not feasible:
        logger.info("candidate %d: no sign pattern admits positive degrees", cand.index)
        cand.column_signs = [(None, 1)] * s
        cand.relations = []
        return cand

    uf = _UnionFind(s)
    for a, b in itertools.combinations(range(s), 2):
        if len({sig[a] * sig[b] for sig in feasible}) == 1:
            uf.union(a, b)
    non_lumped = [i for i in range(n) if i != cand.lumped_row]

    def weight(j: int) -> Tuple[int, int]:
        return (sum(1 for i in non_lumped if cand.B[i][j + 1]), j)

    orbits: Dict[int, List[int]] = {}
    for j in range(s):
        orbits.setdefault(uf.find(j), []).append(j)
    signs: List[Tuple[Optional[str], int]] = [(None, 1)] * s
    used = set()
    auto = 0
    for members in sorted(orbits.values()):
        ref = min(members, key=weight)
        sig0 = feasible[0]
        fixed = len({sig[ref] for sig in feasible}) == 1
        if fixed:
            for j in members:
                signs[j] = (None, sig0[j])
            continue
        name = None
        for i in range(n):
            if any(cand.B[i][j + 1] for j in members) and i in sign_names and sign_names[i] not in used:
                name = sign_names[i]
                break
        if name is None:
            auto += 1
            name = f"s{auto}"
        used.add(name)
        for j in members:
            signs[j] = (name, sig0[j] * sig0[ref])
    cand.column_signs = signs

    rels = []
    for i in rows:
        expr = sympy.Integer(cand.B[i][0])
        for j in range(s):
            b = cand.B[i][j + 1]
            if b:
                sym, c = signs[j]
                factor = sympy.Symbol(sym) * c if sym else c
                expr += factor * b * sympy.Symbol(cand.degree_symbol(j + 1))
        if expr != 0:
            rels.append(sympy.expand(expr))
    cand.relations = rels
    return cand


# ──────────────────────────────────────────────────────────────────────────────
# 부분 지표표
# ──────────────────────────────────────────────────────────────────────────────
def reconstruct_partial_table(gx: GammaExpansion, cand: DecompositionCandidate,
                              special: SpecialClassSet) -> PartialColumnSet:
    CB = matmul(gx.C, as_matrix(cand.B))
    cols = transpose(CB)
    t = special.table
    rows = []
    for j, values in enumerate(cols):
        if j == 0:
            rows.append(PartialRow(cand.theta(0), tuple(values), known_degree=1))
            continue
        sym, c = cand.column_signs[j - 1] if cand.column_signs else (None, 1)
        rows.append(PartialRow(cand.theta(j), tuple(values), degree_symbol=cand.degree_symbol(j),
                               sign_symbol=sym, sign_coeff=c))
    return PartialColumnSet(
        table_of="G",
        class_labels=tuple(special.labels),
        centralizers=tuple(t.classes[k].centralizer_order for k in special.class_indices),
        element_orders=tuple(t.classes[k].element_order for k in special.class_indices),
        rows=rows,
        degree_relations=list(cand.relations),
    )


# ──────────────────────────────────────────────────────────────────────────────
# Case 1 소거
# ──────────────────────────────────────────────────────────────────────────────
@dataclass
class AlphaCondition:
    classes: Tuple[str, str, str]
    target: sympy.Expr
    text: str = ""


@dataclass
class BranchResult:
    signs: Dict[str, int]
    eliminated: bool = False
    reason: str = ""
    dependents: Dict[str, str] = field(default_factory=dict)
    polynomials: List[str] = field(default_factory=list)
    roots: Dict[str, int] = field(default_factory=dict)
    order_expression: Optional[str] = None
    feasible_set: Optional[str] = None
    integer_points: List[int] = field(default_factory=list)
    verified: bool = False
    steps: List[str] = field(default_factory=list)
    # 소거되지 않은 다른 근들 (roots 는 첫 생존 근)
    alternatives: List[Dict[str, int]] = field(default_factory=list)


@dataclass
class EliminationReport:
    candidate: int
    branches: List[BranchResult] = field(default_factory=list)
    note: str = ""

    @property
    def eliminated(self) -> bool:
        return all(b.eliminated for b in self.branches)


def _row_value(row: PartialRow, k: int) -> sympy.Expr:
    v = row.values[k].to_sympy()
    if row.sign_symbol:
        v = v * sympy.Symbol(row.sign_symbol) * row.sign_coeff
    else:
        v = v * row.sign_coeff
    return v


def alpha_expression(partial: PartialColumnSet, classes: Tuple[str, str, str]) -> sympy.Expr:
    """Σ_θ θ(x)θ(y)θ(z)/θ(1) (실수값이므로 켤레 생략)"""
    ks = [partial.column(c) for c in classes]
    total = sympy.Integer(0)
    for row in partial.rows:
        vals = [_row_value(row, k) for k in ks]
        if any(v == 0 for v in vals):
            continue
        deg = sympy.Integer(row.known_degree) if row.known_degree else sympy.Symbol(row.degree_symbol)
        total += vals[0] * vals[1] * vals[2] / deg
    return total


def _mentions_order(cond: AlphaCondition) -> bool:
    return any(s.name == "G" for s in cond.target.free_symbols)


def _positive_int(v: sympy.Expr) -> bool:
    return v.is_Integer and v > 0


def _solve_dependents(relations: List[sympy.Expr], degree_order: List[sympy.Symbol],
                      res: BranchResult) -> Optional[Dict[sympy.Symbol, sympy.Expr]]:
    subs: Dict[sympy.Symbol, sympy.Expr] = {}
    for rel in relations:
        r = sympy.expand(rel.subs(subs))
        if r == 0:
            continue
        free = [d for d in degree_order if d in r.free_symbols and d not in subs]
        if not free:
            res.eliminated, res.reason = True, f"degree relation {rel} = 0 fails"
            return None
        dep = free[0]
        sol = sympy.solve(r, dep)
        if len(sol) != 1:
            raise UnderdeterminedSystem(f"relation {rel} is not linear in {dep}")
        subs = {k: sympy.expand(v.subs(dep, sol[0])) for k, v in subs.items()}
        subs[dep] = sol[0]
    return subs


@dataclass
class OrderCheck:
    eliminated: bool = False
    reason: str = ""
    order_expression: Optional[str] = None
    feasible_set: Optional[str] = None
    integer_points: List[int] = field(default_factory=list)
    steps: List[str] = field(default_factory=list)


def _int_roots(st: Dict[sympy.Symbol, sympy.Expr]) -> Dict[str, int]:
    return {str(k): int(v) for k, v in st.items() if v.is_Integer}


def _order_check(alphas, sign_map, st: Dict[sympy.Symbol, sympy.Expr],
                 order_ratio_bound: int, h_order: int) -> OrderCheck:
    """근 하나를 대입한 뒤 |G| 를 남은 차수의 유리함수로 놓고 하한/배수 조건을 본다"""
    out = OrderCheck()
    G = sympy.Symbol("G")
    bound = order_ratio_bound * h_order
    for cond, alpha in alphas:
        tg = [s for s in cond.target.free_symbols if s.name == "G"]
        if not tg:
            continue
        a = sympy.together(alpha.subs(sign_map).subs(st))
        if a == 0:
            out.eliminated, out.reason = True, "alpha vanishes, so no finite |G|"
            break
        sol = sympy.solve(sympy.Eq(cond.target.subs(tg[0], G), a), G)
        if len(sol) != 1:
            raise UnderdeterminedSystem(f"cannot isolate |G| from {cond.text}")
        order = sympy.factor(sol[0])
        out.order_expression = str(order)
        out.steps.append(f"|G| = {order}")
        free = sorted(order.free_symbols, key=str)
        if len(free) > 1:
            raise UnderdeterminedSystem(f"|G| depends on {', '.join(map(str, free))}")
        if not free:
            out.feasible_set = str(order)
            if not (bool(order > 0) and bool(order >= bound)):
                out.eliminated, out.reason = True, f"|G| = {order} < {bound}"
                break
            continue
        var = free[0]
        x = sympy.Symbol(var.name, real=True)
        S = solve_univariate_inequality(order.subs(var, x) >= bound, x, relational=False)
        S = S.intersect(Interval(1, oo))
        for v in st.values():
            if var in v.free_symbols:
                S = S.intersect(solve_univariate_inequality(v.subs(var, x) >= 1, x, relational=False))
        out.feasible_set = str(S)
        out.steps.append(f"|G| >= {order_ratio_bound}*{h_order} and {var} >= 1: {var} in {S}")
        if S.is_empty:
            out.eliminated, out.reason = True, f"no {var} >= 1 gives |G| >= {bound}"
            break
        if S.sup.is_finite:
            pts = [v for v in range(int(sympy.ceiling(S.inf)), int(sympy.floor(S.sup)) + 1)
                   if S.contains(v) == sympy.true]
            out.integer_points = pts
            if not pts:
                out.eliminated, out.reason = True, f"{var} in {S} has no integer point"
                break
            orders = [order.subs(var, v) for v in pts]
            if not any(o.is_Integer and o % h_order == 0 for o in orders):
                out.eliminated, out.reason = True, f"no integer point gives |G| divisible by {h_order}"
                break
        out.reason = out.reason or f"{var} in {S} survives"
    if not out.eliminated and not out.reason:
        out.reason = "no condition on |G|"
    return out


def case1_eliminate(partial: PartialColumnSet, conditions: Sequence[AlphaCondition],
                    order_ratio_bound: int, h_order: int, index: int = 0,
                    lumped: bool = False) -> EliminationReport:
    report = EliminationReport(index)
    sign_syms: List[str] = []
    for row in partial.rows:
        if row.sign_symbol and row.sign_symbol not in sign_syms:
            sign_syms.append(row.sign_symbol)
    degree_order = [sympy.Symbol(r.degree_symbol) for r in partial.rows if r.degree_symbol]
    alphas = [(cond, alpha_expression(partial, cond.classes)) for cond in conditions]
    if lumped:
        report.note = "constituents of the lumped row vanish on every configured triple"

    for values in itertools.product((1, -1), repeat=len(sign_syms)):
        sign_map = {sympy.Symbol(s): v for s, v in zip(sign_syms, values)}
        res = BranchResult({s: v for s, v in zip(sign_syms, values)})
        report.branches.append(res)
        rels = [sympy.expand(r.subs(sign_map)) for r in partial.degree_relations]
        subs = _solve_dependents(rels, degree_order, res)
        if subs is None:
            continue
        res.dependents = {str(k): str(v) for k, v in subs.items()}
        res.steps.append("signs " + ", ".join(f"{k} = {v}" for k, v in res.signs.items()))
        for k, v in subs.items():
            res.steps.append(f"{k} = {v}")

        # 1) |G| 을 포함하지 않는 조건: 단변수 다항식의 양의 정수 근
        states = [dict(subs)]
        for cond, alpha in alphas:
            if _mentions_order(cond):
                continue
            new_states = []
            for st in states:
                expr = sympy.together(alpha.subs(sign_map).subs(st) - cond.target)
                num, _ = sympy.fraction(expr)
                num = sympy.expand(num)
                free = sorted(num.free_symbols, key=str)
                if not free:
                    if num == 0:
                        new_states.append(st)
                    continue
                if len(free) > 1:
                    raise UnderdeterminedSystem(
                        f"alpha {' '.join(cond.classes)} leaves unknowns {', '.join(map(str, free))}")
                var = free[0]
                poly = Poly(num, var).monic()
                res.polynomials.append(str(poly.as_expr()))
                res.steps.append(f"alpha {' '.join(cond.classes)} = {cond.text}: {poly.as_expr()} = 0")
                for root in poly.ground_roots():
                    trial = {k: sympy.simplify(v.subs(var, root)) for k, v in st.items()}
                    trial[var] = root
                    if all(_positive_int(v) for v in trial.values() if not v.free_symbols):
                        new_states.append(trial)
            states = new_states
        if not states:
            res.eliminated, res.reason = True, "no positive integer root"
            continue
        # 근마다 |G| 조건을 따로 본다: 모든 근이 모순일 때만 소거
        checks = [_order_check(alphas, sign_map, st, order_ratio_bound, h_order) for st in states]
        alive = [k for k, chk in enumerate(checks) if not chk.eliminated]
        res.verified = all(
            sympy.simplify(alpha.subs(sign_map).subs(st) - cond.target) == 0
            for st in states for cond, alpha in alphas if not _mentions_order(cond))
        if len(states) > 1:
            res.steps.append(f"{len(states)} admissible roots")
        for st, chk in zip(states, checks):
            if len(states) > 1:
                roots = ", ".join(f"{k} = {v}" for k, v in _int_roots(st).items())
                res.steps.append(f"root {roots}: {'eliminated' if chk.eliminated else 'survives'}")
                res.steps += ["  " + s for s in chk.steps]
            else:
                res.steps += chk.steps
        pick = alive[0] if alive else 0
        chk = checks[pick]
        res.roots = _int_roots(states[pick])
        res.alternatives = [_int_roots(states[k]) for k in alive[1:]]
        res.order_expression, res.feasible_set = chk.order_expression, chk.feasible_set
        res.integer_points = chk.integer_points
        res.eliminated = not alive
        if res.eliminated and len(states) > 1:
            res.reason = f"all {len(states)} admissible roots contradicted: " + "; ".join(c.reason for c in checks)
        else:
            res.reason = chk.reason
    logger.info("candidate %d: %s", index, "eliminated" if report.eliminated else "survives")
    return report


def render_matrix(M: Matrix) -> List[str]:
    cells = [[render(Scalar.of(x)) for x in row] for row in M]
    if not cells:
        return []
    w = max(len(c) for row in cells for c in row)
    return ["[" + " ".join(f"{c:>{w}}" for c in row) + "]" for row in cells]
