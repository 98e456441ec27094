# src/reports.py
# -*- coding: utf-8 -*-
"""
보고서
- 요약(summary.json): pydantic 모델 → model_dump_json. 같은 입력이면 바이트 단위로 같아야 한다
- 유도 과정(*.txt): 사람이 읽는 평문. 후보 하나당 파일 하나
- 로그/시간/경로 같은 실행 환경 값은 요약에 넣지 않는다
"""
import logging
import os
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from .exact import Scalar, render
from .pipelines import Case1Item, Case1Result, Case2Result
from .suzuki import render_matrix

logger = logging.getLogger(__name__)


def _r(x) -> str:
    return render(Scalar.of(x))


def _rows(M) -> List[List[str]]:
    return [[_r(x) for x in row] for row in M]


# ──────────────────────────────────────────────────────────────────────────────
# Case 1 요약
# ──────────────────────────────────────────────────────────────────────────────
class BranchSummary(BaseModel):
    signs: Dict[str, int] = {}
    eliminated: bool
    reason: str = ""
    roots: Dict[str, int] = {}
    polynomials: List[str] = []
    order_expression: Optional[str] = None
    feasible_set: Optional[str] = None
    integer_points: List[int] = []
    alternatives: List[Dict[str, int]] = []


class DecompositionSummary(BaseModel):
    index: int
    B: List[List[int]]
    lumped_row: Optional[int] = Field(default=None, description="0 부터 센 행 번호")
    residual: int = 0
    column_signs: List[str] = []
    relations: List[str] = []
    eliminated: bool
    branches: List[BranchSummary] = []


class Case1Summary(BaseModel):
    scenario: str
    table: str
    special_classes: List[str]
    basis: List[str]
    C: List[List[str]]
    gram: List[List[str]]
    trivial_column: List[str]
    degree_zero_rows: List[int]
    lumped_row: Optional[int] = None
    candidates: List[DecompositionSummary] = []
    all_eliminated: bool
    verdict: str
    exit_code: int


def _sign_text(sym: Optional[str], c: int) -> str:
    if sym:
        return sym if c == 1 else f"-{sym}"
    return "+" if c == 1 else "-"


def case1_verdict(res: Case1Result) -> str:
    if res.all_eliminated:
        return "all candidates eliminated => G = H"
    alive = [str(it.candidate.index) for it in res.items if not it.report.eliminated]
    return "surviving candidates: " + ", ".join(alive)


def case1_summary(res: Case1Result) -> Case1Summary:
    cands = []
    for it in res.items:
        c, rep = it.candidate, it.report
        cands.append(DecompositionSummary(
            index=c.index, B=c.B, lumped_row=c.lumped_row, residual=c.residual,
            column_signs=[_sign_text(s, k) for s, k in c.column_signs],
            relations=[f"{r} = 0" for r in c.relations],
            eliminated=rep.eliminated,
            branches=[BranchSummary(
                signs=b.signs, eliminated=b.eliminated, reason=b.reason, roots=b.roots,
                polynomials=b.polynomials, order_expression=b.order_expression,
                feasible_set=b.feasible_set, integer_points=b.integer_points, alternatives=b.alternatives,
            ) for b in rep.branches],
        ))
    return Case1Summary(
        scenario=res.config.scenario,
        table=res.table.name,
        special_classes=res.special.labels,
        basis=res.basis.names,
        C=_rows(res.gamma.C),
        gram=_rows(res.gram),
        trivial_column=[_r(x) for x in res.trivial],
        degree_zero_rows=res.degree_zero,
        lumped_row=res.lumped_row,
        candidates=cands,
        all_eliminated=res.all_eliminated,
        verdict=case1_verdict(res),
        exit_code=res.exit_code,
    )


def case1_overview_text(res: Case1Result) -> str:
    lines = [f"scenario {res.config.scenario}: special classes {' '.join(res.special.labels)}"]
    for a in res.special.assumptions:
        lines.append(f"  assumed: {a}")
    lines.append("")
    lines.append("vanishing basis (rows over the irreducible characters of H):")
    for name, row in zip(res.basis.names, res.basis.A):
        terms = [f"{_r(c)}*{res.table.characters[j].name}" for j, c in enumerate(row) if c]
        lines.append(f"  {name} = " + " + ".join(terms))
    lines.append("")
    lines.append("gamma expansion C (row = special class, column = basis function):")
    lines += ["  " + s for s in render_matrix(res.gamma.C)]
    lines.append("")
    lines.append("induced inner products (lambda_i^G, lambda_j^G):")
    lines += ["  " + s for s in render_matrix(res.gram)]
    lines.append("")
    lines.append("trivial column: " + " ".join(_r(x) for x in res.trivial))
    if res.lumped_row is not None:
        lines.append(f"row {res.basis.names[res.lumped_row]} is left partially decomposed")
    lines.append(f"{len(res.items)} candidate decompositions")
    lines.append("")
    lines.append(case1_verdict(res))
    return "\n".join(lines) + "\n"


def case1_candidate_text(res: Case1Result, it: Case1Item) -> str:
    c, rep, partial = it.candidate, it.report, it.partial
    lines = [f"candidate {c.index}", "", "B:"]
    lines += ["  " + s for s in render_matrix(c.B)]
    if c.lumped_row is not None:
        lines.append(f"  row {res.basis.names[c.lumped_row]} has residual norm {c.residual}")
    lines.append("")
    lines.append("column signs: " + " ".join(_sign_text(s, k) for s, k in c.column_signs))
    for r in c.relations:
        lines.append(f"  {r} = 0")
    lines.append("")
    lines.append("partial character table on " + " ".join(partial.class_labels) + ":")
    for row in partial.rows:
        deg = str(row.known_degree) if row.known_degree else row.degree_symbol
        sign = "" if not row.sign_symbol else f" (times {_sign_text(row.sign_symbol, row.sign_coeff)})"
        lines.append(f"  {row.label}({deg}) " + " ".join(render(v) for v in row.values) + sign)
    lines.append("")
    if rep.note:
        lines += [rep.note, ""]
    for b in rep.branches:
        head = ", ".join(f"{k} = {v}" for k, v in b.signs.items()) or "no sign parameters"
        lines.append(f"branch {head}:")
        lines += ["  " + s for s in b.steps]
        if b.roots:
            lines.append("  roots: " + ", ".join(f"{k} = {v}" for k, v in b.roots.items()))
        for alt in b.alternatives:
            lines.append("  also surviving: " + ", ".join(f"{k} = {v}" for k, v in alt.items()))
        lines.append(f"  {'eliminated' if b.eliminated else 'survives'}: {b.reason}")
    lines.append("")
    lines.append(f"candidate {c.index}: {'eliminated' if rep.eliminated else 'not eliminated'}")
    return "\n".join(lines) + "\n"


# ──────────────────────────────────────────────────────────────────────────────
# Case 2 요약
# ──────────────────────────────────────────────────────────────────────────────
class KCandidateSummary(BaseModel):
    index: int
    rows: int
    K: List[List[int]]
    status: str
    rejected_by: Optional[str] = None
    reason: str = ""
    golden: Optional[str] = None


class GoldenSummary(BaseModel):
    matched: Dict[str, int] = {}
    missing: List[str] = []
    extras: List[int] = []
    collisions: List[str] = []
    exact: bool


class CongruenceSummary(BaseModel):
    row: str
    character: str
    expression: str
    residue: Optional[int] = None
    modulus: Optional[int] = None


class ExclusionSummary(BaseModel):
    row: str
    degree: int
    rule: str
    expressions: List[str] = []
    consistent_n: List[int] = []
    excluded: bool


class EndgameSummary(BaseModel):
    identity: str = ""
    coefficients: Dict[str, str] = {}
    extremal_degrees: Dict[str, int] = {}
    lower_bound: Optional[str] = None
    order_limit: Optional[int] = None
    orders: List[int] = []
    square_degrees: Dict[str, int] = {}
    square_sum: Optional[int] = None
    contradiction: bool = False
    reason: str = ""


class Case2Summary(BaseModel):
    scenario: str
    table: str
    integer_transfer: bool
    gram_diagonal: List[str]
    gram_is_diagonal: bool
    candidate_count: int
    count_without_zero_rule: int
    filters_enabled: bool
    filter_tally: Dict[str, int]
    golden: Optional[GoldenSummary] = None
    candidates: List[KCandidateSummary] = []
    survivors: List[int] = []
    row_labels: List[str] = []
    congruences: List[CongruenceSummary] = []
    mod_p_congruences: Dict[str, str] = {}
    exclusions: List[ExclusionSummary] = []
    endgame: Optional[EndgameSummary] = None
    verdict: str
    exit_code: int


def case2_summary(res: Case2Result) -> Case2Summary:
    names = {}
    if res.golden is not None:
        names = {idx: name for name, idx in res.golden.matched.items()}
    out = Case2Summary(
        scenario=res.config.scenario,
        table=res.table.name,
        integer_transfer=res.integer_transfer,
        gram_diagonal=[_r(x) for x in res.consistency.diagonal],
        gram_is_diagonal=res.consistency.is_diagonal,
        candidate_count=len(res.candidates),
        count_without_zero_rule=res.count_without_zero_rule,
        filters_enabled=res.filters_enabled,
        filter_tally=res.tally,
        candidates=[KCandidateSummary(index=c.index, rows=c.rows, K=c.K, status=c.status,
                                      rejected_by=c.rejected_by, reason=c.reason,
                                      golden=names.get(c.index)) for c in res.candidates],
        survivors=[c.index for c in res.survivors],
        verdict=res.verdict,
        exit_code=res.exit_code,
    )
    if res.golden is not None:
        g = res.golden
        out.golden = GoldenSummary(matched=g.matched, missing=g.missing, extras=g.extras,
                                   collisions=g.collisions, exact=g.exact)
    a = res.analysis
    if a is None:
        return out
    out.row_labels = list(a.rows)
    out.congruences = [CongruenceSummary(
        row=c.row, character=c.character, expression=c.expression,
        residue=c.congruence.residue if c.congruence else None,
        modulus=c.congruence.modulus if c.congruence else None,
    ) for c in a.congruences]
    out.mod_p_congruences = {k: str(v) for k, v in a.mod_p.items()}
    out.exclusions = [ExclusionSummary(row=e.row, degree=e.degree, rule=e.rule, expressions=e.expressions,
                                       consistent_n=e.consistent_n, excluded=e.excluded)
                      for e in a.exclusions]
    e = a.endgame
    out.endgame = EndgameSummary(
        identity=e.identity,
        coefficients={k: str(v) for k, v in e.coefficients.items()},
        extremal_degrees=e.extremal_degrees,
        lower_bound=str(e.lower_bound) if e.lower_bound is not None else None,
        order_limit=e.order_limit, orders=e.orders, square_degrees=e.square_degrees,
        square_sum=e.square_sum, contradiction=e.contradiction, reason=e.reason,
    )
    return out


def case2_candidate_text(res: Case2Result, idx: int) -> str:
    c = res.candidates[idx]
    lines = [f"K candidate {c.index} ({c.rows} rows)", "", "K:"]
    lines += ["  " + s for s in render_matrix(c.K)]
    lines.append("")
    lines.append("L = K M^-1 (columns " + " ".join(res.instance.labels) + "):")
    lines += ["  " + s for s in render_matrix(c.L)]
    lines.append("")
    lines.append(f"status: {c.status}" + (f" ({c.rejected_by}: {c.reason})" if c.rejected_by else ""))
    return "\n".join(lines) + "\n"


def case2_overview_text(res: Case2Result) -> str:
    lines = [f"scenario {res.config.scenario}: columns " + " ".join(res.instance.labels)]
    lines.append(f"N*M integral: {'yes' if res.integer_transfer else 'no'}")
    lines.append("column norms of L: " + " ".join(_r(x) for x in res.consistency.diagonal)
                 + ("" if res.consistency.is_diagonal else " (not orthogonal)"))
    lines.append(f"{len(res.candidates)} canonical K candidates "
                 f"({res.count_without_zero_rule} if zero rows were allowed)")
    if res.golden is not None:
        g = res.golden
        lines.append(f"reference matrices: {len(g.matched)} matched, missing {g.missing or 'none'}, "
                     f"extra candidates {g.extras or 'none'}")
    if res.filters_enabled:
        lines.append("filters: " + ", ".join(f"{k} {v}" for k, v in res.tally.items()))
    a = res.analysis
    if a is not None:
        lines.append("")
        lines.append(f"surviving candidate {a.candidate.index}, rows oriented to their profiles:")
        for lab, row in a.rows.items():
            flip = "" if row.orientation == 1 else "  (sign flipped)"
            lines.append(f"  {lab:6} " + " ".join(render(v) for v in row.values) + flip)
        lines.append("")
        lines.append("degree congruences:")
        for c in a.congruences:
            tail = str(c.congruence) if c.congruence else "no integer solution"
            lines.append(f"  ({c.row}|_H, {c.character}) = {c.expression}  =>  {tail}")
        for lab, c in a.mod_p.items():
            lines.append(f"  {c}")
        lines.append("")
        lines.append("exclusions:")
        for e in a.exclusions:
            lines.append(f"  d({e.row}) = {e.degree} [{e.rule}]: {'excluded' if e.excluded else 'consistent'}")
            for x in e.expressions:
                lines.append(f"    {x}")
            if e.consistent_n:
                lines.append(f"    consistent unknown values: {e.consistent_n}")
        e = a.endgame
        lines.append("")
        lines.append("order endgame:")
        if e.identity:
            lines.append(f"  {e.identity}")
        for lab, d in e.extremal_degrees.items():
            lines.append(f"  extremal d({lab}) = {d}")
        if e.lower_bound is not None:
            lines.append(f"  lower bound {e.lower_bound}")
        if e.order_limit is not None:
            lines.append(f"  |G| <= {e.order_limit}")
            lines.append(f"  orders allowed by the Frobenius count: {e.orders}")
        if e.square_sum is not None:
            parts = " + ".join(f"{d}^2" for d in e.square_degrees.values())
            lines.append(f"  {parts} = {e.square_sum}")
        lines.append(f"  {e.reason}")
    lines.append("")
    lines.append(res.verdict)
    return "\n".join(lines) + "\n"


# ──────────────────────────────────────────────────────────────────────────────
# 파일 쓰기
# ──────────────────────────────────────────────────────────────────────────────
def write_reports(out_dir: str, summary: BaseModel, texts: Dict[str, str], summary_only: bool = False) -> List[str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = [os.path.join(out_dir, "summary.json")]
    with open(paths[0], "w", encoding="utf-8") as f:
        f.write(summary.model_dump_json(indent=2) + "\n")
    if not summary_only:
        for name in sorted(texts):
            p = os.path.join(out_dir, name)
            with open(p, "w", encoding="utf-8") as f:
                f.write(texts[name])
            paths.append(p)
    logger.info("wrote %d report files to %s", len(paths), out_dir)
    return paths


def case1_texts(res: Case1Result) -> Dict[str, str]:
    texts = {"derivation.txt": case1_overview_text(res)}
    for it in res.items:
        texts[f"candidate_{it.candidate.index:02d}.txt"] = case1_candidate_text(res, it)
    return texts


def case2_texts(res: Case2Result) -> Dict[str, str]:
    texts = {"derivation.txt": case2_overview_text(res)}
    for i, c in enumerate(res.candidates):
        texts[f"candidate_{c.index:02d}.txt"] = case2_candidate_text(res, i)
    return texts
