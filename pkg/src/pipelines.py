# src/pipelines.py
# -*- coding: utf-8 -*-
"""
시나리오 파이프라인
- SuzukiPipeline : Case 1 (특수류 → 분해 후보 → 부호 분석 → 소거)
- BlockPipeline  : Case 2 (정수성 → K 열거 → 필터 → 생존 후보 분석 → 위수 종결)
- 두 파이프라인 모두 run() 한 번으로 결과 객체를 돌려준다. 파일 쓰기는 reports 담당
"""
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from .blocks import (SURVIVING, CandidateK, ColumnMethodInstance, DegreeCongruence, DegreeRules,
                     EndgameReport, ExclusionReport, GoldenComparison, GramConsistency, LabelledRow,
                     RestrictionContext, apply_filters, compare_golden, degree_congruences,
                     enumerate_K, exclude_degree_with_unknown, gram_consistency, label_rows,
                     linear_character_exclusion, mod_p_degree_checks, order_endgame,
                     verify_integer_transfer)
from .chartable import CharacterTable, Congruence, PartialColumnSet
from .config import JOBS, OUT_DIR
from .doc_io import (Case1Config, Case2Config, load_case1_config, load_case2_instance,
                     load_golden_dir, load_table)
from .errors import ConfigError, NonIntegerValue
from .exact import Scalar
from .linalg import Matrix
from .suzuki import (AlphaCondition, DecompositionCandidate, EliminationReport, GammaExpansion,
                     SpecialClassSet, VanishingBasis, analyse_signs, case1_eliminate,
                     degree_zero_rows, enumerate_decompositions, gamma_expansion, induced_gram,
                     lumpable_rows, reconstruct_partial_table, trivial_column, vanishing_basis)

logger = logging.getLogger(__name__)


# ──────────────────────────────────────────────────────────────────────────────
# 시나리오 설정
# ──────────────────────────────────────────────────────────────────────────────
class ScenarioConfig(BaseModel):
    scenario: str = Field(description="case1 / case2")
    config_path: str = Field(description="시나리오 문서 경로")
    table_path: str = Field(default="", description="설정 문서가 가리키는 H 지표표")
    golden_dir: Optional[str] = Field(default=None, description="Case 2 golden K 디렉터리")
    out_dir: str = Field(default=OUT_DIR, description="보고서 출력 디렉터리")
    jobs: int = Field(default=JOBS, ge=1, description="열거 병렬도")
    filters: bool = Field(default=True, description="Case 2 블록 필터 사용 여부")
    summary_only: bool = Field(default=False, description="요약 JSON 만 기록")

    def check_files(self) -> None:
        """계산 전에 참조 파일이 모두 있는지 확인 (fail-fast)"""
        for label, path in (("config", self.config_path), ("table", self.table_path)):
            if not path or not os.path.isfile(path):
                raise ConfigError(f"{label} file not found: {path}")
        if self.golden_dir is not None and not os.path.isdir(self.golden_dir):
            raise ConfigError(f"golden directory not found: {self.golden_dir}")


# ──────────────────────────────────────────────────────────────────────────────
# Case 1
# ──────────────────────────────────────────────────────────────────────────────
@dataclass
class Case1Item:
    candidate: DecompositionCandidate
    partial: PartialColumnSet
    report: EliminationReport


@dataclass
class Case1Result:
    config: Case1Config
    table: CharacterTable
    special: SpecialClassSet
    basis: VanishingBasis
    gamma: GammaExpansion
    gram: Matrix
    trivial: List[Scalar]
    degree_zero: List[int]
    lumped_row: Optional[int]
    conditions: List[AlphaCondition]
    items: List[Case1Item] = field(default_factory=list)

    @property
    def all_eliminated(self) -> bool:
        return bool(self.items) and all(it.report.eliminated for it in self.items)

    @property
    def exit_code(self) -> int:
        return 0 if self.all_eliminated else 1


class SuzukiPipeline:
    def __init__(self, config: Case1Config, table: Optional[CharacterTable] = None, jobs: int = 1):
        self.config = config
        self.table = table or load_table(config.table_path)
        self.jobs = jobs

    @classmethod
    def from_file(cls, path: str, jobs: int = 1) -> "SuzukiPipeline":
        return cls(load_case1_config(path), jobs=jobs)

    def _conditions(self) -> List[AlphaCondition]:
        out = []
        for eq in self.config.alphas:
            classes = tuple(self.config.resolve_class(c) for c in eq.triple)
            for c in classes:
                if c not in self.config.special:
                    raise ConfigError(f"alpha class {c} is not a special class")
            out.append(AlphaCondition(classes, eq.target, eq.text))
        return out

    def run(self) -> Case1Result:
        cfg, t = self.config, self.table
        special = SpecialClassSet.from_names(t, cfg.special, cfg.assumptions)
        vb = vanishing_basis(special, cfg.basis or None)
        gx = gamma_expansion(vb)
        gram = induced_gram(vb)
        triv = trivial_column(vb)
        zero = degree_zero_rows(vb)
        conditions = self._conditions()

        # α 삼중쌍을 특수류 위치로
        labels = special.labels
        triples = [tuple(labels.index(c) for c in cond.classes) for cond in conditions]
        lumpable = lumpable_rows(gx.C, triples)
        lumped = None
        if lumpable:
            lumped = max(lumpable, key=lambda k: (gram[k][k], -k))
        logger.info("case1: basis %s, lumped row %s", vb.names, lumped)

        result = Case1Result(cfg, t, special, vb, gx, gram, triv, zero, lumped, conditions)
        for cand in enumerate_decompositions(gram, triv, lumped, jobs=self.jobs):
            analyse_signs(cand, zero, cfg.signs)
            partial = reconstruct_partial_table(gx, cand, special)
            report = case1_eliminate(partial, conditions, cfg.order_ratio_bound, t.group_order, cand.index,
                                     lumped=cand.lumped_row is not None)
            result.items.append(Case1Item(cand, partial, report))
        logger.info("case1: %d candidates, all eliminated = %s", len(result.items), result.all_eliminated)
        return result


# ──────────────────────────────────────────────────────────────────────────────
# Case 2
# ──────────────────────────────────────────────────────────────────────────────
@dataclass
class SurvivorAnalysis:
    candidate: CandidateK
    rows: Dict[str, LabelledRow]
    congruences: List[DegreeCongruence]
    mod_p: Dict[str, Congruence]
    exclusions: List[ExclusionReport]
    endgame: EndgameReport


@dataclass
class Case2Result:
    config: Case2Config
    table: CharacterTable
    instance: ColumnMethodInstance
    integer_transfer: bool
    consistency: GramConsistency
    candidates: List[CandidateK]
    count_without_zero_rule: int
    filters_enabled: bool
    tally: Dict[str, int]
    golden: Optional[GoldenComparison] = None
    analysis: Optional[SurvivorAnalysis] = None

    @property
    def survivors(self) -> List[CandidateK]:
        return [c for c in self.candidates if c.status == SURVIVING]

    @property
    def contradiction(self) -> bool:
        return self.analysis is not None and self.analysis.endgame.contradiction

    @property
    def exit_code(self) -> int:
        if self.golden is not None and not self.golden.exact:
            return 1
        return 0 if self.contradiction else 1

    @property
    def verdict(self) -> str:
        if not self.filters_enabled:
            return f"filters disabled: {len(self.candidates)} candidates pending"
        if len(self.survivors) != 1:
            return f"{len(self.survivors)} candidates survive the filters"
        if self.contradiction:
            return "order endgame contradiction: no group satisfies the hypothesis"
        return "order endgame does not close: " + (self.analysis.endgame.reason if self.analysis else "")


class BlockPipeline:
    def __init__(self, config: Case2Config, table: Optional[CharacterTable] = None,
                 jobs: int = 1, filters: bool = True, golden: bool = True):
        self.config = config
        self.table = table or load_table(config.table_path)
        self.jobs = jobs
        self.filters = filters
        self.golden = [] if not (golden and config.golden_dir) else load_golden_dir(config.golden_dir)

    @classmethod
    def from_file(cls, path: str, jobs: int = 1, filters: bool = True) -> "BlockPipeline":
        return cls(load_case2_instance(path), jobs=jobs, filters=filters)

    def run(self) -> Case2Result:
        cfg = self.config
        inst = ColumnMethodInstance.from_config(cfg, self.table)
        transfer = verify_integer_transfer(inst)
        if not transfer:
            raise NonIntegerValue("N·M is not integral, the column transfer is invalid")
        consistency = gram_consistency(inst)
        enum = enumerate_K(inst, jobs=self.jobs)
        tally = apply_filters(enum.candidates, inst, enabled=self.filters)
        result = Case2Result(cfg, self.table, inst, transfer, consistency, enum.candidates,
                             enum.count_without_zero_rule, self.filters, tally)
        if self.golden:
            result.golden = compare_golden(enum.candidates, self.golden)
            logger.info("golden: %d matched, %d missing, %d extra", len(result.golden.matched),
                        len(result.golden.missing), len(result.golden.extras))
        if self.filters and len(result.survivors) == 1:
            result.analysis = self.analyse(result.survivors[0], inst)
        return result

    def analyse(self, cand: CandidateK, inst: ColumnMethodInstance) -> SurvivorAnalysis:
        cfg = self.config
        rows = {r.label: r for r in label_rows(cand, cfg.profiles)}
        ctx = RestrictionContext(self.table, inst.labels, cfg.fusion)
        congs = degree_congruences(rows, ctx, cfg.degree_checks)
        mod_p = mod_p_degree_checks(rows, inst.pcentral, inst.prime) if inst.pcentral is not None else {}
        rules = DegreeRules(
            congruences={}, aggregates=dict(cfg.aggregates),
            linear={row: [inst.column(c) for c in cols] for row, cols in cfg.linear.items()},
        )
        for c in congs:
            rules.congruences.setdefault(c.row, []).append(c.congruence)
        exclusions = [_exclusion(rows[row], value, ctx, rules) for row, value in cfg.forbid]
        endgame = order_endgame(rows, inst, ctx, rules, cfg)
        logger.info("case2: endgame contradiction = %s", endgame.contradiction)
        return SurvivorAnalysis(cand, rows, congs, mod_p, exclusions, endgame)


def _exclusion(row: LabelledRow, value: int, ctx: RestrictionContext, rules: DegreeRules) -> ExclusionReport:
    if row.label in rules.aggregates:
        unknown, combos = rules.aggregates[row.label]
        return exclude_degree_with_unknown(row, value, ctx, unknown, combos)
    if row.label in rules.linear:
        return ExclusionReport(row.label, value, rule="linear",
                               excluded=linear_character_exclusion(row, value, rules.linear[row.label]))
    return ExclusionReport(row.label, value, rule="none")
