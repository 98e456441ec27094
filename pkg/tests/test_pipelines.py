# tests/test_pipelines.py
import dataclasses
import json
import os
from fractions import Fraction

import pytest
from pydantic import ValidationError

from src.blocks import PENDING
from src.doc_io import load_case2_instance
from src.errors import ConfigError, NonIntegerValue
from src.exact import Scalar
from src.pipelines import BlockPipeline, ScenarioConfig
from src.reports import (case1_summary, case1_texts, case1_verdict, case2_summary, case2_texts,
                         write_reports)

from .conftest import CASE1, CASE2, TABLE


# ──────────────────────────────────────────────────────────────────────────────
# 설정
# ──────────────────────────────────────────────────────────────────────────────
def test_scenario_config_checks_files(tmp_path):
    ok = ScenarioConfig(scenario="case1", config_path=CASE1, table_path=TABLE, out_dir=str(tmp_path))
    ok.check_files()
    with pytest.raises(ConfigError):
        ScenarioConfig(scenario="case1", config_path=str(tmp_path / "none.cfg"), table_path=TABLE).check_files()
    with pytest.raises(ConfigError):
        ScenarioConfig(scenario="case2", config_path=CASE2, table_path=TABLE,
                       golden_dir=str(tmp_path / "nowhere")).check_files()


def test_scenario_config_rejects_zero_jobs():
    with pytest.raises(ValidationError):
        ScenarioConfig(scenario="case1", config_path=CASE1, jobs=0)


# ──────────────────────────────────────────────────────────────────────────────
# Case 1
# ──────────────────────────────────────────────────────────────────────────────
def test_case1_verdict_and_summary(case1_result):
    assert case1_verdict(case1_result) == "all candidates eliminated => G = H"
    s = case1_summary(case1_result)
    assert s.all_eliminated and s.exit_code == 0
    assert s.lumped_row == 1
    assert len(s.candidates) == 5
    assert s.special_classes == ["C6", "C7", "C11", "C12"]


def test_case1_reports(tmp_path, case1_result):
    paths = write_reports(str(tmp_path), case1_summary(case1_result), case1_texts(case1_result))
    names = sorted(os.path.basename(p) for p in paths)
    assert names == sorted(["summary.json", "derivation.txt"] + [f"candidate_{i:02d}.txt" for i in range(1, 6)])
    data = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
    assert data["verdict"] == "all candidates eliminated => G = H"
    assert all(c["eliminated"] for c in data["candidates"])


# ──────────────────────────────────────────────────────────────────────────────
# Case 2
# ──────────────────────────────────────────────────────────────────────────────
def test_case2_verdict(case2_result):
    res = case2_result
    assert res.contradiction
    assert res.verdict == "order endgame contradiction: no group satisfies the hypothesis"
    # golden 목록에 없는 후보가 3개 더 있다
    assert res.exit_code == 1


def test_case2_without_golden_closes():
    res = BlockPipeline(load_case2_instance(CASE2), golden=False).run()
    assert res.golden is None
    assert res.exit_code == 0


def test_case2_filters_disabled():
    res = BlockPipeline.from_file(CASE2, filters=False).run()
    assert len(res.candidates) == 16
    assert all(c.status == PENDING for c in res.candidates)
    assert res.analysis is None
    assert res.verdict == "filters disabled: 16 candidates pending"
    assert res.exit_code == 1


def test_case2_summary(tmp_path, case2_result):
    s = case2_summary(case2_result)
    assert s.candidate_count == 16
    assert s.filter_tally["surviving"] == 1
    assert s.golden.matched["case2_k01"] == s.survivors[0]
    assert s.endgame.lower_bound == "4857/11440"
    assert s.endgame.square_sum == 7241
    paths = write_reports(str(tmp_path), s, case2_texts(case2_result), summary_only=True)
    assert [os.path.basename(p) for p in paths] == ["summary.json"]
    assert sorted(os.listdir(tmp_path)) == ["summary.json"]


def test_case2_texts_cover_every_candidate(case2_result):
    texts = case2_texts(case2_result)
    assert len(texts) == 17
    assert "derivation.txt" in texts


def test_non_integral_transfer_is_refused():
    cfg = load_case2_instance(CASE2)
    M = [list(r) for r in cfg.M]
    M[0][0] = M[0][0] + Scalar(Fraction(1, 7))
    with pytest.raises(NonIntegerValue):
        BlockPipeline(dataclasses.replace(cfg, M=M), golden=False).run()
