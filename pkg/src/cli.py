# src/cli.py
# -*- coding: utf-8 -*-
"""
명령행 작업대
- python -m src.cli <subcommand> [...]
- 종료 코드: 0 성공, 1 계산이 기대한 결론에 이르지 못함, 2 입력 오류
- 입력 오류는 계산 시작 전에, 보고서는 계산이 끝난 뒤에 한꺼번에 쓴다
"""
import argparse
import logging
import sys
from math import gcd
from typing import List, Optional

from . import config
from .chartable import (align_tables, frobenius_count, structure_constant_a,
                        structure_constant_alpha, validate_orthogonality)
from .dixon import dixon_character_table
from .doc_io import load_case1_config, load_case2_instance, load_generators, load_table, write_table
from .errors import WorkbenchError
from .exact import render
from .permgroup import (count_power_solutions, group_from_generators,
                        structure_constant_bruteforce)
from .pipelines import BlockPipeline, ScenarioConfig, SuzukiPipeline
from .reports import case1_summary, case1_texts, case2_summary, case2_texts, write_reports

logger = logging.getLogger(__name__)


# ──────────────────────────────────────────────────────────────────────────────
# 하위 명령
# ──────────────────────────────────────────────────────────────────────────────
def cmd_validate(args) -> int:
    t = load_table(args.table)
    rep = validate_orthogonality(t)
    for line in rep.lines():
        print(line)
    print("valid" if rep.ok else "INVALID")
    return 0 if rep.ok else 2


def cmd_structconst(args) -> int:
    t = load_table(args.table)
    alpha = structure_constant_alpha(t, args.x, args.y, args.z)
    a = structure_constant_a(t, args.x, args.y, args.z)
    print(f"alpha({args.x}, {args.y}, {args.z}) = {render(alpha)}")
    print(f"a({args.x}, {args.y}, {args.z}) = {a}")
    return 0


def cmd_suzuki(args) -> int:
    cfg = load_case1_config(args.config)
    sc = ScenarioConfig(scenario="case1", config_path=args.config, table_path=cfg.table_path,
                        out_dir=args.out, jobs=args.jobs, summary_only=args.summary_only)
    sc.check_files()
    res = SuzukiPipeline(cfg, jobs=sc.jobs).run()
    summary = case1_summary(res)
    write_reports(sc.out_dir, summary, case1_texts(res), sc.summary_only)
    print(summary.verdict)
    return res.exit_code


def cmd_blocksearch(args) -> int:
    cfg = load_case2_instance(args.config)
    sc = ScenarioConfig(scenario="case2", config_path=args.config, table_path=cfg.table_path,
                        golden_dir=cfg.golden_dir, out_dir=args.out, jobs=args.jobs,
                        filters=not args.no_filters, summary_only=args.summary_only)
    sc.check_files()
    res = BlockPipeline(cfg, jobs=sc.jobs, filters=sc.filters).run()
    summary = case2_summary(res)
    write_reports(sc.out_dir, summary, case2_texts(res), sc.summary_only)
    print(f"{summary.candidate_count} candidates; {summary.verdict}")
    return res.exit_code


def cmd_permgroup(args) -> int:
    gens, degree = load_generators(args.generators)
    g = group_from_generators(gens, degree, cap=args.cap)
    if args.action == "classes":
        print(f"order {g.order}")
        for c in g.classes:
            print(f"{c.name:4} order={c.element_order:<3} size={c.size:<5} "
                  f"centralizer={c.centralizer_order:<5} rep={c.representative}")
    elif args.action == "chartable":
        t = dixon_character_table(g)
        text = write_table(t, header=f"character table of a permutation group of order {g.order}")
        if args.compare:
            perm = align_tables(t, load_table(args.compare))
            text += f"# aligned with {args.compare}: {'yes' if perm is not None else 'no'}\n"
        sys.stdout.write(text)
    else:
        if len(args.classes) != 3:
            print("structconst needs three classes", file=sys.stderr)
            return 2
        x, y, z = args.classes
        print(structure_constant_bruteforce(g, x, y, z))
    return 0


def cmd_frobenius(args) -> int:
    t = load_table(args.table)
    count = frobenius_count(t, args.m)
    print(f"#{{x : x^{args.m} = 1}} = {count}")
    d = gcd(args.m, t.group_order)
    divisible = count % d == 0
    print(f"divisible by gcd({args.m}, {t.group_order}) = {d}: {'yes' if divisible else 'no'}")
    status = 0 if divisible else 1
    if args.generators:
        gens, degree = load_generators(args.generators)
        direct = count_power_solutions(group_from_generators(gens, degree), args.m)
        print(f"direct count = {direct}")
        if direct != count:
            status = 1
    return status


# ──────────────────────────────────────────────────────────────────────────────
# 인자 파서
# ──────────────────────────────────────────────────────────────────────────────
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="workbench", description="exact character-table workbench")
    p.add_argument("--log-level", default=config.LOG_LEVEL, help="DEBUG / INFO / WARNING")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check orthogonality of a table document")
    v.add_argument("table", nargs="?", default=config.TABLE_PATH)
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("structconst", help="class multiplication coefficient from a table")
    s.add_argument("--table", default=config.TABLE_PATH)
    s.add_argument("x")
    s.add_argument("y")
    s.add_argument("z")
    s.set_defaults(func=cmd_structconst)

    for name, default, func in (("suzuki", config.CASE1_CONFIG, cmd_suzuki),
                                ("blocksearch", config.CASE2_CONFIG, cmd_blocksearch)):
        sp = sub.add_parser(name)
        sp.add_argument("--config", default=default)
        sp.add_argument("--out", default=config.OUT_DIR)
        sp.add_argument("--jobs", type=int, default=config.JOBS)
        sp.add_argument("--summary-only", action="store_true")
        if name == "blocksearch":
            sp.add_argument("--no-filters", action="store_true")
        sp.set_defaults(func=func)

    g = sub.add_parser("permgroup", help="permutation-group oracle")
    g.add_argument("--generators", default=config.GENERATORS_PATH)
    g.add_argument("--cap", type=int, default=config.PERM_CAP)
    g.add_argument("--compare", default=None, help="table document to align the Dixon table with")
    g.add_argument("action", choices=["classes", "chartable", "structconst"])
    g.add_argument("classes", nargs="*")
    g.set_defaults(func=cmd_permgroup)

    f = sub.add_parser("frobenius", help="number of solutions of x^m = 1")
    f.add_argument("--table", default=config.TABLE_PATH)
    f.add_argument("--generators", default=None)
    f.add_argument("m", type=int)
    f.set_defaults(func=cmd_frobenius)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except WorkbenchError as e:
        print(f"error [{type(e).__name__}]: {e.detail}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
