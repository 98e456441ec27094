# src/doc_io.py
# -*- coding: utf-8 -*-
"""
줄 단위 텍스트 문서 읽기/쓰기
- 지표표 문서, 생성원 문서, Case 1 설정, Case 2 인스턴스, K 행렬(golden) 파일
- 공통 규칙: 한 줄에 지시어 하나, '#' 뒤는 주석, 'begin NAME' ~ 'end' 는 블록
- 문법 오류는 ParseError("<파일>:<줄>: ...") 로 위치를 붙여서 올린다
"""
import logging
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import sympy
from sympy.parsing.sympy_parser import parse_expr

from .chartable import Character, CharacterTable, ConjClass
from .config import resolve_path
from .errors import ConfigError, ParseError, ScalarSyntaxError, StructureError
from .exact import Scalar, parse_scalar, render

logger = logging.getLogger(__name__)

G_SYMBOL = sympy.Symbol("G", positive=True)


# ──────────────────────────────────────────────────────────────────────────────
# 공통 토크나이저
# ──────────────────────────────────────────────────────────────────────────────
@dataclass
class Directive:
    lineno: int
    key: str
    args: List[str]
    rest: str


@dataclass
class Document:
    source: str
    directives: List[Directive] = field(default_factory=list)
    blocks: Dict[str, List[Directive]] = field(default_factory=dict)

    def where(self, d: Directive) -> str:
        return f"{self.source}:{d.lineno}"

    def fail(self, d: Directive, msg: str) -> ParseError:
        return ParseError(f"{self.where(d)}: {msg}")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return (line if i < 0 else line[:i]).strip()


def parse_document(text: str, source: str = "<text>") -> Document:
    doc = Document(source)
    block: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        parts = line.split(None, 1)
        key, rest = parts[0], (parts[1] if len(parts) > 1 else "")
        d = Directive(lineno, key, rest.split(), rest)
        if key == "begin":
            if block is not None:
                raise doc.fail(d, f"nested block inside {block!r}")
            if len(d.args) != 1:
                raise doc.fail(d, "'begin' takes exactly one block name")
            block = d.args[0]
            if block in doc.blocks:
                raise doc.fail(d, f"duplicate block {block!r}")
            doc.blocks[block] = []
            continue
        if key == "end":
            if block is None:
                raise doc.fail(d, "'end' without 'begin'")
            block = None
            continue
        if block is not None:
            # 블록 안에서는 줄 전체가 데이터
            doc.blocks[block].append(Directive(lineno, "", line.split(), line))
        else:
            doc.directives.append(d)
    if block is not None:
        raise ParseError(f"{source}: block {block!r} is not closed")
    return doc


def _read(path: str) -> str:
    if not os.path.exists(path):
        raise ConfigError(f"file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except UnicodeDecodeError as e:
        raise ParseError(f"{path}: not UTF-8 text at byte {e.start}") from e


def _scalar(doc: Document, d: Directive, tok: str) -> Scalar:
    try:
        return parse_scalar(tok)
    except ScalarSyntaxError as e:
        raise doc.fail(d, e.detail)


def _int(doc: Document, d: Directive, tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise doc.fail(d, f"expected an integer, got {tok!r}")


def _fraction(doc: Document, d: Directive, tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise doc.fail(d, f"expected a rational number, got {tok!r}")


def _arity(doc: Document, d: Directive, n: int, at_least: bool = False) -> None:
    if (len(d.args) < n) if at_least else (len(d.args) != n):
        raise doc.fail(d, f"'{d.key}' expects {'at least ' if at_least else ''}{n} argument(s), got {len(d.args)}")


_COMB_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*([A-Za-z_]\w*)")


def parse_combination(text: str) -> Dict[str, Fraction]:
    """'psi1+psi2-psi3', '2psi4 - 1/2*psi5' → {이름: 계수}"""
    s = "".join(text.split())
    if not s:
        raise ParseError("empty combination")
    out: Dict[str, Fraction] = {}
    pos = 0
    while pos < len(s):
        m = _COMB_TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"bad combination {text!r} at {pos}")
        if pos > 0 and not m.group(1):
            raise ParseError(f"missing '+' or '-' in {text!r} at {pos}")
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(1) == "-":
            coef = -coef
        out[m.group(3)] = out.get(m.group(3), Fraction(0)) + coef
        pos = m.end()
    return out


# ──────────────────────────────────────────────────────────────────────────────
# 지표표 문서
# ──────────────────────────────────────────────────────────────────────────────
def parse_table(text: str, source: str = "<text>", name: str = "") -> CharacterTable:
    doc = parse_document(text, source)
    group_order: Optional[int] = None
    classes: List[ConjClass] = []
    chars: List[Character] = []
    for d in doc.directives:
        if d.key == "group_order":
            _arity(doc, d, 1)
            group_order = _int(doc, d, d.args[0])
        elif d.key == "class":
            _arity(doc, d, 3)
            fields = {}
            for tok in d.args[1:]:
                k, sep, v = tok.partition("=")
                if not sep:
                    raise doc.fail(d, f"expected key=value, got {tok!r}")
                fields[k] = _int(doc, d, v)
            if set(fields) != {"order", "centralizer"}:
                raise doc.fail(d, "class needs order= and centralizer=")
            classes.append(ConjClass(d.args[0], fields["order"], fields["centralizer"]))
        elif d.key == "char":
            _arity(doc, d, 2, at_least=True)
            chars.append(Character(d.args[0], tuple(_scalar(doc, d, t) for t in d.args[1:])))
        else:
            raise doc.fail(d, f"unknown directive {d.key!r}")
    if doc.blocks:
        raise ParseError(f"{source}: table documents have no blocks")
    if group_order is None:
        raise ParseError(f"{source}: missing group_order")
    try:
        return CharacterTable(group_order, classes, chars, name=name or os.path.basename(source))
    except StructureError as e:
        raise StructureError(f"{source}: {e.detail}")


def load_table(path: str) -> CharacterTable:
    logger.debug("loading table %s", path)
    return parse_table(_read(path), source=path)


def write_table(t: CharacterTable, header: str = "") -> str:
    """parse_table 이 다시 읽을 수 있는 형식으로"""
    lines: List[str] = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.append(f"group_order {t.group_order}")
    wn = max(len(c.name) for c in t.classes)
    for c in t.classes:
        lines.append(f"class {c.name:<{wn}}  order={c.element_order}  centralizer={c.centralizer_order}")
    cells = [[render(v) for v in ch.values] for ch in t.characters]
    widths = [max(len(row[k]) for row in cells) for k in range(len(t.classes))]
    cn = max(len(ch.name) for ch in t.characters)
    for ch, row in zip(t.characters, cells):
        body = " ".join(f"{v:>{w}}" for v, w in zip(row, widths))
        lines.append(f"char {ch.name:<{cn}} {body}")
    return "\n".join(lines) + "\n"


# ──────────────────────────────────────────────────────────────────────────────
# 생성원 문서
# ──────────────────────────────────────────────────────────────────────────────
def parse_generators(text: str, source: str = "<text>"):
    """'degree n' 다음 줄마다 순환 표기 생성원 하나. (Perm 목록, 차수)"""
    from .permgroup import parse_cycles

    degree: Optional[int] = None
    gens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if line.startswith("degree"):
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"{source}:{lineno}: expected 'degree <n>'")
            degree = int(parts[1])
            continue
        if degree is None:
            raise ParseError(f"{source}:{lineno}: 'degree' must come first")
        try:
            gens.append(parse_cycles(line, degree))
        except ParseError as e:
            raise ParseError(f"{source}:{lineno}: {e.detail}")
    if degree is None:
        raise ParseError(f"{source}: missing 'degree'")
    return gens, degree


def load_generators(path: str):
    return parse_generators(_read(path), source=path)


# ──────────────────────────────────────────────────────────────────────────────
# Case 1 설정
# ──────────────────────────────────────────────────────────────────────────────
@dataclass
class AlphaEquation:
    triple: Tuple[str, str, str]
    target: sympy.Expr
    text: str

    @property
    def involves_order(self) -> bool:
        return G_SYMBOL in self.target.free_symbols


@dataclass
class Case1Config:
    source: str
    scenario: str
    table_path: str
    special: List[str]
    assumptions: List[str] = field(default_factory=list)
    basis: List[Tuple[str, Dict[str, Fraction]]] = field(default_factory=list)
    signs: Dict[int, str] = field(default_factory=dict)
    pairs: Dict[str, str] = field(default_factory=dict)
    alphas: List[AlphaEquation] = field(default_factory=list)
    order_ratio_bound: int = 1

    def resolve_class(self, ref: str) -> str:
        return self.pairs.get(ref, ref)


def _parse_target(doc: Document, d: Directive, text: str) -> sympy.Expr:
    try:
        return sympy.nsimplify(parse_expr(text.replace("|G|", "G"), local_dict={"G": G_SYMBOL}),
                               rational=True)
    except Exception as e:
        raise doc.fail(d, f"bad target expression {text!r}: {e}")


def parse_case1(text: str, source: str = "<text>") -> Case1Config:
    doc = parse_document(text, source)
    base = os.path.dirname(os.path.abspath(source)) if source != "<text>" else None
    cfg = Case1Config(source=source, scenario="", table_path="", special=[])
    for d in doc.directives:
        if d.key == "scenario":
            _arity(doc, d, 1)
            cfg.scenario = d.args[0]
        elif d.key == "table":
            _arity(doc, d, 1)
            cfg.table_path = resolve_path(d.args[0], base)
        elif d.key == "special":
            _arity(doc, d, 1, at_least=True)
            cfg.special = list(d.args)
        elif d.key == "assume":
            cfg.assumptions.append(d.rest.strip())
        elif d.key == "basis":
            _arity(doc, d, 2, at_least=True)
            try:
                cfg.basis.append((d.args[0], parse_combination("".join(d.args[1:]))))
            except ParseError as e:
                raise doc.fail(d, e.detail)
        elif d.key == "sign":
            _arity(doc, d, 2)
            m = re.fullmatch(r"mu(\d+)", d.args[0])
            if not m or int(m.group(1)) < 1:
                raise doc.fail(d, f"sign row must look like mu<i>, got {d.args[0]!r}")
            cfg.signs[int(m.group(1)) - 1] = d.args[1]
        elif d.key == "pair":
            _arity(doc, d, 2)
            cfg.pairs[d.args[0]] = d.args[1]
        elif d.key == "alpha":
            lhs, eq, rhs = d.rest.partition("=")
            names = lhs.split()
            if not eq or len(names) != 3 or not rhs.strip():
                raise doc.fail(d, "expected 'alpha a b c = <expr>'")
            cfg.alphas.append(AlphaEquation(tuple(names), _parse_target(doc, d, rhs.strip()), rhs.strip()))
        elif d.key == "order_ratio_bound":
            _arity(doc, d, 1)
            cfg.order_ratio_bound = _int(doc, d, d.args[0])
        else:
            raise doc.fail(d, f"unknown directive {d.key!r}")
    if not cfg.table_path:
        raise ConfigError(f"{source}: missing 'table'")
    if not cfg.special:
        raise ConfigError(f"{source}: missing 'special'")
    for eq in cfg.alphas:
        for ref in eq.triple:
            if ref not in cfg.pairs and not re.fullmatch(r"C\w+", ref):
                raise ConfigError(f"{source}: alpha refers to unknown pair name {ref!r}")
    return cfg


def load_case1_config(path: str) -> Case1Config:
    return parse_case1(_read(path), source=path)


# ──────────────────────────────────────────────────────────────────────────────
# Case 2 인스턴스
# ──────────────────────────────────────────────────────────────────────────────
@dataclass
class Case2Config:
    source: str
    scenario: str
    table_path: str
    prime: int
    columns: List[Tuple[str, str]]
    max_rows: int
    first_row: List[int]
    M: List[List[Scalar]]
    gram: List[List[int]]
    pcentral: Optional[str] = None
    parity: Optional[Tuple[str, str]] = None
    congruences: List[Tuple[str, str, int]] = field(default_factory=list)
    fusion: Dict[str, str] = field(default_factory=dict)
    profiles: List[Tuple[str, List[Scalar]]] = field(default_factory=list)
    degree_checks: List[Tuple[str, str]] = field(default_factory=list)
    aggregates: Dict[str, Tuple[str, List[Dict[str, Fraction]]]] = field(default_factory=dict)
    linear: Dict[str, List[str]] = field(default_factory=dict)
    forbid: List[Tuple[str, int]] = field(default_factory=list)
    combo: List[Tuple[str, str, str, Fraction]] = field(default_factory=list)
    target: Optional[int] = None
    frobenius_modulus: Optional[int] = None
    frobenius_terms: List[Fraction] = field(default_factory=list)
    order_divisor: int = 1
    squares: List[str] = field(default_factory=list)
    golden_dir: Optional[str] = None

    @property
    def labels(self) -> List[str]:
        return [lab for lab, _ in self.columns]

    def column(self, label: str) -> int:
        if label not in self.labels:
            raise ConfigError(f"{self.source}: unknown column {label!r}")
        return self.labels.index(label)


def _matrix_block(doc: Document, name: str, conv) -> List[List]:
    if name not in doc.blocks:
        raise ParseError(f"{doc.source}: missing block {name!r}")
    return [[conv(doc, d, t) for t in d.args] for d in doc.blocks[name]]


def parse_case2(text: str, source: str = "<text>") -> Case2Config:
    doc = parse_document(text, source)
    base = os.path.dirname(os.path.abspath(source)) if source != "<text>" else None
    raw: Dict[str, object] = {"scenario": "", "table_path": "", "prime": 0, "columns": [],
                              "max_rows": 0, "first_row": []}
    rest: List[Directive] = []
    for d in doc.directives:
        if d.key == "scenario":
            _arity(doc, d, 1)
            raw["scenario"] = d.args[0]
        elif d.key == "table":
            _arity(doc, d, 1)
            raw["table_path"] = resolve_path(d.args[0], base)
        elif d.key == "prime":
            _arity(doc, d, 1)
            raw["prime"] = _int(doc, d, d.args[0])
        elif d.key == "columns":
            _arity(doc, d, 1, at_least=True)
            cols = []
            for tok in d.args:
                lab, sep, cls = tok.partition("=")
                if not sep or not lab or not cls:
                    raise doc.fail(d, f"expected label=class, got {tok!r}")
                cols.append((lab, cls))
            raw["columns"] = cols
        elif d.key == "max_rows":
            _arity(doc, d, 1)
            raw["max_rows"] = _int(doc, d, d.args[0])
        elif d.key == "first_row":
            raw["first_row"] = [_int(doc, d, t) for t in d.args]
        else:
            rest.append(d)

    cfg = Case2Config(source=source, M=_matrix_block(doc, "M", _scalar),
                      gram=_matrix_block(doc, "gram", _int), **raw)
    n = len(cfg.columns)
    if n == 0:
        raise ConfigError(f"{source}: missing 'columns'")
    if len(cfg.M) != n or any(len(r) != n for r in cfg.M):
        raise ConfigError(f"{source}: M must be {n}x{n}")
    if len(cfg.gram) != n or any(len(r) != n for r in cfg.gram):
        raise ConfigError(f"{source}: gram must be {n}x{n}")
    if len(cfg.first_row) != n:
        raise ConfigError(f"{source}: first_row needs {n} entries")
    if cfg.max_rows < 1:
        raise ConfigError(f"{source}: max_rows must be positive")

    for d in rest:
        if d.key == "pcentral":
            _arity(doc, d, 1)
            cfg.column(d.args[0])
            cfg.pcentral = d.args[0]
        elif d.key == "parity":
            _arity(doc, d, 2)
            for lab in d.args:
                cfg.column(lab)
            cfg.parity = (d.args[0], d.args[1])
        elif d.key == "congruence":
            _arity(doc, d, 3)
            for lab in d.args[:2]:
                cfg.column(lab)
            cfg.congruences.append((d.args[0], d.args[1], _int(doc, d, d.args[2])))
        elif d.key == "fuse":
            _arity(doc, d, 2)
            target = d.args[1]
            if target not in ("degree", "?"):
                cfg.column(target)
            cfg.fusion[d.args[0]] = target
        elif d.key == "profile":
            _arity(doc, d, n + 1)
            cfg.profiles.append((d.args[0], [_scalar(doc, d, t) for t in d.args[1:]]))
        elif d.key == "degree_check":
            _arity(doc, d, 2)
            cfg.degree_checks.append((d.args[0], d.args[1]))
        elif d.key == "aggregate":
            _arity(doc, d, 3, at_least=True)
            try:
                combos = [parse_combination(t) for t in d.args[2:]]
            except ParseError as e:
                raise doc.fail(d, e.detail)
            cfg.aggregates[d.args[0]] = (d.args[1], combos)
        elif d.key == "linear":
            _arity(doc, d, 2, at_least=True)
            for lab in d.args[1:]:
                cfg.column(lab)
            cfg.linear[d.args[0]] = list(d.args[1:])
        elif d.key == "forbid":
            _arity(doc, d, 2)
            cfg.forbid.append((d.args[0], _int(doc, d, d.args[1])))
        elif d.key == "combo":
            _arity(doc, d, 4)
            for lab in d.args[:3]:
                cfg.column(lab)
            cfg.combo.append((d.args[0], d.args[1], d.args[2], _fraction(doc, d, d.args[3])))
        elif d.key == "target":
            _arity(doc, d, 1)
            cfg.target = _int(doc, d, d.args[0])
        elif d.key == "frobenius":
            _arity(doc, d, 2, at_least=True)
            cfg.frobenius_modulus = _int(doc, d, d.args[0])
            cfg.frobenius_terms = [_fraction(doc, d, t) for t in d.args[1:]]
        elif d.key == "order_divisor":
            _arity(doc, d, 1)
            cfg.order_divisor = _int(doc, d, d.args[0])
        elif d.key == "squares":
            _arity(doc, d, 1, at_least=True)
            cfg.squares = list(d.args)
        elif d.key == "golden":
            _arity(doc, d, 1)
            cfg.golden_dir = resolve_path(d.args[0], base)
        else:
            raise doc.fail(d, f"unknown directive {d.key!r}")

    profile_names = {p for p, _ in cfg.profiles}
    referenced = [r for r, _ in cfg.degree_checks] + list(cfg.aggregates) + list(cfg.linear) + \
        [r for r, _ in cfg.forbid] + cfg.squares
    missing = sorted(set(referenced) - profile_names)
    if missing:
        raise ConfigError(f"{source}: rows without a profile: {', '.join(missing)}")
    return cfg


def load_case2_instance(path: str) -> Case2Config:
    return parse_case2(_read(path), source=path)


# ──────────────────────────────────────────────────────────────────────────────
# K 행렬 파일 (golden)
# ──────────────────────────────────────────────────────────────────────────────
def parse_k_matrix(text: str, source: str = "<text>") -> List[List[int]]:
    rows: List[List[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        try:
            rows.append([int(t) for t in line.split()])
        except ValueError:
            raise ParseError(f"{source}:{lineno}: K rows hold integers only")
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ParseError(f"{source}: K matrix is empty or ragged")
    return rows


def load_k_matrix(path: str) -> List[List[int]]:
    return parse_k_matrix(_read(path), source=path)


def load_golden_dir(path: str) -> List[Tuple[str, List[List[int]]]]:
    if not os.path.isdir(path):
        raise ConfigError(f"golden directory not found: {path}")
    names = sorted(f for f in os.listdir(path) if f.endswith(".txt"))
    return [(os.path.splitext(f)[0], load_k_matrix(os.path.join(path, f))) for f in names]
