# src/chartable.py
# -*- coding: utf-8 -*-
"""
지표표(character table) 모델
- ConjClass / Character / CharacterTable / ClassFunction
- 내적, 직교성 검증, 구조상수(α, a), Frobenius 해 개수, mod p 차수 합동
- 부분 지표표(PartialColumnSet): 차수를 모르는 G 쪽 행들
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import NonIntegerValue, StructureError, TableMismatch
from .exact import ONE, ZERO, Scalar, render

logger = logging.getLogger(__name__)

ClassRef = Union[int, str]


@dataclass(frozen=True)
class ConjClass:
    name: str
    element_order: int
    centralizer_order: int


@dataclass(frozen=True)
class Character:
    name: str
    values: Tuple[Scalar, ...]

    @property
    def degree(self) -> Scalar:
        return self.values[0]


class CharacterTable:
    """완전한 지표표. 같은 데이터라도 객체가 다르면 다른 표로 본다"""

    def __init__(self, group_order: int, classes: Sequence[ConjClass],
                 characters: Sequence[Character], name: str = ""):
        self.group_order = group_order
        self.classes: Tuple[ConjClass, ...] = tuple(classes)
        self.characters: Tuple[Character, ...] = tuple(characters)
        self.name = name
        self._index = {c.name: k for k, c in enumerate(self.classes)}
        self._chars = {ch.name: ch for ch in self.characters}
        self._check()

    def _check(self) -> None:
        if self.group_order <= 0:
            raise StructureError(f"group order must be positive, got {self.group_order}")
        if not self.classes:
            raise StructureError("table has no classes")
        if len(self._index) != len(self.classes):
            raise StructureError("duplicate class names")
        if len(self._chars) != len(self.characters):
            raise StructureError("duplicate character names")
        for c in self.classes:
            if c.centralizer_order <= 0 or self.group_order % c.centralizer_order:
                raise StructureError(
                    f"centralizer order {c.centralizer_order} of {c.name} does not divide {self.group_order}")
        if sum(self.class_size(k) for k in range(len(self.classes))) != self.group_order:
            raise StructureError("class sizes do not add up to the group order")
        if self.classes[0].element_order != 1 or self.classes[0].centralizer_order != self.group_order:
            raise StructureError("first class must be the identity")
        if len(self.characters) != len(self.classes):
            raise StructureError(
                f"{len(self.characters)} characters for {len(self.classes)} classes")
        for ch in self.characters:
            if len(ch.values) != len(self.classes):
                raise StructureError(f"{ch.name} has {len(ch.values)} values, expected {len(self.classes)}")
            # 복소켤레를 항등으로 쓰려면 모든 값이 Q(√3) ⊂ ℝ 안에 있어야 한다
            outside = [v for v in ch.values if not isinstance(v, Scalar)]
            if outside:
                raise StructureError(f"{ch.name} has a value outside Q(√3): {outside[0]!r}")
            if not ch.degree.is_rational_integer() or ch.degree.as_int() <= 0:
                raise StructureError(f"{ch.name} degree {render(ch.degree)} is not a positive integer")

    # ------- 조회 -------
    def __len__(self) -> int:
        return len(self.classes)

    def class_index(self, ref: ClassRef) -> int:
        if isinstance(ref, int):
            if not 0 <= ref < len(self.classes):
                raise TableMismatch(f"class index {ref} out of range")
            return ref
        if ref not in self._index:
            raise TableMismatch(f"unknown class {ref!r}")
        return self._index[ref]

    def class_size(self, ref: ClassRef) -> int:
        k = self.class_index(ref)
        return self.group_order // self.classes[k].centralizer_order

    def centralizer(self, ref: ClassRef) -> int:
        return self.classes[self.class_index(ref)].centralizer_order

    def character(self, name: str) -> Character:
        if name not in self._chars:
            raise TableMismatch(f"unknown character {name!r}")
        return self._chars[name]

    def class_names(self) -> List[str]:
        return [c.name for c in self.classes]

    def __repr__(self) -> str:
        return f"CharacterTable({self.name or '?'}, order={self.group_order}, classes={len(self.classes)})"


class ClassFunction:
    def __init__(self, table: CharacterTable, values: Sequence[Scalar]):
        if len(values) != len(table.classes):
            raise TableMismatch(f"{len(values)} values for {len(table.classes)} classes")
        self.table = table
        self.values: Tuple[Scalar, ...] = tuple(Scalar.of(v) for v in values)

    @classmethod
    def of_character(cls, table: CharacterTable, name: str) -> "ClassFunction":
        return cls(table, table.character(name).values)

    @classmethod
    def combination(cls, table: CharacterTable, coeffs: Dict[str, Scalar]) -> "ClassFunction":
        out = cls(table, [ZERO] * len(table))
        for name, c in coeffs.items():
            out = out + cls.of_character(table, name) * c
        return out

    def _same(self, other: "ClassFunction") -> None:
        if other.table is not self.table:
            raise TableMismatch("class functions live on different tables")

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        self._same(other)
        return ClassFunction(self.table, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        self._same(other)
        return ClassFunction(self.table, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self) -> "ClassFunction":
        return ClassFunction(self.table, [-a for a in self.values])

    def __mul__(self, c) -> "ClassFunction":
        return ClassFunction(self.table, [a * c for a in self.values])

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return other.table is self.table and other.values == self.values

    __hash__ = None

    def value(self, ref: ClassRef) -> Scalar:
        return self.values[self.table.class_index(ref)]

    def vanishes_off(self, class_indices: Sequence[int]) -> bool:
        keep = set(class_indices)
        return all(not v for k, v in enumerate(self.values) if k not in keep)


# ──────────────────────────────────────────────────────────────────────────────
# 내적과 직교성
# ──────────────────────────────────────────────────────────────────────────────
def inner_product(f: ClassFunction, g: ClassFunction) -> Scalar:
    """Σ_k f(x_k)·conj g(x_k) / |C(x_k)|"""
    f._same(g)
    t = f.table
    total = ZERO
    for k, (a, b) in enumerate(zip(f.values, g.values)):
        if a and b:
            total = total + a * b.conj() * Fraction(1, t.classes[k].centralizer_order)
    return total


@dataclass
class ValidationReport:
    first: List[Tuple[str, str, Scalar]] = field(default_factory=list)
    second: List[Tuple[str, str, Scalar]] = field(default_factory=list)
    degree_sum: int = 0
    group_order: int = 0

    @property
    def ok(self) -> bool:
        return not self.first and not self.second and self.degree_sum == self.group_order

    def lines(self) -> List[str]:
        out = [f"sum of squared degrees = {self.degree_sum} (group order {self.group_order})"]
        for a, b, v in self.first:
            out.append(f"row pair ({a}, {b}): inner product {render(v)}")
        for a, b, v in self.second:
            out.append(f"column pair ({a}, {b}): sum {render(v)}")
        return out


def validate_orthogonality(t: CharacterTable) -> ValidationReport:
    rep = ValidationReport(group_order=t.group_order)
    funcs = [ClassFunction(t, ch.values) for ch in t.characters]
    for i, j in itertools.combinations_with_replacement(range(len(funcs)), 2):
        v = inner_product(funcs[i], funcs[j])
        if v != (1 if i == j else 0):
            rep.first.append((t.characters[i].name, t.characters[j].name, v))
    for k, l in itertools.combinations_with_replacement(range(len(t)), 2):
        s = sum((ch.values[k] * ch.values[l].conj() for ch in t.characters), ZERO)
        if s != (t.classes[k].centralizer_order if k == l else 0):
            rep.second.append((t.classes[k].name, t.classes[l].name, s))
    deg_sum = sum((ch.degree * ch.degree for ch in t.characters), ZERO)
    rep.degree_sum = deg_sum.as_int() if deg_sum.is_rational_integer() else -1
    if not rep.ok:
        logger.warning("orthogonality check failed: %d row pairs, %d column pairs",
                       len(rep.first), len(rep.second))
    return rep


# ──────────────────────────────────────────────────────────────────────────────
# 구조상수
# ──────────────────────────────────────────────────────────────────────────────
def structure_constant_alpha(t: CharacterTable, x: ClassRef, y: ClassRef, z: ClassRef) -> Scalar:
    i, j, k = t.class_index(x), t.class_index(y), t.class_index(z)
    total = ZERO
    for ch in t.characters:
        a, b, c = ch.values[i], ch.values[j], ch.values[k]
        if a and b and c:
            total = total + a * b * c.conj() / ch.degree
    return total


def structure_constant_a(t: CharacterTable, x: ClassRef, y: ClassRef, z: ClassRef) -> Fraction:
    """x 류 × y 류 에서 ab = z 인 쌍의 개수"""
    alpha = structure_constant_alpha(t, x, y, z)
    value = alpha * Fraction(t.group_order, t.centralizer(x) * t.centralizer(y))
    if not value.is_rational():
        raise NonIntegerValue(f"a({x},{y},{z}) = {render(value)} is not rational")
    return value.as_fraction()


def frobenius_count(t: CharacterTable, m: int) -> int:
    """|{x : x^m = 1}| = 원소 위수가 m 을 나누는 류 크기의 합"""
    return sum(t.class_size(k) for k, c in enumerate(t.classes) if m % c.element_order == 0)


# ──────────────────────────────────────────────────────────────────────────────
# mod p 합동
# ──────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class Congruence:
    residue: int
    modulus: int
    subject: str = "d"

    def __str__(self) -> str:
        return f"{self.subject} ≡ {self.residue} (mod {self.modulus})"

    def holds(self, value: int) -> bool:
        return (value - self.residue) % self.modulus == 0


def mod_p_degree_congruence(values: Sequence[Scalar], p: int, class_ref: int,
                            subject: str = "d") -> Congruence:
    """p-원소 류에서 χ(g) ≡ χ(1) (mod p)"""
    v = Scalar.of(values[class_ref])
    if not v.is_rational_integer():
        raise NonIntegerValue(f"value {render(v)} at class {class_ref} is not a rational integer")
    return Congruence(v.as_int() % p, p, subject)


def solve_linear_congruence(a: int, b: int, n: int) -> Optional[Tuple[int, int]]:
    """a·x + b ≡ 0 (mod n) 의 해를 (잔여, 법) 으로. 해가 없으면 None"""
    g = gcd(a, n)
    if b % g:
        return None
    n2 = n // g
    if n2 == 1:
        return 0, 1
    x = (-(b // g) * pow(a // g, -1, n2)) % n2
    return x, n2


# ──────────────────────────────────────────────────────────────────────────────
# 표 정렬 (류/지표 순서가 다른 두 표 비교)
# ──────────────────────────────────────────────────────────────────────────────
def align_tables(a: CharacterTable, b: CharacterTable, max_tries: int = 100_000) -> Optional[List[int]]:
    """a 의 류 k 를 b 의 류 perm[k] 로 보내서 지표 행 멀티셋이 같아지는 열 전단사"""
    if a.group_order != b.group_order or len(a) != len(b):
        return None
    key = lambda c: (c.element_order, c.centralizer_order)
    groups_a: Dict[Tuple[int, int], List[int]] = {}
    groups_b: Dict[Tuple[int, int], List[int]] = {}
    for k, c in enumerate(a.classes):
        groups_a.setdefault(key(c), []).append(k)
    for k, c in enumerate(b.classes):
        groups_b.setdefault(key(c), []).append(k)
    if {g: len(v) for g, v in groups_a.items()} != {g: len(v) for g, v in groups_b.items()}:
        return None
    target = sorted(tuple((x.rat, x.r3) for x in ch.values) for ch in b.characters)
    keys = sorted(groups_a)
    choices = [list(itertools.permutations(groups_b[g])) for g in keys]
    for n_try, combo in enumerate(itertools.product(*choices)):
        if n_try >= max_tries:
            logger.warning("align_tables gave up after %d column bijections", max_tries)
            return None
        perm = [0] * len(a)
        for g, images in zip(keys, combo):
            for src, dst in zip(groups_a[g], images):
                perm[src] = dst
        # b 의 열 순서로 a 의 값을 재배열
        inv = [0] * len(a)
        for src, dst in enumerate(perm):
            inv[dst] = src
        rows = sorted(tuple((ch.values[inv[c]].rat, ch.values[inv[c]].r3) for c in range(len(b)))
                      for ch in a.characters)
        if rows == target:
            return perm
    return None


# ──────────────────────────────────────────────────────────────────────────────
# 부분 지표표 (G 쪽, 차수 미지)
# ──────────────────────────────────────────────────────────────────────────────
@dataclass
class PartialRow:
    label: str
    values: Tuple[Scalar, ...]
    degree_symbol: Optional[str] = None
    known_degree: Optional[int] = None
    sign_symbol: Optional[str] = None
    sign_coeff: int = 1
    folded: bool = False


@dataclass
class PartialColumnSet:
    table_of: str
    class_labels: Tuple[str, ...]
    centralizers: Tuple[int, ...]
    element_orders: Tuple[int, ...]
    rows: List[PartialRow] = field(default_factory=list)
    # sympy 식, 각각 "= 0" 으로 읽는다
    degree_relations: List = field(default_factory=list)

    def __post_init__(self):
        for r in self.rows:
            if len(r.values) != len(self.class_labels):
                raise StructureError(f"row {r.label} has {len(r.values)} values for {len(self.class_labels)} classes")

    @property
    def unknown_degrees(self) -> List[str]:
        return [r.degree_symbol for r in self.rows if r.degree_symbol]

    def column(self, label: str) -> int:
        if label not in self.class_labels:
            raise TableMismatch(f"no column {label!r} in partial table")
        return self.class_labels.index(label)

    def row(self, label: str) -> PartialRow:
        for r in self.rows:
            if r.label == label:
                return r
        raise TableMismatch(f"no row {label!r} in partial table")
