# src/permgroup.py
# -*- coding: utf-8 -*-
"""
작은 차수 순열군 오라클
- 생성원으로부터 원소 전체를 만든다 (위수 상한 PERM_CAP)
- 켤레류 분할, 원소 위수, 중심화군 위수
- 구조상수 a_xyz 를 원소를 직접 세어서 구한다
- 내부 점 번호는 0 부터, 문서/출력은 1 부터
"""
import logging
import re
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Dict, List, Sequence, Tuple

from sympy.combinatorics import Permutation, PermutationGroup

from .config import PERM_CAP
from .errors import CapExceeded, DimensionMismatch, ParseError

logger = logging.getLogger(__name__)

Images = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class Perm:
    images: Images

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ParseError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(tuple(range(degree)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Perm") -> "Perm":
        # 왼쪽부터 적용 (sympy 와 같은 규약)
        return Perm(tuple(other.images[i] for i in self.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Perm.identity(self.degree), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def order(self) -> int:
        return int(Permutation(list(self.images)).order())

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> str:
        seen = set()
        parts = []
        for start in range(len(self.images)):
            if start in seen or self.images[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            parts.append("(" + ",".join(str(c + 1) for c in cyc) + ")")
        return "".join(parts) or "()"

    def __str__(self) -> str:
        return self.cycles()


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Perm:
    """'(1,4)(2,5,3,6)' → Perm. '()' 는 항등원"""
    s = "".join(text.split())
    if not s or _CYCLE.sub("", s):
        raise ParseError(f"bad cycle notation {text!r}")
    images = list(range(degree))
    seen = set()
    for body in _CYCLE.findall(s):
        if not body:
            continue
        try:
            pts = [int(t) for t in body.split(",")]
        except ValueError:
            raise ParseError(f"bad point in cycle ({body})")
        for p in pts:
            if not 1 <= p <= degree:
                raise ParseError(f"point {p} outside 1..{degree}")
            if p in seen:
                raise ParseError(f"point {p} repeated in {text!r}")
            seen.add(p)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a - 1] = b - 1
    return Perm(tuple(images))


@dataclass(frozen=True)
class PermClass:
    name: str
    representative: Perm
    size: int
    element_order: int
    centralizer_order: int


class PermGroup:
    def __init__(self, degree: int, generators: Sequence[Perm], elements: Sequence[Images]):
        self.degree = degree
        self.generators: Tuple[Perm, ...] = tuple(generators)
        self.elements: Tuple[Images, ...] = tuple(sorted(elements))
        self._sympy = _as_sympy(degree, self.generators)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order})"

    @cached_property
    def classes(self) -> List[PermClass]:
        return _classes(self)

    @cached_property
    def class_of(self) -> Dict[Images, int]:
        """원소 → 정규 순서 류 번호"""
        lookup: Dict[Images, int] = {}
        for k, members in enumerate(self._class_members):
            for e in members:
                lookup[e] = k
        return lookup

    @cached_property
    def _class_members(self) -> List[List[Images]]:
        raw = [sorted(tuple(p.array_form) for p in cc) for cc in self._sympy.conjugacy_classes()]
        raw.sort(key=lambda m: (Perm(m[0]).order(), len(m), m[0]))
        return raw

    def class_index(self, ref) -> int:
        if isinstance(ref, int):
            if not 0 <= ref < len(self.classes):
                raise DimensionMismatch(f"class index {ref} out of range")
            return ref
        for k, c in enumerate(self.classes):
            if c.name == ref:
                return k
        raise DimensionMismatch(f"unknown class {ref!r}")

    def exponent(self) -> int:
        e = 1
        for c in self.classes:
            e = e * c.element_order // gcd(e, c.element_order)
        return e


def _as_sympy(degree: int, gens: Sequence[Perm]) -> PermutationGroup:
    if not gens:
        return PermutationGroup([Permutation(degree - 1)])
    return PermutationGroup([Permutation(list(g.images)) for g in gens])


def _classes(g: PermGroup) -> List[PermClass]:
    out = []
    for k, members in enumerate(g._class_members):
        rep = Perm(members[0])
        out.append(PermClass(f"C{k + 1}", rep, len(members), int(rep.order()), int(g.order) // len(members)))
    return out


# ──────────────────────────────────────────────────────────────────────────────
# 생성
# ──────────────────────────────────────────────────────────────────────────────
def group_from_generators(gens: Sequence[Perm], degree: int = 0, cap: int = PERM_CAP) -> PermGroup:
    if gens:
        degree = degree or gens[0].degree
        if any(p.degree != degree for p in gens):
            raise DimensionMismatch("generators act on different numbers of points")
    if degree < 1:
        raise DimensionMismatch("degree must be positive")
    sg = _as_sympy(degree, gens)
    order = int(sg.order())
    if order > cap:
        raise CapExceeded(f"group order {order} exceeds the cap {cap}")
    elements = [tuple(p.array_form) for p in sg.generate()]
    if len(elements) != order:
        raise CapExceeded(f"closure produced {len(elements)} elements, expected {order}")
    logger.info("permutation group of degree %d and order %d", degree, order)
    return PermGroup(degree, gens, elements)


def conjugacy_classes(g: PermGroup) -> List[PermClass]:
    """(원소 위수, 중심화군 위수 내림차순, 사전식 최소 대표원) 순서"""
    return g.classes


# ──────────────────────────────────────────────────────────────────────────────
# 원소 세기
# ──────────────────────────────────────────────────────────────────────────────
def structure_constant_bruteforce(g: PermGroup, x, y, z) -> int:
    """a ∈ x, b = a⁻¹·z 가 y 에 있는 경우의 수"""
    i, j, k = g.class_index(x), g.class_index(y), g.class_index(z)
    zr = g.classes[k].representative
    count = 0
    for a in g._class_members[i]:
        b = Perm(a).inverse() * zr
        if g.class_of[b.images] == j:
            count += 1
    return count


def all_structure_constants(g: PermGroup) -> List[List[List[int]]]:
    """N[x][y][z] 전체를 한 번에: z 대표원마다 G 를 한 바퀴"""
    n = len(g.classes)
    N = [[[0] * n for _ in range(n)] for _ in range(n)]
    for k, c in enumerate(g.classes):
        zr = c.representative
        for a in g.elements:
            b = Perm(a).inverse() * zr
            N[g.class_of[a]][g.class_of[b.images]][k] += 1
    return N


def count_power_solutions(g: PermGroup, m: int) -> int:
    """|{x ∈ G : x^m = 1}| 직접 계수"""
    return sum(1 for e in g.elements if (Perm(e) ** m).is_identity())


def power_class(g: PermGroup, k: int, e: int) -> int:
    """류 k 대표원의 e 제곱이 속한 류"""
    return g.class_of[(g.classes[k].representative ** e).images]


def inverse_class(g: PermGroup, k: int) -> int:
    return g.class_of[g.classes[k].representative.inverse().images]
