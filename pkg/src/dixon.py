# src/dixon.py
# -*- coding: utf-8 -*-
"""
Burnside-Dixon 지표표 계산
- 류 곱셈 행렬 M_r[i][t] = #{g ∈ C_r : g⁻¹·x_t ∈ C_i} 의 공통 고유공간을 GF(p) 에서 분해
- p 는 2⌈√|G|⌉ 이상이고 p ≡ 1 (mod 지수) 인 가장 작은 소수
- 고윳값 중복도로 값을 복원하고 Q(√3) 안에 있는지 확인 (밖이면 ValueOutsideRing)
"""
import logging
from fractions import Fraction
from math import isqrt, lcm
from typing import Dict, List, Tuple

from sympy import QQ, Poly, Rational, Symbol, cyclotomic_poly, isprime, nextprime, primitive_root, sqrt_mod
from sympy.polys.domainmatrix import DomainMatrix
from sympy.polys.domains import GF

from .chartable import Character, CharacterTable, ConjClass
from .config import MAX_DIXON_CLASSES
from .errors import CapExceeded, SingularMatrix, ValueOutsideRing
from .exact import Scalar
from .permgroup import PermGroup, Perm, inverse_class, power_class

logger = logging.getLogger(__name__)

_x = Symbol("x")


def dixon_prime(order: int, exponent: int) -> int:
    start = 2 * isqrt(order - 1) + 2 if order > 1 else 2
    p = start if isprime(start) else nextprime(start)
    while (p - 1) % exponent:
        p = nextprime(p)
    return p


def _class_matrix(g: PermGroup, r: int) -> List[List[int]]:
    n = len(g.classes)
    m = [[0] * n for _ in range(n)]
    members = g._class_members[r]
    for t, c in enumerate(g.classes):
        for e in members:
            h = Perm(e).inverse() * c.representative
            m[g.class_of[h.images]][t] += 1
    return m


def _eigenspaces(A: DomainMatrix) -> List[DomainMatrix]:
    """A 의 왼쪽 고유공간들 (행벡터 기저, rref)"""
    At = A.transpose()
    Fp = At.domain
    spaces = []
    for z in Poly(At.charpoly(), _x, domain=Fp).ground_roots():
        B = At - At.diag([Fp(z)] * At.shape[0], Fp)
        basis, _ = B.nullspace().rref()
        spaces.append(basis)
    return spaces


def _common_eigenspaces(mats: List[List[List[int]]], Fp) -> List[List[int]]:
    n = len(mats)
    spaces = _eigenspaces(DomainMatrix.from_list(mats[0], Fp))
    for M in mats[1:]:
        if len(spaces) == n:
            break
        dM = DomainMatrix.from_list(M, Fp)
        refined = []
        for S in spaces:
            if S.shape[0] <= 1:
                refined.append(S)
                continue
            _, pivots = S.rref()
            X = S * dM.extract(range(S.shape[1]), pivots)
            refined.extend(sub * S for sub in _eigenspaces(X))
        spaces = refined
    if len(spaces) != n or any(S.shape[0] != 1 for S in spaces):
        raise SingularMatrix(f"class matrices split into {len(spaces)} spaces, expected {n}")
    p = Fp.mod
    return [[int(v) % p for v in S.to_list()[0]] for S in spaces]


def _normalize(g: PermGroup, rows: List[List[int]], p: int) -> List[List[int]]:
    """행을 χ 값 (mod p) 로: 첫 성분을 1 로 맞춘 뒤 χ(1)² = |G| / Σ|C_k| v_k v_{k⁻¹}"""
    n = len(g.classes)
    inv = [inverse_class(g, k) for k in range(n)]
    sizes = [c.size for c in g.classes]
    out = []
    for row in rows:
        s = pow(row[0], -1, p)
        v = [x * s % p for x in row]
        dot = sum(sizes[k] * v[k] * v[inv[k]] for k in range(n)) % p
        sq = g.order * pow(dot, -1, p) % p
        root = sqrt_mod(sq, p)
        if root is None:
            raise SingularMatrix(f"degree square {sq} has no root mod {p}")
        d = min(root, p - root)
        out.append([x * d % p for x in v])
    return out


def _root3_poly(n: int, phi: Poly) -> Poly:
    # √3 = ζ₁₂ + ζ₁₂⁻¹
    return Poly(_x ** (n // 12) + _x ** (11 * n // 12), _x, domain=QQ).rem(phi)


def _lift_value(g: PermGroup, row: List[int], k: int, p: int, cache: Dict[int, Tuple[Poly, Poly]]) -> Scalar:
    o = g.classes[k].element_order
    if o == 1:
        v = row[k]
        return Scalar.of(v if v <= p // 2 else v - p)
    z = pow(primitive_root(p), (p - 1) // o, p)
    zinv = pow(z, -1, p)
    vals = [row[power_class(g, k, l)] for l in range(o)]
    inv_o = pow(o, -1, p)
    mult = []
    for e in range(o):
        s = sum(vals[l] * pow(zinv, e * l, p) for l in range(o)) * inv_o % p
        mult.append(s if s <= p // 2 else s - p)
    n = lcm(o, 12)
    if n not in cache:
        phi = Poly(cyclotomic_poly(n, _x), _x, domain=QQ)
        cache[n] = (phi, _root3_poly(n, phi))
    phi, S = cache[n]
    R = Poly(sum(m * _x ** (e * n // o) for e, m in enumerate(mult) if m), _x, domain=QQ).rem(phi)
    if R.degree() <= 0:
        return Scalar(_frac(R.LC()) if not R.is_zero else 0)
    top = S.degree()
    b = R.coeff_monomial(_x ** top) / S.coeff_monomial(_x ** top)
    D = R - S * b
    if D.degree() > 0:
        raise ValueOutsideRing(f"value of a character at class {g.classes[k].name} is not in Q(√3): {R.as_expr()}")
    a = D.LC() if not D.is_zero else 0
    return Scalar(_frac(a), _frac(b))


def _frac(q) -> Fraction:
    q = Rational(q)
    return Fraction(int(q.p), int(q.q))


def dixon_character_table(g: PermGroup, max_classes: int = MAX_DIXON_CLASSES, name: str = "dixon") -> CharacterTable:
    n = len(g.classes)
    if n > max_classes:
        raise CapExceeded(f"{n} classes exceed the Dixon limit {max_classes}")
    classes = [ConjClass(c.name, c.element_order, c.centralizer_order) for c in g.classes]
    if n == 1:
        return CharacterTable(g.order, classes, [Character("psi1", (Scalar.of(1),))], name=name)

    exponent = g.exponent()
    p = dixon_prime(g.order, exponent)
    Fp = GF(p)
    logger.info("dixon: %d classes, exponent %d, prime %d", n, exponent, p)
    mats = [_class_matrix(g, r) for r in range(n)]
    rows = _normalize(g, _common_eigenspaces(mats, Fp), p)

    cache: Dict[int, Tuple[Poly, Poly]] = {}
    lifted = [tuple(_lift_value(g, row, k, p, cache) for k in range(n)) for row in rows]

    def key(vals):
        trivial = all(v == 1 for v in vals)
        return (vals[0].as_int(), not trivial, [(v.rat, v.r3) for v in vals])

    lifted.sort(key=key)
    chars = [Character(f"psi{i + 1}", vals) for i, vals in enumerate(lifted)]
    return CharacterTable(g.order, classes, chars, name=name)
