# src/exact.py
# -*- coding: utf-8 -*-
"""
Q(√3) 위의 정확한 스칼라
- Scalar(rat, r3) 는 rat + r3·√3, 두 성분 모두 Fraction
- 부동소수점 경로 없음, 모든 연산은 닫혀 있고 정확
- 텍스트 문법: -4, 7/81, r3, 1+2r3, -r3/12, (3+r3)/12, -(3-r3)/12
"""
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Union

import sympy

from .errors import ScalarSyntaxError, ZeroInverse

Number = Union[int, Fraction, "Scalar"]


@dataclass(frozen=True)
class Scalar:
    rat: Fraction = Fraction(0)
    r3: Fraction = Fraction(0)

    def __post_init__(self):
        # int 로 들어와도 Fraction 으로 고정 (해시/동등성 일관)
        object.__setattr__(self, "rat", Fraction(self.rat))
        object.__setattr__(self, "r3", Fraction(self.r3))

    # ------- 생성 -------
    @classmethod
    def of(cls, x: Number) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(Fraction(x))
        raise TypeError(f"cannot make a Scalar from {type(x).__name__}")

    @classmethod
    def root3(cls) -> "Scalar":
        return cls(Fraction(0), Fraction(1))

    # ------- 산술 -------
    def __add__(self, other: Number) -> "Scalar":
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        o = Scalar.of(other)
        return Scalar(self.rat + o.rat, self.r3 + o.r3)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.rat, -self.r3)

    def __sub__(self, other: Number) -> "Scalar":
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return self + (-Scalar.of(other))

    def __rsub__(self, other: Number) -> "Scalar":
        return Scalar.of(other) - self

    def __mul__(self, other: Number) -> "Scalar":
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        o = Scalar.of(other)
        return Scalar(self.rat * o.rat + 3 * self.r3 * o.r3,
                      self.rat * o.r3 + self.r3 * o.rat)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.rat * self.rat - 3 * self.r3 * self.r3

    def galois(self) -> "Scalar":
        """√3 → -√3"""
        return Scalar(self.rat, -self.r3)

    def conj(self) -> "Scalar":
        """복소켤레. Q(√3) 는 실수체라서 항등 (CharacterTable 이 값의 타입을 확인)"""
        return self

    def inverse(self) -> "Scalar":
        n = self.norm()
        if n == 0:
            raise ZeroInverse(f"no inverse for {render(self)}")
        g = self.galois()
        return Scalar(g.rat / n, g.r3 / n)

    def __truediv__(self, other: Number) -> "Scalar":
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return self * Scalar.of(other).inverse()

    def __rtruediv__(self, other: Number) -> "Scalar":
        return Scalar.of(other) * self.inverse()

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Scalar(Fraction(1)), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # ------- 비교 -------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.r3 == 0 and self.rat == other
        if isinstance(other, Scalar):
            return self.rat == other.rat and self.r3 == other.r3
        return NotImplemented

    def __hash__(self) -> int:
        if self.r3 == 0:
            return hash(self.rat)
        return hash((self.rat, self.r3))

    def __bool__(self) -> bool:
        return self.rat != 0 or self.r3 != 0

    def sign(self) -> int:
        """a + b√3 의 정확한 부호"""
        a, b = self.rat, self.r3
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        return sa if a * a > 3 * b * b else sb

    def __lt__(self, other: Number) -> bool:
        return (self - Scalar.of(other)).sign() < 0

    def __le__(self, other: Number) -> bool:
        return (self - Scalar.of(other)).sign() <= 0

    def __gt__(self, other: Number) -> bool:
        return (self - Scalar.of(other)).sign() > 0

    def __ge__(self, other: Number) -> bool:
        return (self - Scalar.of(other)).sign() >= 0

    # ------- 판정/변환 -------
    def is_rational(self) -> bool:
        return self.r3 == 0

    def is_rational_integer(self) -> bool:
        return self.r3 == 0 and self.rat.denominator == 1

    def as_fraction(self) -> Fraction:
        if self.r3 != 0:
            raise ValueError(f"{render(self)} is not rational")
        return self.rat

    def as_int(self) -> int:
        if not self.is_rational_integer():
            raise ValueError(f"{render(self)} is not a rational integer")
        return int(self.rat)

    def to_sympy(self) -> sympy.Expr:
        return sympy.Rational(self.rat.numerator, self.rat.denominator) + \
            sympy.Rational(self.r3.numerator, self.r3.denominator) * sympy.sqrt(3)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Scalar({render(self)})"


ZERO = Scalar(Fraction(0))
ONE = Scalar(Fraction(1))


def scalar(x: Union[Number, str]) -> Scalar:
    if isinstance(x, str):
        return parse_scalar(x)
    return Scalar.of(x)


# ──────────────────────────────────────────────────────────────────────────────
# 렌더링
# ──────────────────────────────────────────────────────────────────────────────
def _root_term(b: int) -> str:
    if b == 1:
        return "r3"
    if b == -1:
        return "-r3"
    return f"{b}r3"


def render(x: Scalar) -> str:
    """parse_scalar 의 역. 분모는 두 성분 분모의 최소공배수 하나로 묶는다"""
    a, b = x.rat, x.r3
    if b == 0:
        return str(a)
    d = lcm(a.denominator, b.denominator)
    na, nb = int(a * d), int(b * d)
    if na == 0:
        return _root_term(nb) if d == 1 else f"{_root_term(nb)}/{d}"
    body = f"{na}{'+' if nb > 0 else ''}{_root_term(nb)}"
    return body if d == 1 else f"({body})/{d}"


# ──────────────────────────────────────────────────────────────────────────────
# 파서 (재귀 하강)
#   expr   := [+|-] term { (+|-) term }
#   term   := factor { '/' INT }
#   factor := INT ['*'] ['r3'] | 'r3' | '(' expr ')'
# ──────────────────────────────────────────────────────────────────────────────
class _Parser:
    def __init__(self, text: str):
        self.src = text
        self.s = "".join(text.split())
        self.i = 0

    def fail(self, msg: str) -> ScalarSyntaxError:
        return ScalarSyntaxError(f"bad scalar {self.src!r}: {msg} at {self.i}")

    def peek(self) -> str:
        return self.s[self.i] if self.i < len(self.s) else ""

    def integer(self) -> int:
        j = self.i
        while self.i < len(self.s) and self.s[self.i].isdigit():
            self.i += 1
        if j == self.i:
            raise self.fail("expected digits")
        return int(self.s[j:self.i])

    def root(self) -> bool:
        if self.s.startswith("r3", self.i):
            self.i += 2
            return True
        return False

    def factor(self) -> Scalar:
        c = self.peek()
        if c == "(":
            self.i += 1
            v = self.expr()
            if self.peek() != ")":
                raise self.fail("expected ')'")
            self.i += 1
            return v
        if c.isdigit():
            n = self.integer()
            if self.peek() == "*":
                self.i += 1
                if not self.root():
                    raise self.fail("expected 'r3' after '*'")
                return Scalar(Fraction(0), Fraction(n))
            if self.root():
                return Scalar(Fraction(0), Fraction(n))
            return Scalar(Fraction(n))
        if self.root():
            return Scalar.root3()
        raise self.fail("expected a number, 'r3' or '('")

    def term(self) -> Scalar:
        v = self.factor()
        while self.peek() == "/":
            self.i += 1
            d = self.integer()
            if d == 0:
                raise self.fail("division by zero")
            v = v * Fraction(1, d)
        return v

    def expr(self) -> Scalar:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.i += 1
        v = self.term() * sign
        while self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.i += 1
            v = v + self.term() * sign
        return v

    def parse(self) -> Scalar:
        if not self.s:
            raise self.fail("empty")
        v = self.expr()
        if self.i != len(self.s):
            raise self.fail("trailing characters")
        return v


def parse_scalar(text: str) -> Scalar:
    return _Parser(text).parse()
