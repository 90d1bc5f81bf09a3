"""
分圆域 ℚ(ζ_N) 上的精确算术

元素用幂基表示：对 Φ_N 约化后长度为 φ(N) 的整数系数向量加一个公共分母，
始终保持约分后的规范形式，因此相等判断就是向量比较。
to_float 只用于诊断输出，任何判断都不依赖浮点数。
"""

from __future__ import annotations

import cmath
import logging
import math
import numbers
import operator
import re
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import sympy

logger = logging.getLogger(__name__)


class CycloError(ValueError):
    """分圆域运算错误：导子不一致、非法字面量、非单位根等"""


def _poly_exact_div(num: List[int], den: Sequence[int]) -> List[int]:
    """整系数多项式精确除法，den 为首一多项式，系数按升幂排列"""
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            out[k - dn] = c
            for i, d in enumerate(den):
                num[k - dn + i] -= c * d
    if any(num):
        raise CycloError("多项式除法有余数")
    return out


def _trim(p: List[Fraction]) -> List[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = _trim(list(a))
    db = len(b) - 1
    q = [Fraction(0)] * max(len(a) - db, 1)
    while a and len(a) - 1 >= db:
        c = a[-1] / b[-1]
        shift = len(a) - 1 - db
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] -= c * y
        _trim(a)
    return q, a


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


class CycloContext:
    """导子为 N 的分圆域 ℚ(ζ_N)

    phi 是 Φ_N 的升幂系数；powers[m] 是 x^m mod Φ_N 的系数向量（0 ≤ m < N），
    乘法约化和共轭都查这张表。
    """

    __slots__ = ("conductor", "phi", "degree", "powers", "zero_num", "_zero", "_one", "_angles")

    def __init__(self, conductor: int, phi: Tuple[int, ...]):
        self.conductor = conductor
        self.phi = phi
        self.degree = len(phi) - 1
        self.powers = self._power_table()
        self.zero_num = (0,) * self.degree
        self._zero = CycloNumber._raw(self, self.zero_num, 1)
        self._one = CycloNumber._raw(self, (1,) + self.zero_num[1:], 1)
        self._angles = None

    def _power_table(self) -> Tuple[Tuple[int, ...], ...]:
        deg = self.degree
        vec = [0] * deg
        vec[0] = 1
        table = []
        for _ in range(self.conductor):
            table.append(tuple(vec))
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for i in range(deg):
                    vec[i] -= top * self.phi[i]
        return tuple(table)

    def __repr__(self):
        return f"CycloContext(N={self.conductor})"

    @property
    def zero(self) -> "CycloNumber":
        return self._zero

    @property
    def one(self) -> "CycloNumber":
        return self._one

    @property
    def root_order(self) -> int:
        """域中单位根群的阶：N 为偶数时是 N，否则是 2N"""
        return self.conductor if self.conductor % 2 == 0 else 2 * self.conductor

    def number(self, value) -> "CycloNumber":
        if isinstance(value, CycloNumber):
            if value.ctx is not self:
                raise CycloError(f"导子不一致: {value.ctx.conductor} 与 {self.conductor}，请先显式嵌入")
            return value
        if isinstance(value, numbers.Rational):
            q = Fraction(value)
            if q == 0:
                return self._zero
            return CycloNumber(self, (q.numerator,) + self.zero_num[1:], q.denominator)
        raise CycloError(f"无法转换为分圆数: {value!r}")

    def root(self, k: int) -> "CycloNumber":
        return CycloNumber._raw(self, self.powers[k % self.conductor], 1)

    def _angle_table(self) -> dict:
        if self._angles is None:
            table = {}
            order = self.root_order
            for j in range(order):
                value = self.from_angle(Fraction(j, order))
                table[(value.num, value.den)] = Fraction(j, order)
            self._angles = table
        return self._angles

    def angle_of(self, x: "CycloNumber") -> Optional[Fraction]:
        """单位根的离散对数：x = exp(2πi·q)，q ∈ [0, 1)；x 不是单位根时返回 None"""
        x = self.number(x)
        return self._angle_table().get((x.num, x.den))

    def from_angle(self, q: Fraction) -> "CycloNumber":
        """exp(2πi·q)，要求其阶整除本域的单位根群阶"""
        q = Fraction(q) % 1
        order = self.root_order
        j = q * order
        if j.denominator != 1:
            raise CycloError(f"单位根 exp(2πi·{q}) 不在 ℚ(ζ_{self.conductor}) 中")
        j = int(j)
        n = self.conductor
        if n % 2 == 0:
            return self.root(j)
        if j % 2 == 0:
            return self.root(j // 2)
        return -self.root((j + n) // 2)

    def roots_of_unity(self, d: int) -> List["CycloNumber"]:
        """域中满足 κ^d = 1 的全部单位根，按辐角排序"""
        g = math.gcd(d, self.root_order)
        return [self.from_angle(Fraction(j, g)) for j in range(g)]


class CycloNumber:
    """ℚ(ζ_N) 中的元素，值语义、不可变"""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx: CycloContext, num: Sequence[int], den: int = 1):
        if den == 0:
            raise ZeroDivisionError("分母为 0")
        num = tuple(num)
        if len(num) != ctx.degree:
            raise CycloError(f"系数向量长度 {len(num)} 与 φ({ctx.conductor}) = {ctx.degree} 不符")
        if not any(num):
            den = 1
        else:
            g = math.gcd(den, *num)
            if den < 0:
                g = -g
            if g != 1:
                num = tuple(c // g for c in num)
                den //= g
        self.ctx = ctx
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, ctx: CycloContext, num: Tuple[int, ...], den: int) -> "CycloNumber":
        obj = object.__new__(cls)
        obj.ctx = ctx
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def from_fractions(cls, ctx: CycloContext, coeffs: Sequence[Fraction]) -> "CycloNumber":
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = tuple(int(c * den) for c in coeffs)
        return cls(ctx, num + (0,) * (ctx.degree - len(num)), den)

    def _coerce(self, other) -> Optional["CycloNumber"]:
        if isinstance(other, CycloNumber):
            if other.ctx is not self.ctx:
                raise CycloError(
                    f"导子不一致: {self.ctx.conductor} 与 {other.ctx.conductor}，请先显式嵌入"
                )
            return other
        if isinstance(other, numbers.Rational):
            return self.ctx.number(other)
        return None

    # ---- 谓词 ----
    def is_zero(self) -> bool:
        return self.num == self.ctx.zero_num

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise CycloError(f"{self.literal()} 不是有理数")
        return Fraction(self.num[0], self.den)

    def __bool__(self):
        return not self.is_zero()

    # ---- 域运算 ----
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return CycloNumber(self.ctx, tuple(x + y for x, y in zip(self.num, other.num)), self.den)
        a, b = self.den, other.den
        return CycloNumber(self.ctx, tuple(x * b + y * a for x, y in zip(self.num, other.num)), a * b)

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber._raw(self.ctx, tuple(-c for c in self.num), self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        ctx = self.ctx
        a, b = self.num, other.num
        if a == ctx.zero_num or b == ctx.zero_num:
            return ctx.zero
        den = self.den * other.den
        if not any(a[1:]):
            s = a[0]
            return CycloNumber(ctx, tuple(s * y for y in b), den)
        if not any(b[1:]):
            s = b[0]
            return CycloNumber(ctx, tuple(s * x for x in a), den)
        deg = ctx.degree
        prod = [0] * (2 * deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        res = prod[:deg]
        powers, n = ctx.powers, ctx.conductor
        for k in range(deg, 2 * deg - 1):
            c = prod[k]
            if c:
                row = powers[k % n]
                for i in range(deg):
                    if row[i]:
                        res[i] += c * row[i]
        return CycloNumber(ctx, tuple(res), den)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise ZeroDivisionError("分圆数 0 不可逆")
        ctx = self.ctx
        if self.is_rational():
            return CycloNumber(ctx, (self.den,) + ctx.zero_num[1:], self.num[0])
        phi = [Fraction(c) for c in ctx.phi]
        r0, r1 = phi, _trim([Fraction(c) for c in self.num])
        s0, s1 = [], [Fraction(1)]
        # 不变量: r_i ≡ s_i · a (mod Φ_N)
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        c = r0[0]
        inv = [x * self.den / c for x in s0]
        _, inv = _poly_divmod(inv, phi)
        return CycloNumber.from_fractions(ctx, inv)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = self.ctx.one
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "CycloNumber":
        """复共轭 ζ_N ↦ ζ_N^{N−1}"""
        if self.is_rational():
            return self
        ctx = self.ctx
        n, deg = ctx.conductor, ctx.degree
        res = [0] * deg
        for k, c in enumerate(self.num):
            if c:
                row = ctx.powers[(-k) % n]
                for i in range(deg):
                    if row[i]:
                        res[i] += c * row[i]
        return CycloNumber(ctx, tuple(res), self.den)

    def embed(self, target: CycloContext) -> "CycloNumber":
        """嵌入到导子 M（N | M）的域中，ζ_N ↦ ζ_M^{M/N}"""
        n, m = self.ctx.conductor, target.conductor
        if m % n:
            raise CycloError(f"无法把导子 {n} 的数嵌入导子 {m}")
        if target is self.ctx:
            return self
        f = m // n
        res = [0] * target.degree
        for k, c in enumerate(self.num):
            if c:
                row = target.powers[(k * f) % m]
                for i in range(target.degree):
                    if row[i]:
                        res[i] += c * row[i]
        return CycloNumber(target, tuple(res), self.den)

    def to_float(self) -> complex:
        n = self.ctx.conductor
        total = sum(c * cmath.exp(2j * math.pi * k / n) for k, c in enumerate(self.num) if c)
        return complex(total) / self.den

    # ---- 比较与输出 ----
    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.ctx.conductor, self.num, self.den))

    def literal(self) -> str:
        """规范字面量，例如 1 - c(8,2) + 1/2*c(8,3)"""
        n = self.ctx.conductor
        terms = []
        for k, c in enumerate(self.num):
            if not c:
                continue
            q = Fraction(c, self.den)
            mag = abs(q)
            if k == 0:
                body = str(mag)
            else:
                root_text = f"c({n},{k})"
                body = root_text if mag == 1 else f"{mag}*{root_text}"
            terms.append((q < 0, body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] else "") + terms[0][1]
        for neg, body in terms[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __str__(self):
        return self.literal()

    def __repr__(self):
        return f"CycloNumber({self.literal()!r}, N={self.ctx.conductor})"


@lru_cache(maxsize=None)
def make_context(n: int) -> CycloContext:
    """构造 ℚ(ζ_n)：Φ_n 由 x^n − 1 逐个除以真因子 d 的 Φ_d 得到"""
    if not isinstance(n, int) or n < 1:
        raise CycloError(f"导子必须是正整数: {n!r}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in sympy.divisors(n)[:-1]:
        poly = _poly_exact_div(poly, make_context(d).phi)
    ctx = CycloContext(n, tuple(poly))
    if ctx.degree != int(sympy.totient(n)):
        raise CycloError(f"Φ_{n} 的次数 {ctx.degree} 与 φ({n}) 不符")
    logger.debug("构造分圆域 ℚ(ζ_%d)，次数 %d", n, ctx.degree)
    return ctx


def root(ctx: CycloContext, k: int) -> CycloNumber:
    """ζ_N^k"""
    return ctx.root(k)


_ARITH_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def arith(a: CycloNumber, b: CycloNumber, op: str) -> CycloNumber:
    if op not in _ARITH_OPS:
        raise CycloError(f"未知运算: {op}")
    return _ARITH_OPS[op](a, b)


def common_context(*conductors: int) -> CycloContext:
    """包含所有给定导子的最小分圆域"""
    n = 1
    for c in conductors:
        n = n * c // math.gcd(n, c)
    return make_context(n)


# ---- 字面量解析 ----

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<root>c\(\s*(?P<m>\d+)\s*,\s*(?P<k>-?\d+)\s*\))|(?P<op>[-+*()]))"
)


class _LiteralParser:
    """递归下降: expr := term (('+'|'-') term)*, term := factor ('*' factor)*"""

    def __init__(self, text: str, ctx: CycloContext):
        self.ctx = ctx
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise CycloError(f"无法解析字面量 {text!r}（位置 {pos}）")
            if m.group("num"):
                self.tokens.append(("num", Fraction(m.group("num"))))
            elif m.group("root"):
                self.tokens.append(("root", (int(m.group("m")), int(m.group("k")))))
            else:
                self.tokens.append(("op", m.group("op")))
            pos = m.end()
            while pos < len(text) and text[pos].isspace():
                pos += 1
        self.i = 0
        self.text = text

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> CycloNumber:
        if not self.tokens:
            raise CycloError("空字面量")
        value = self.expr()
        if self.i != len(self.tokens):
            raise CycloError(f"字面量 {self.text!r} 末尾有多余内容")
        return value

    def expr(self) -> CycloNumber:
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> CycloNumber:
        value = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            value = value * self.factor()
        return value

    def factor(self) -> CycloNumber:
        kind, val = self.take()
        if kind == "op" and val == "-":
            return -self.factor()
        if kind == "op" and val == "+":
            return self.factor()
        if kind == "num":
            return self.ctx.number(val)
        if kind == "root":
            m, k = val
            if m < 1 or self.ctx.conductor % m:
                raise CycloError(f"c({m},{k}) 不在 ℚ(ζ_{self.ctx.conductor}) 中")
            return self.ctx.root(k * (self.ctx.conductor // m))
        if kind == "op" and val == "(":
            value = self.expr()
            if self.take() != ("op", ")"):
                raise CycloError(f"字面量 {self.text!r} 括号不匹配")
            return value
        raise CycloError(f"字面量 {self.text!r} 语法错误")


def parse_number(text: str, ctx: CycloContext) -> CycloNumber:
    """解析 p/q、c(N,k)、+ - * 与括号组成的字面量"""
    return _LiteralParser(text, ctx).parse()
