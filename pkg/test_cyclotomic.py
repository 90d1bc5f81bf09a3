#!/usr/bin/env python
"""
分圆域算术测试

用 sympy 的分圆多项式与欧拉函数做独立对照，其余为域公理与字面量往返
"""

import random
from fractions import Fraction

import pytest
import sympy

from cyclotomic import CycloError, CycloNumber, arith, common_context, make_context, parse_number, root

CONDUCTORS = [1, 2, 3, 4, 5, 6, 8, 12, 15, 24]


def random_number(ctx, rng):
    num = [rng.randint(-6, 6) for _ in range(ctx.degree)]
    return CycloNumber(ctx, num, rng.randint(1, 5))


@pytest.mark.parametrize("n", CONDUCTORS)
def test_phi_matches_sympy(n):
    """Φ_n 与 sympy 一致，次数为 φ(n)"""
    x = sympy.Symbol("x")
    expected = [int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs())]
    ctx = make_context(n)
    assert list(ctx.phi) == expected
    assert ctx.degree == sympy.totient(n)


@pytest.mark.parametrize("n", [3, 4, 8, 12])
def test_root_order(n):
    ctx = make_context(n)
    z = root(ctx, 1)
    assert z ** n == 1
    for k in range(1, n):
        assert z ** k != 1


@pytest.mark.parametrize("n", [3, 5, 8, 12])
def test_field_axioms(n):
    """逆元、分配律、共轭的乘法性"""
    rng = random.Random(n)
    ctx = make_context(n)
    for _ in range(30):
        a, b, c = (random_number(ctx, rng) for _ in range(3))
        assert a * (b + c) == a * b + a * c
        assert (a - b) + b == a
        assert (a * b).conjugate() == a.conjugate() * b.conjugate()
        if not a.is_zero():
            assert a * a.inverse() == 1
            assert (b / a) * a == b


def test_conjugate_of_root():
    ctx = make_context(8)
    z = ctx.root(3)
    assert z * z.conjugate() == 1
    assert z.conjugate() == ctx.root(5)


def test_literal_round_trip():
    rng = random.Random(7)
    for n in CONDUCTORS:
        ctx = make_context(n)
        for _ in range(10):
            x = random_number(ctx, rng)
            assert parse_number(x.literal(), ctx) == x


def test_parse_number_forms():
    ctx = make_context(8)
    assert parse_number("1/2", ctx) == Fraction(1, 2)
    assert parse_number("c(4,1)", ctx) == ctx.root(2)
    assert parse_number("-(1 + c(8,1))*c(8,7)", ctx) == -(ctx.root(7) + 1)
    with pytest.raises(CycloError):
        parse_number("c(3,1)", ctx)
    with pytest.raises(CycloError):
        parse_number("1 +", ctx)


def test_embed():
    """ζ_4 ↦ ζ_8²，运算与嵌入交换"""
    c4, c8 = make_context(4), make_context(8)
    assert c4.root(1).embed(c8) == c8.root(2)
    rng = random.Random(3)
    for _ in range(10):
        a, b = random_number(c4, rng), random_number(c4, rng)
        assert (a * b).embed(c8) == a.embed(c8) * b.embed(c8)
    with pytest.raises(CycloError):
        c8.root(1).embed(c4)


def test_mixed_contexts_rejected():
    with pytest.raises(CycloError):
        make_context(4).root(1) + make_context(8).root(1)


def test_angles():
    """奇导子的域里也含 −1，单位根群阶为 2N"""
    ctx = make_context(3)
    assert ctx.root_order == 6
    assert ctx.from_angle(Fraction(1, 2)) == -1
    for j in range(6):
        q = Fraction(j, 6)
        assert ctx.angle_of(ctx.from_angle(q)) == q
    assert ctx.angle_of(ctx.number(2)) is None
    with pytest.raises(CycloError):
        ctx.from_angle(Fraction(1, 4))


def test_roots_of_unity():
    ctx = make_context(8)
    assert len(ctx.roots_of_unity(2)) == 2
    assert len(ctx.roots_of_unity(4)) == 4
    assert len(ctx.roots_of_unity(16)) == 8
    assert all(r ** 4 == 1 for r in ctx.roots_of_unity(4))


def test_common_context_and_arith():
    ctx = common_context(4, 6)
    assert ctx.conductor == 12
    a, b = ctx.root(1), ctx.root(5)
    assert arith(a, b, "mul") == ctx.root(6) == -1
    assert arith(a, a, "sub").is_zero()
    with pytest.raises(CycloError):
        arith(a, b, "pow")


def test_to_float_is_diagnostic_only():
    z = make_context(4).root(1)
    assert abs(z.to_float() - 1j) < 1e-12


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
