#!/usr/bin/env python
"""
融合数据测试：TY 生成器、Rep(G) 的 F 矩阵、五边形与骨架文件往返
"""

from fractions import Fraction

import pytest

from catalogue import load_entry
from cyclotomic import make_context
from formats import format_skeletal, parse_skeletal_text
from fusion_data import (
    Bicharacter, FusionError, RepresentationCategory, category_from_spec, klein_bicharacter, pentagon_check,
    to_skeletal, ty_category, unit_violations,
)
from linalg import ExactMatrix


@pytest.fixture(scope="module")
def wall():
    return load_entry("wall32").category


@pytest.fixture(scope="module")
def s3():
    return load_entry("s3").category


def test_ty_file_matches_generator():
    """目录中的 TY 表与 ty_category(K₄, χ, +1/2) 逐项一致"""
    from_file = load_entry("ty-k4-kp").category
    generated = ty_category(klein_bicharacter(), Fraction(1, 2))
    assert from_file.labels == generated.labels
    assert from_file.fusion.mult == generated.fusion.mult
    for key in generated.quadruples():
        assert from_file.f_matrix(*key).matrix == generated.f_matrix(*key).matrix, key


@pytest.mark.parametrize("tau", [Fraction(1, 2), Fraction(-1, 2)])
def test_ty_pentagon(tau):
    C = ty_category(klein_bicharacter(), tau)
    assert pentagon_check(C) == []
    assert unit_violations(C) == []


def test_ty_phi_entries():
    C = ty_category(klein_bicharacter(), Fraction(1, 2))
    phi = C.f_matrix("rho", "rho", "rho", "rho")
    assert [row[0] for row in phi.rows] == ["1", "s", "t", "st"]
    # (s, s) 元为 τ·χ(s,s)⁻¹ = −1/2
    assert phi.matrix.data[1, 1] == Fraction(-1, 2)
    assert phi.matrix.data[1, 2] == Fraction(1, 2)
    assert C.f_matrix("s", "rho", "s", "rho").matrix.data[0, 0] == -1


@pytest.mark.parametrize("tau", [Fraction(1, 3), 0.5])
def test_ty_rejects_bad_tau(tau):
    with pytest.raises(FusionError):
        ty_category(klein_bicharacter(), tau)


def test_ty_rejects_degenerate_bicharacter():
    good = klein_bicharacter()
    one = make_context(4).one
    trivial = Bicharacter(good.elements, good.group_mul, {k: one for k in good.values})
    assert trivial.violations()
    with pytest.raises(FusionError):
        ty_category(trivial, Fraction(1, 2))


@pytest.mark.parametrize("name", ["s3", "s4", "q8", "d4"])
def test_rep_pentagon(name):
    C = to_skeletal(load_entry(name).category)
    assert pentagon_check(C) == []


def test_wall_pentagon(wall):
    assert pentagon_check(wall) == []


def test_two_f_algorithms_agree(s3, wall):
    """求解法与对偶基缩并法给出相同的 F"""
    for key in s3.quadruples():
        assert s3.f_matrix(*key).matrix == s3.dual_f_matrix(*key).matrix, key
    for key in [("pi4", "pi4", "pi4", "pi4"), ("pi2", "pi4", "pi4", "pi2"), ("chi_100", "pi2", "pi4", "pi4")]:
        assert wall.f_matrix(*key).matrix == wall.dual_f_matrix(*key).matrix, key


def test_wall_f_signs(wall):
    """附带的交织子基下，χ₁₀₀ 给出 diag(1, −1)，χ₀₀₁ 给出交换矩阵（均差一个标量）"""
    ctx = wall.ctx
    F100 = wall.f_matrix("chi_100", "pi2", "pi4", "pi4").matrix
    F001 = wall.f_matrix("chi_001", "pi2", "pi4", "pi4").matrix
    assert F100.shape == F001.shape == (2, 2)
    assert F100.proportionality(ExactMatrix.from_rows(ctx, [[1, 0], [0, -1]])) is not None
    assert F001.proportionality(ExactMatrix.from_rows(ctx, [[0, 1], [1, 0]])) is not None


def test_channel_gram_is_positive_diagonal(s3):
    for (x, y, z) in s3.fusion.mult:
        G = s3.channel_gram(x, y, z)
        assert G.shape == (1, 1)
        assert not G.data[0, 0].is_zero()


def test_skeletal_round_trip(s3):
    C = to_skeletal(s3)
    text = format_skeletal(C, ["往返"])
    back = category_from_spec(parse_skeletal_text(text))
    assert back.labels == C.labels and back.unit == C.unit
    assert back.fusion.mult == C.fusion.mult
    for key, F in C.f_items():
        assert back.f_matrix(*key).matrix == F.matrix, key
    assert unit_violations(back) == []


def test_unit_target_f_may_be_nontrivial(s3):
    """目标为单位元的 F 不必是单位阵：Rep(S₃) 中 F(std,sgn,std;triv) = −1"""
    C = to_skeletal(s3)
    F = C.f_matrix("std", "sgn", "std", "triv").matrix
    assert not F.is_identity()
    assert unit_violations(C) == []
    back = category_from_spec(parse_skeletal_text(format_skeletal(C)))
    assert back.f_matrix("std", "sgn", "std", "triv").matrix == F


def test_unit_argument_violation_detected():
    C = ty_category(klein_bicharacter(), Fraction(1, 2))
    C.set_f(("1", "rho", "rho", "s"), ExactMatrix.from_rows(C.ctx, [[-1]]))
    assert unit_violations(C) == [("1", "rho", "rho", "s")]
    assert ("unit", "1", "rho", "rho", "s") in pentagon_check(C)


def test_wrong_f_shape_rejected():
    C = ty_category(klein_bicharacter(), Fraction(1, 2))
    with pytest.raises(FusionError):
        C.set_f(("rho", "rho", "rho", "rho"), ExactMatrix.identity(C.ctx, 3))


def test_broken_f_fails_pentagon():
    C = ty_category(klein_bicharacter(), Fraction(1, 2))
    C.set_f(("s", "rho", "t", "rho"), ExactMatrix.from_rows(C.ctx, [[-1]]))
    assert pentagon_check(C)


def test_representation_category_is_lazy():
    loaded = load_entry("s3")
    assert isinstance(loaded.category, RepresentationCategory)
    assert loaded.category.dim("std") == 2


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
