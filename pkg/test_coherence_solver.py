#!/usr/bin/env python
"""
一致性方程求解器测试

交换群与 Schur 乘子公式、暴力预言机三方对照；Wall 群的分支与 Z/2 结果；
规范变换下类不变；张量结构文件往返
"""

import random
from fractions import Fraction

import pytest

from catalogue import CATALOGUE, load_entry
from coherence_solver import (
    SolverError, TensorStructure, _generating_labels, all_channels, branch_enumerate, build_constraints,
    cohomologous_structures, compute_invariant_h2, gauge_stabilizer, structure_from_spec, verify_tensor_structure,
)
from cyclotomic import make_context
from formats import format_tensor_structure, parse_tensor_structure_text
from fusion_data import klein_bicharacter, ty_category
from groups_reps import h2_brute, schur_multiplier


@pytest.fixture(scope="module")
def wall():
    loaded = load_entry("wall32")
    return loaded.category, {coeff: compute_invariant_h2(loaded.category, coeff)
                             for coeff in ("unitary", "invertible")}


@pytest.fixture(scope="module")
def ty():
    C = load_entry("ty-k4-kp").category
    return C, {coeff: compute_invariant_h2(C, coeff) for coeff in ("unitary", "invertible")}


def random_gauge(category, rng):
    ctx = make_context(8)
    gauge = {x: ctx.from_angle(Fraction(rng.randint(0, 7), 8)) for x in category.labels}
    gauge[category.unit] = ctx.one
    return gauge


@pytest.mark.parametrize("name", ["k4", "z2^3", "z4xz2", "z6", "z8"])
def test_abelian_oracle(name):
    """求解器、Schur 乘子公式、暴力计算三者一致"""
    loaded = load_entry(name)
    invariants = CATALOGUE[name].invariants
    result = compute_invariant_h2(loaded.category, "invertible")
    expected = schur_multiplier(invariants)
    assert result.describe() == str(expected) == CATALOGUE[name].expected
    assert h2_brute(loaded.group) == expected
    assert len(result.classes) == expected.order


def test_wall_branches(wall):
    _, results = wall
    for result in results.values():
        assert len(result.candidates) == 4
        assert sum(c.alive for c in result.candidates) == 2
        assert all(c.reason for c in result.candidates if not c.alive)
        for c in result.candidates:
            assert set(c.generators) <= {label for label, _ in c.psi}
            assert bool(c.generators) == bool(c.psi)


def test_wall_is_z2(wall):
    category, results = wall
    for coeff, result in results.items():
        assert result.describe() == "Z/2", coeff
        assert len(result.classes) == 2
        assert result.table == [[0, 1], [1, 0]]
        assert all(all(c.values()) for c in result.certificates)
        assert verify_tensor_structure(category, result.classes[1], coeff == "unitary") == []
    # 非平凡类确实不与平凡结构上同调
    J = results["unitary"].classes[1]
    assert cohomologous_structures(TensorStructure.identity(category).embed(J.ctx), J) is None


@pytest.mark.parametrize("name", ["s3", "s4", "q8", "d4"])
def test_small_nonabelian_groups_trivial(name):
    result = compute_invariant_h2(load_entry(name).category, "invertible")
    assert result.describe() == "1" == CATALOGUE[name].expected
    assert result.table == [[0]]


def test_ty_trivial(ty):
    _, results = ty
    for result in results.values():
        assert result.describe() == "1"
        assert len(result.candidates) == 1


def test_unitary_injects_into_invertible(wall, ty):
    """酉类数 ≤ 可逆类数，Wall 与 TY 上相等"""
    for _, results in (wall, ty):
        assert len(results["unitary"].classes) == len(results["invertible"].classes)
    result = compute_invariant_h2(load_entry("k4").category, "unitary")
    assert len(result.classes) <= len(compute_invariant_h2(load_entry("k4").category, "invertible").classes)


@pytest.mark.parametrize("fixture_name", ["wall", "ty"])
def test_gauge_stability(fixture_name, request):
    """随机单位根规范变换不改变类，也不破坏一致性方程"""
    category, results = request.getfixturevalue(fixture_name)
    rng = random.Random(17)
    classes = results["unitary"].classes
    for k, J in enumerate(classes):
        for _ in range(3):
            moved = J.apply_gauge(random_gauge(category, rng))
            assert cohomologous_structures(J, moved) is not None
            assert verify_tensor_structure(category, moved, unitary=True) == []
            others = [i for i, K in enumerate(classes) if cohomologous_structures(K, moved) is not None]
            assert others == [k]


def test_identity_structure_is_coherent():
    C = ty_category(klein_bicharacter(), Fraction(-1, 2))
    J = TensorStructure.identity(C)
    assert len(J) == len(all_channels(C))
    assert J.is_normalized(C.unit)
    assert verify_tensor_structure(C, J, unitary=True) == []


def test_ty_monomial_coefficients():
    """TY 的 (s,ρ,s;ρ) 方程带系数 χ(s,s) = −1，两边通道相消"""
    system = build_constraints(ty_category(klein_bicharacter(), Fraction(1, 2)))
    assert system.registry.matrix_unknowns() == []
    assert system.matrix_relations == []
    rels = [r for r in system.monomials if r.quadruple == ("s", "rho", "s", "rho")]
    assert len(rels) == 1
    assert rels[0].coefficient == -1
    assert rels[0].exponents == {}
    assert len(branch_enumerate(system)) == 1


def test_generating_labels():
    """K₄ = {1, s, t, st} 由 s 与 t 生成"""
    fusion = ty_category(klein_bicharacter(), Fraction(1, 2)).fusion
    assert _generating_labels(fusion, ["s", "t", "st"]) == ["s", "t"]
    assert _generating_labels(fusion, ["st", "s", "t"]) == ["st", "s"]
    assert _generating_labels(fusion, []) == []


def test_gauge_stabilizer_ty():
    """(a,ρ,ρ) 通道迫使 c_a = 1，只剩 c_ρ = ±1"""
    system = build_constraints(ty_category(klein_bicharacter(), Fraction(1, 2)))
    stab = gauge_stabilizer(system)
    assert stab.free_rank == 0
    assert stab.order == 2


def test_structure_file_round_trip(wall):
    category, results = wall
    J = results["invertible"].classes[1]
    text = format_tensor_structure(J, "wall-class1", ["往返"])
    back = structure_from_spec(parse_tensor_structure_text(text), category)
    assert set(back.channels) == set(J.channels)
    for ch in J.channels:
        assert back[ch].embed(J.ctx) == J[ch], ch


def test_structure_missing_channel():
    C = ty_category(klein_bicharacter(), Fraction(1, 2))
    text = "tensor-structure name=bad conductor=4\nJ s s 1: [[1]]\n"
    with pytest.raises(SolverError):
        structure_from_spec(parse_tensor_structure_text(text), C)


def test_unknown_coeff_mode():
    with pytest.raises(SolverError):
        compute_invariant_h2(load_entry("z6").category, "real")


def test_multiply_and_inverse(wall):
    _, results = wall
    J = results["unitary"].classes[1]
    square = J.multiply(J)
    assert cohomologous_structures(results["unitary"].classes[0], square) is not None
    product = J.multiply(J.inverse())
    assert all(M.is_identity() for M in product.channels.values())


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
