#!/usr/bin/env python
"""
群代数层面验证的测试

Z₂ 上的显式 Ω；组装与分解互逆；Wall 群非平凡类的五项检查与上同调判定
"""

import random
from fractions import Fraction

import pytest

from catalogue import load_entry
from cocycle_verify import (
    VerificationError, assemble_group_cocycle, check_counital, check_invariance, check_left_cocycle,
    check_right_cocycle, check_right_cocycle_via_star, check_unitary, coboundary, cocycle_from_spec, cohomologous,
    decompose, inverse, left_cocycle_defect, multiply, star, trivial_cocycle,
)
from coherence_solver import TensorStructure, all_channels, compute_invariant_h2
from formats import format_cocycle, parse_cocycle_text
from linalg import ExactMatrix


def z2_structure(G, irreps, j11=-1, j01=1):
    """Z₂ 的对偶上的张量结构：只有 J^{sgn,sgn} 与 J^{triv,sgn} 可调"""
    ctx = irreps[0].ctx
    triv, sgn = (R.label for R in irreps)
    values = {(triv, triv, triv): 1, (triv, sgn, sgn): j01, (sgn, triv, sgn): 1, (sgn, sgn, triv): j11}
    return TensorStructure(ctx, {ch: ExactMatrix.from_rows(ctx, [[v]]) for ch, v in values.items()})


def random_structure(category, rng):
    ctx = category.ctx
    roots = ctx.roots_of_unity(ctx.root_order)
    channels = {}
    for ch in all_channels(category):
        n = category.fusion.N(*ch)
        channels[ch] = ExactMatrix.from_rows(ctx, [[rng.choice(roots) * rng.randint(1, 3) for _ in range(n)]
                                                   for _ in range(n)])
    return TensorStructure(ctx, channels)


@pytest.fixture(scope="module")
def z2():
    loaded = load_entry("2")
    G, irreps = loaded.group, loaded.irreps
    e = G.identity
    u = 1 - e
    return G, irreps, e, u


@pytest.fixture(scope="module")
def wall():
    loaded = load_entry("wall32")
    result = compute_invariant_h2(loaded.category, "unitary", certify_classes=False)
    omega = assemble_group_cocycle(loaded.group, loaded.irreps, result.classes[1], bases=loaded.category.basis)
    return loaded, omega


def test_z2_explicit_omega(z2):
    """J^{sgn,sgn} = −1 给出 Ω = ½(e⊗e + e⊗u + u⊗e − u⊗u)"""
    G, irreps, e, u = z2
    omega = assemble_group_cocycle(G, irreps, z2_structure(G, irreps))
    half = Fraction(1, 2)
    assert omega(e, e) == half
    assert omega(e, u) == half
    assert omega(u, e) == half
    assert omega(u, u) == -half
    assert check_left_cocycle(omega)
    assert check_right_cocycle_via_star(omega)
    assert check_invariance(omega)
    assert check_counital(omega)
    assert check_unitary(omega)


def test_z2_omega_squares_to_one(z2):
    G, irreps, _, _ = z2
    omega = assemble_group_cocycle(G, irreps, z2_structure(G, irreps))
    assert multiply(omega, omega) == trivial_cocycle(G)
    assert inverse(G, irreps, omega) == omega


@pytest.mark.parametrize("name", ["2", "k4", "s3"])
def test_fourier_round_trip(name):
    """decompose(assemble(J)) = J"""
    loaded = load_entry(name)
    G, irreps, category = loaded.group, loaded.irreps, loaded.category
    rng = random.Random(11)
    for _ in range(100):
        J = random_structure(category, rng)
        back = decompose(G, irreps, assemble_group_cocycle(G, irreps, J))
        assert set(back) == set(J.channels)
        for ch, M in J.channels.items():
            assert back[ch] == M, ch


def test_coboundary_matches_gauged_identity():
    """(h⊗h)Δ(h⁻¹) 的通道为 c_x c_y / c_z"""
    loaded = load_entry("s3")
    ctx = loaded.category.ctx
    gauge = {"triv": ctx.one, "sgn": ctx.from_angle(Fraction(1, 2)), "std": ctx.from_angle(Fraction(1, 3))}
    gauged = TensorStructure.identity(loaded.category).apply_gauge(gauge)
    assert coboundary(loaded.group, loaded.irreps, gauge) == \
        assemble_group_cocycle(loaded.group, loaded.irreps, gauged)


def test_corrupted_cocycle_has_defect(z2):
    G, irreps, _, _ = z2
    bad = assemble_group_cocycle(G, irreps, z2_structure(G, irreps, j01=2))
    defect = left_cocycle_defect(bad)
    assert defect is not None and len(defect) == 3
    assert not check_counital(bad)


def test_star_is_involution(z2):
    G, irreps, _, _ = z2
    rng = random.Random(4)
    omega = assemble_group_cocycle(G, irreps, random_structure(load_entry("2").category, rng))
    assert star(star(omega)) == omega


def test_wall_certification(wall):
    """非平凡类：五项检查全部通过"""
    _, omega = wall
    assert check_left_cocycle(omega)
    assert check_right_cocycle(star(omega))
    assert check_right_cocycle_via_star(omega)
    assert check_invariance(omega)
    assert check_counital(omega)
    assert check_unitary(omega)


def test_wall_cohomology_decision(wall):
    """1⊗1 与 Ω 不上同调，与 Ω·Ω 上同调且给出见证"""
    loaded, omega = wall
    G, irreps, bases = loaded.group, loaded.irreps, loaded.category.basis
    one = trivial_cocycle(G)
    assert cohomologous(G, irreps, one, omega, bases) is None
    witness = cohomologous(G, irreps, one, multiply(omega, omega), bases)
    assert witness is not None
    assert set(witness) == {R.label for R in irreps}


def test_cocycle_file_round_trip(z2):
    G, irreps, _, _ = z2
    omega = assemble_group_cocycle(G, irreps, z2_structure(G, irreps))
    assert cocycle_from_spec(parse_cocycle_text(format_cocycle(omega)), G) == omega


def test_cocycle_file_group_mismatch(z2):
    G, _, _, _ = z2
    with pytest.raises(VerificationError):
        cocycle_from_spec(parse_cocycle_text("cocycle group=other conductor=1\n0 0 1\n"), G)
    with pytest.raises(VerificationError):
        cocycle_from_spec(parse_cocycle_text(f"cocycle group={G.name} conductor=1\n0 5 1\n"), G)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
