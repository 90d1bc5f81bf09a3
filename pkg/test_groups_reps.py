#!/usr/bin/env python
"""
有限群、不可约表示与交换群预言机测试
"""

import os

import pytest

import config
from cyclotomic import make_context
from formats import parse_group_text, parse_matrix, read_bases_file
from groups_reps import (
    GroupError, abelian_group, abelian_invariants, basis_from_maps, fusion_table, group_from_generators,
    group_from_spec, group_from_table, h2_brute, intertwiner_basis, load_group_with_irreps, schur_multiplier,
    validate_irrep, wall_group,
)
from linalg import AbelianGroupPresentation

CONCRETE = ["s3", "s4", "q8", "d4", "wall32"]


def load(name):
    return load_group_with_irreps(
        os.path.join(config.CATALOGUE_DIR, f"{name}.group"),
        os.path.join(config.CATALOGUE_DIR, f"{name}.irreps"),
    )


@pytest.fixture(scope="module")
def wall():
    return wall_group()


def test_wall_group_relations(wall):
    """s u s⁻¹ = u³，t u t⁻¹ = u⁵，s、t 可交换"""
    G, _ = wall
    assert G.order == 32
    s, t, u = (G.generators[k] for k in "stu")

    def power(g, k):
        out = G.identity
        for _ in range(k):
            out = G.mul[out][g]
        return out

    assert G.mul[G.mul[s][u]][G.inverse[s]] == power(u, 3)
    assert G.mul[G.mul[t][u]][G.inverse[t]] == power(u, 5)
    assert G.mul[s][t] == G.mul[t][s]
    assert G.element_order(u) == 8
    assert G.exponent == 8
    assert not G.is_abelian()


@pytest.mark.parametrize("name", CONCRETE)
def test_catalogue_irreps_valid(name):
    """同态、酉、不可约，且 Σd² = |G|"""
    G, irreps = load(name)
    for R in irreps:
        assert validate_irrep(G, R) == []
    assert sum(R.dim ** 2 for R in irreps) == G.order
    assert fusion_table(G, irreps).check() == []


def test_wall_fusion(wall):
    G, irreps = wall
    fusion = fusion_table(G, irreps)
    assert len(irreps) == 11
    assert fusion.unit == "chi_000"
    assert fusion.N("pi4", "pi4", "pi2") == 2
    assert fusion.N("pi4", "pi4", "pi2p") == 2
    assert fusion.N("pi2", "pi4", "pi4") == 2
    assert fusion.invertibles() == [R.label for R in irreps if R.dim == 1]


def test_shipped_wall_bases():
    """附带的 T、S 基都是交织子，线性无关，个数与 RREF 基相同"""
    G, irreps = load("wall32")
    R = {r.label: r for r in irreps}
    fusion = fusion_table(G, irreps)
    shipped = read_bases_file(os.path.join(config.CATALOGUE_DIR, "wall32.bases"))
    assert shipped
    for (x, y, z), texts in shipped.items():
        maps = [parse_matrix(t, irreps[0].ctx) for t in texts]
        B = basis_from_maps(G, R[x], R[y], R[z], maps)
        assert len(B) == fusion.N(x, y, z) == len(intertwiner_basis(G, R[x], R[y], R[z]))


def test_intertwiner_basis_s3():
    G, irreps = load("s3")
    R = {r.label: r for r in irreps}
    for z in ("triv", "sgn", "std"):
        B = intertwiner_basis(G, R["std"], R["std"], R[z])
        assert len(B) == 1
        T = B.maps[0]
        for g in range(G.order):
            assert T @ R[z](g) == R["std"](g).kron(R["std"](g)) @ T
        assert (B.duals[0] @ T).is_identity()


def test_bad_irrep_detected():
    G, irreps = load("s3")
    broken = irreps[2].embed(irreps[2].ctx)
    broken.matrices[G.generators["a"]] = broken.matrices[G.generators["a"]].scale(2)
    assert validate_irrep(G, broken)


def test_group_order_mismatch():
    spec = parse_group_text("group name=bad order=5\ngenerators\na: (1 2 3)\n")
    with pytest.raises(GroupError):
        group_from_spec(spec)


def test_closure_bound():
    with pytest.raises(GroupError):
        group_from_generators({"a": (1, 2, 3, 4, 5, 6, 0), "b": (1, 0)}, max_order=100)


def test_group_from_table():
    G = group_from_table([[0, 1, 2], [1, 2, 0], [2, 0, 1]], "z3")
    assert G.is_abelian()
    assert abelian_invariants(G) == (3,)
    with pytest.raises(GroupError):
        group_from_table([[0, 1], [1, 1]])


@pytest.mark.parametrize("invariants", [(2, 2), (2, 2, 2), (4, 2), (6,), (8,)])
def test_abelian_group(invariants):
    G, irreps = abelian_group(invariants)
    order = 1
    for n in invariants:
        order *= n
    assert G.order == order == len(irreps)
    assert all(validate_irrep(G, R) == [] for R in irreps)
    assert abelian_invariants(G) == AbelianGroupPresentation.from_orders(invariants).invariants


@pytest.mark.parametrize("invariants, expected", [
    ((2, 2), (2,)),
    ((2, 2, 2), (2, 2, 2)),
    ((4, 2), (2,)),
    ((6,), ()),
    ((8,), ()),
])
def test_schur_multiplier_and_brute_force_agree(invariants, expected):
    G, _ = abelian_group(invariants)
    assert schur_multiplier(invariants).invariants == expected
    assert h2_brute(G) == schur_multiplier(invariants)


def test_h2_brute_small_modulus():
    """Z₂ 值余循环在 H²(Z₂, ℂ*) 中的像平凡；K₄ 取 m = 2 已得到全部"""
    G, _ = abelian_group((2,))
    assert h2_brute(G, 2).is_trivial()
    K4, _ = abelian_group((2, 2))
    assert h2_brute(K4, 2) == AbelianGroupPresentation(0, (2,))
    with pytest.raises(GroupError):
        h2_brute(K4, 3)


def test_h2_brute_guards():
    G, _ = load("s3")
    with pytest.raises(GroupError):
        h2_brute(G)
    big, _ = abelian_group((2, 2, 2, 2, 2))
    with pytest.raises(GroupError):
        h2_brute(big)


def test_schur_multiplier_four_factors():
    assert schur_multiplier((2, 2, 2, 2)).invariants == (2,) * 6
    assert schur_multiplier((2, 4, 4)).invariants == (2, 2, 4)


def test_irreps_share_context():
    _, irreps = load("wall32")
    assert all(R.ctx is make_context(8) for R in irreps)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
