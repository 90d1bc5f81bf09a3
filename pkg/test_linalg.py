#!/usr/bin/env python
"""
精确线性代数测试

Smith 标准形在 1000 个随机小矩阵上检查 U·A·V = S、幺模性与整除链，
不变因子另用行列式因子（sympy 计算子式）独立核对
"""

import itertools
import math
import random
from fractions import Fraction

import pytest
import sympy

from cyclotomic import make_context
from linalg import (
    AbelianGroupPresentation, ExactMatrix, IntegerMatrix, LatticeEchelon, LinalgError, block_diagonal,
    dual_basis, quotient_group, rref, rref_nullspace, smith_normal_form, solve_linear, solve_modular, solve_unique,
)

CTX = make_context(8)


def random_integer_matrix(rng, max_dim=4, bound=6):
    m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)]


def determinantal_invariants(rows):
    """s_k = d_k / d_{k−1}，d_k 为全部 k 阶子式的 gcd"""
    M = sympy.Matrix(rows)
    m, n = M.shape
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for r in itertools.combinations(range(m), k):
            for c in itertools.combinations(range(n), k):
                g = math.gcd(g, int(M.extract(list(r), list(c)).det()))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[k] // divisors[k - 1] for k in range(1, len(divisors))]


def test_smith_normal_form_identities():
    """U·A·V = S，U、V 幺模，对角元非负且依次整除"""
    rng = random.Random(2024)
    for _ in range(1000):
        rows = random_integer_matrix(rng)
        A = IntegerMatrix.from_rows(rows)
        U, S, V = smith_normal_form(A)
        assert U @ A @ V == S
        assert abs(sympy.Matrix(U.tolist()).det()) == 1
        assert abs(sympy.Matrix(V.tolist()).det()) == 1
        data = S.tolist()
        for i, row in enumerate(data):
            for j, v in enumerate(row):
                if i != j:
                    assert v == 0
        diag = [d for d in S.diagonal() if d]
        assert all(d > 0 for d in diag)
        assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
        assert all(d == 0 for d in S.diagonal()[len(diag):])


def test_smith_invariants_match_determinantal_divisors():
    rng = random.Random(99)
    for _ in range(200):
        rows = random_integer_matrix(rng, max_dim=3)
        _, S, _ = smith_normal_form(IntegerMatrix.from_rows(rows))
        assert [d for d in S.diagonal() if d] == determinantal_invariants(rows)


def test_quotient_group():
    # ℤ³ / ⟨(2,0,0), (0,4,0)⟩ = Z × Z/2 × Z/4
    G = quotient_group(IntegerMatrix.from_rows([[2, 0, 0], [0, 4, 0]]))
    assert G == AbelianGroupPresentation(1, (2, 4))
    assert str(G) == "Z × Z/2 × Z/4"
    assert G.order is None
    assert quotient_group(IntegerMatrix.from_rows([], cols=2)).free_rank == 2


def test_presentation_from_orders():
    assert AbelianGroupPresentation.from_orders([2, 3]).invariants == (6,)
    assert AbelianGroupPresentation.from_orders([2, 4, 2]).invariants == (2, 2, 4)
    assert AbelianGroupPresentation.from_orders([1, 1]).is_trivial()
    assert str(AbelianGroupPresentation()) == "1"
    assert AbelianGroupPresentation.from_orders([2, 2, 2]).order == 8


def test_solve_modular_halving():
    """2x ≡ 1/2 (mod 1) 恰有两个解 1/4 与 3/4"""
    echelon = LatticeEchelon(1)
    assert echelon.add({0: 2}, Fraction(1, 2))
    sol = solve_modular(echelon)
    assert sol.torsion == (2,)
    assert sol.free_rank == 0
    assert sorted(s[0] for s in sol.solutions()) == [Fraction(1, 4), Fraction(3, 4)]


def test_solve_modular_inconsistent():
    echelon = LatticeEchelon(2)
    assert echelon.add({0: 1, 1: 1}, Fraction(0))
    assert echelon.add({0: 2}, Fraction(0))
    assert not echelon.add({0: 1, 1: 1}, Fraction(1, 2), origin="冲突")
    assert echelon.witness == "冲突"
    assert solve_modular(echelon) is None


def test_solve_modular_random_systems():
    """每个枚举出的解都满足方程组，且互不相同"""
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(1, 4)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(1, 4))]
        x0 = [Fraction(rng.randint(0, 11), 12) for _ in range(n)]
        echelon = LatticeEchelon(n)
        beta = []
        for row in rows:
            b = sum((a * x for a, x in zip(row, x0)), Fraction(0)) % 1
            beta.append(b)
            assert echelon.add({k: a for k, a in enumerate(row)}, b)
        sol = solve_modular(echelon)
        assert sol is not None
        found = set()
        for s in sol.solutions():
            for row, b in zip(rows, beta):
                assert sum((a * x for a, x in zip(row, s)), Fraction(0)) % 1 == b
            found.add(tuple(s))
        assert len(found) == sol.torsion_count


def test_inverse_and_rank():
    z = CTX.root(1)
    M = ExactMatrix.from_rows(CTX, [[1, z], [z.conjugate(), 2]])
    assert (M @ M.inverse()).is_identity()
    assert M.rank() == 2
    singular = ExactMatrix.from_rows(CTX, [[1, z], [z.conjugate(), 1]])
    assert singular.rank() == 1
    with pytest.raises(LinalgError):
        singular.inverse()


def test_nullspace_and_solve():
    M = ExactMatrix.from_rows(CTX, [[1, 2, 3], [2, 4, 6]])
    reduced, pivots = rref(M)
    assert pivots == [0]
    basis = rref_nullspace(M)
    assert len(basis) == 2
    for v in basis:
        assert (M @ v).is_zero()
    sol = solve_linear(M, [1, 2])
    assert sol.free_count == 2
    assert M @ sol.particular == ExactMatrix.column(CTX, [1, 2])
    assert solve_linear(M, [1, 3]) is None


def test_solve_unique():
    A = ExactMatrix.from_rows(CTX, [[2, 0], [0, CTX.root(2)]])
    B = ExactMatrix.from_rows(CTX, [[4], [CTX.root(4)]])
    assert solve_unique(A, B) == ExactMatrix.from_rows(CTX, [[2], [CTX.root(2)]])


def test_kron_block_and_vec():
    A = ExactMatrix.from_rows(CTX, [[1, 2], [3, 4]])
    I = ExactMatrix.identity(CTX, 2)
    K = A.kron(I)
    assert K.shape == (4, 4)
    assert K.data[2, 0] == 3
    D = block_diagonal(CTX, [A, I])
    assert D.data[2, 2] == 1 and D.data[0, 3] == 0
    assert ExactMatrix.unvec(CTX, A.vec(), 2, 2) == A


def test_proportionality():
    z = CTX.root(3)
    A = ExactMatrix.from_rows(CTX, [[1, 0], [0, 2]])
    assert A.scale(z).proportionality(A) == z
    assert A.proportionality(ExactMatrix.identity(CTX, 2)) is None
    assert ExactMatrix.scalar(CTX, 5, 3).scalar_multiple_of_identity() == 5


def test_dual_basis():
    """S_i⁺ S_j = δ_ij"""
    maps = [
        ExactMatrix.from_rows(CTX, [[1], [0], [0], [1]]),
        ExactMatrix.from_rows(CTX, [[1], [0], [0], [-1]]),
    ]
    duals = dual_basis(maps)
    for i, D in enumerate(duals):
        for j, S in enumerate(maps):
            assert (D @ S).data[0, 0] == (1 if i == j else 0)
    with pytest.raises(LinalgError):
        dual_basis([maps[0], maps[0].scale(2)])


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
