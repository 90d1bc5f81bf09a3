"""
群代数层面的独立验证

把张量结构 {J^{xy}_z} 组装成 Ω = Σ ω(g,h) g⊗h ∈ ℂ[G]⊗ℂ[G]，然后直接在群代数里
检查余循环恒等式、共轭不变性、余单位性与酉性。这里只依赖分圆数与矩阵原语，
不使用求解器的任何中间结果。
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from cyclotomic import CycloContext, CycloNumber, common_context, make_context, parse_number
from formats import CocycleSpec
from groups_reps import FiniteGroup, IntertwinerBasis, Irrep, intertwiner_basis
from linalg import ExactMatrix, LatticeEchelon, LinalgError, solve_modular

logger = logging.getLogger(__name__)

Channel = Tuple[str, str, str]
BasisLookup = Callable[[str, str, str], IntertwinerBasis]


class VerificationError(ValueError):
    """验证所需的数据不完整或不一致"""


@dataclass
class GroupCocycle:
    """Ω = Σ_{g,h} values[g][h]·g⊗h"""

    group: FiniteGroup
    ctx: CycloContext
    values: List[List[CycloNumber]]

    def __call__(self, g: int, h: int) -> CycloNumber:
        return self.values[g][h]

    def support(self) -> Iterator[Tuple[int, int, CycloNumber]]:
        for g, row in enumerate(self.values):
            for h, v in enumerate(row):
                if not v.is_zero():
                    yield g, h, v

    def embed(self, ctx: CycloContext) -> "GroupCocycle":
        if ctx is self.ctx:
            return self
        return GroupCocycle(self.group, ctx, [[v.embed(ctx) for v in row] for row in self.values])

    def __eq__(self, other):
        if not isinstance(other, GroupCocycle):
            return NotImplemented
        if other.group is not self.group:
            return False
        ctx = common_context(self.ctx.conductor, other.ctx.conductor)
        a, b = self.embed(ctx), other.embed(ctx)
        return all(x == y for ra, rb in zip(a.values, b.values) for x, y in zip(ra, rb))


def _from_dict(G: FiniteGroup, ctx: CycloContext, entries: Mapping[Tuple[int, int], CycloNumber]) -> GroupCocycle:
    values = [[ctx.zero] * G.order for _ in range(G.order)]
    for (g, h), v in entries.items():
        values[g][h] = v
    return GroupCocycle(G, ctx, values)


def trivial_cocycle(G: FiniteGroup, ctx: Optional[CycloContext] = None) -> GroupCocycle:
    """1⊗1"""
    ctx = ctx or make_context(1)
    return _from_dict(G, ctx, {(G.identity, G.identity): ctx.one})


def cocycle_from_spec(spec: CocycleSpec, G: FiniteGroup) -> GroupCocycle:
    if spec.group != G.name:
        raise VerificationError(f"余循环文件属于群 {spec.group}，当前群为 {G.name}")
    ctx = make_context(spec.conductor)
    entries = {}
    for g, h, text in spec.entries:
        if not (0 <= g < G.order and 0 <= h < G.order):
            raise VerificationError(f"群元素下标 ({g}, {h}) 越界")
        entries[(g, h)] = parse_number(text, ctx)
    return _from_dict(G, ctx, entries)


# ---- 组装与分解 ----

class _Workspace:
    """把表示与交织子基统一嵌入到同一个分圆域"""

    def __init__(self, G: FiniteGroup, irreps: Sequence[Irrep], ctx: CycloContext,
                 bases: Optional[BasisLookup]):
        self.G = G
        self.ctx = ctx
        self.irreps = {R.label: R.embed(ctx) if R.ctx is not ctx else R for R in irreps}
        self._source = {R.label: R for R in irreps}
        self._lookup = bases
        self._bases: Dict[Channel, IntertwinerBasis] = {}

    def basis(self, x: str, y: str, z: str) -> IntertwinerBasis:
        key = (x, y, z)
        if key not in self._bases:
            if self._lookup is not None:
                B = self._lookup(x, y, z)
            else:
                src = self._source
                B = intertwiner_basis(self.G, src[x], src[y], src[z])
            self._bases[key] = IntertwinerBasis(x, y, z, [S.embed(self.ctx) for S in B.maps],
                                                [S.embed(self.ctx) for S in B.duals])
        return self._bases[key]


def _omega_block(ws: _Workspace, x: str, y: str, blocks: Mapping[str, ExactMatrix]) -> ExactMatrix:
    """Ω^{(x,y)} = Σ_{z,i,j} (J^{xy}_z)_{ij} S_i S_j⁺"""
    dim = ws.irreps[x].dim * ws.irreps[y].dim
    out = ExactMatrix.zeros(ws.ctx, dim, dim)
    for z, J in blocks.items():
        B = ws.basis(x, y, z)
        if J.shape != (len(B), len(B)):
            raise VerificationError(f"J^{x}{y}_{z} 的形状 {J.shape} 与 Mor({z}, {x}⊗{y}) 的维数 {len(B)} 不符")
        for i, Si in enumerate(B.maps):
            for j, Sj_dual in enumerate(B.duals):
                c = J.data[i, j]
                if not c.is_zero():
                    out = out + (Si @ Sj_dual).scale(c)
    return out


def assemble_group_cocycle(G: FiniteGroup, irreps: Sequence[Irrep], structure,
                           bases: Optional[BasisLookup] = None) -> GroupCocycle:
    """ω(g,h) = Σ_{x,y} (d_x d_y / |G|²)·tr((x(g⁻¹)⊗y(h⁻¹))·Ω^{(x,y)})

    structure 只需提供 ctx 与 channels；bases 缺省时按行最简形重新计算交织子基。
    """
    ctx = common_context(structure.ctx.conductor, irreps[0].ctx.conductor)
    ws = _Workspace(G, irreps, ctx, bases)
    by_pair: Dict[Tuple[str, str], Dict[str, ExactMatrix]] = {}
    for (x, y, z), J in structure.channels.items():
        by_pair.setdefault((x, y), {})[z] = J.embed(ctx)
    n = G.order
    acc = np.empty((n, n), dtype=object)
    acc.fill(ctx.zero)
    for (x, y), blocks in by_pair.items():
        X, Y = ws.irreps[x], ws.irreps[y]
        dx, dy = X.dim, Y.dim
        omega = _omega_block(ws, x, y, blocks)
        if omega.is_zero():
            continue
        # W[i, j, k, l] = Ω[(j,l), (i,k)]，于是 tr((A⊗B)Ω) = Σ A_ij B_kl W[i,j,k,l]
        W = omega.data.reshape(dx, dy, dx, dy).transpose(2, 0, 3, 1)
        coeff = Fraction(dx * dy, n * n)
        for h in range(n):
            B = Y(G.inverse[h]).data
            C = np.tensordot(W, B, axes=([2, 3], [0, 1]))
            for g in range(n):
                value = np.sum(X(G.inverse[g]).data * C)
                if not value.is_zero():
                    acc[g, h] = acc[g, h] + value * coeff
    return GroupCocycle(G, ctx, [list(row) for row in acc])


def decompose(G: FiniteGroup, irreps: Sequence[Irrep], omega: GroupCocycle,
              bases: Optional[BasisLookup] = None) -> Dict[Channel, ExactMatrix]:
    """J^{xy}_z 的 (i,j) 元 = S_i⁺·Ω^{(x,y)}·S_j（Schur 引理下为标量）"""
    ctx = common_context(omega.ctx.conductor, irreps[0].ctx.conductor)
    omega = omega.embed(ctx)
    ws = _Workspace(G, irreps, ctx, bases)
    support = list(omega.support())
    labels = [R.label for R in irreps]
    channels: Dict[Channel, ExactMatrix] = {}
    for x in labels:
        X = ws.irreps[x]
        for y in labels:
            Y = ws.irreps[y]
            targets = [z for z in labels if _multiplicity(ws, x, y, z)]
            if not targets:
                continue
            partial: Dict[int, ExactMatrix] = {}
            for g, h, v in support:
                term = Y(h).scale(v)
                partial[g] = partial[g] + term if g in partial else term
            block = ExactMatrix.zeros(ctx, X.dim * Y.dim, X.dim * Y.dim)
            for g, Yg in partial.items():
                block = block + X(g).kron(Yg)
            for z in targets:
                B = ws.basis(x, y, z)
                channels[(x, y, z)] = ExactMatrix.from_rows(ctx, [
                    [(Si_dual @ block @ Sj).data[0, 0] for Sj in B.maps] for Si_dual in B.duals
                ])
    return channels


@dataclass
class _Blocks:
    ctx: CycloContext
    channels: Dict[Channel, ExactMatrix]


def inverse(G: FiniteGroup, irreps: Sequence[Irrep], omega: GroupCocycle,
            bases: Optional[BasisLookup] = None) -> GroupCocycle:
    """Ω⁻¹：逐通道求逆后重新组装"""
    blocks = decompose(G, irreps, omega, bases)
    try:
        inverted = {ch: J.inverse() for ch, J in blocks.items()}
    except LinalgError:
        raise VerificationError("Ω 在某个通道上不可逆")
    ctx = next(iter(inverted.values())).ctx
    return assemble_group_cocycle(G, irreps, _Blocks(ctx, inverted), bases)


def _multiplicity(ws: _Workspace, x: str, y: str, z: str) -> int:
    X, Y, Z = ws.irreps[x], ws.irreps[y], ws.irreps[z]
    if Z.dim > X.dim * Y.dim:
        return 0
    total = ws.ctx.zero
    for g in range(ws.G.order):
        total = total + X(g).trace() * Y(g).trace() * Z(g).trace().conjugate()
    return int((total / ws.G.order).as_fraction())


# ---- 群代数运算 ----

def _accumulate(ctx: CycloContext, terms) -> Dict[tuple, CycloNumber]:
    out: Dict[tuple, CycloNumber] = {}
    for key, value in terms:
        out[key] = out[key] + value if key in out else value
    return {k: v for k, v in out.items() if not v.is_zero()}


def multiply(a: GroupCocycle, b: GroupCocycle) -> GroupCocycle:
    """ℂ[G]⊗ℂ[G] 中的乘积 (g⊗h)(g'⊗h') = gg'⊗hh'"""
    if a.group is not b.group:
        raise VerificationError("两个余循环不在同一个群上")
    G = a.group
    ctx = common_context(a.ctx.conductor, b.ctx.conductor)
    a, b = a.embed(ctx), b.embed(ctx)
    mul = G.mul
    left, right = list(a.support()), list(b.support())
    entries = _accumulate(ctx, (
        ((mul[g][g2], mul[h][h2]), v * w) for g, h, v in left for g2, h2, w in right
    ))
    return _from_dict(G, ctx, entries)


def star(omega: GroupCocycle) -> GroupCocycle:
    """Ω* = Σ conj(ω(g,h))·g⁻¹⊗h⁻¹"""
    G = omega.group
    inv = G.inverse
    return _from_dict(G, omega.ctx, {(inv[g], inv[h]): v.conjugate() for g, h, v in omega.support()})


def coboundary(G: FiniteGroup, irreps: Sequence[Irrep], gauge: Mapping[str, CycloNumber]) -> GroupCocycle:
    """δ(h) = (h⊗h)·Δ(h⁻¹)，h = Σ_x c_x·e_x 为中心元，e_x 为中心幂等元"""
    ctx = irreps[0].ctx
    for c in gauge.values():
        ctx = common_context(ctx.conductor, c.ctx.conductor)
    n = G.order
    h = [ctx.zero] * n
    h_inv = [ctx.zero] * n
    for R in irreps:
        c = gauge[R.label].embed(ctx)
        c_inv = c.inverse()
        for g in range(n):
            weight = R(g).trace().conjugate().embed(ctx) * Fraction(R.dim, n)
            h[g] = h[g] + c * weight
            h_inv[g] = h_inv[g] + c_inv * weight
    mul, inv = G.mul, G.inverse
    entries = {}
    for p in range(n):
        for q in range(n):
            total = ctx.zero
            for k in range(n):
                if h_inv[k].is_zero():
                    continue
                ki = inv[k]
                total = total + h[mul[p][ki]] * h[mul[q][ki]] * h_inv[k]
            if not total.is_zero():
                entries[(p, q)] = total
    return _from_dict(G, ctx, entries)


# ---- 检查 ----

def left_cocycle_defect(omega: GroupCocycle) -> Optional[Tuple[int, int, int]]:
    """(1⊗Ω)(id⊗Δ)(Ω) 与 (Ω⊗1)(Δ⊗id)(Ω) 第一个不同的系数位置 (a, b, c)；相等时返回 None"""
    mul = omega.group.mul
    terms = list(omega.support())
    lhs = _accumulate(omega.ctx, (
        ((g, mul[g2][h], mul[h2][h]), v * w) for g, h, v in terms for g2, h2, w in terms
    ))
    rhs = _accumulate(omega.ctx, (
        ((mul[g2][g], mul[h2][g], h), v * w) for g, h, v in terms for g2, h2, w in terms
    ))
    zero = omega.ctx.zero
    for key in sorted(set(lhs) | set(rhs)):
        if lhs.get(key, zero) != rhs.get(key, zero):
            return key
    return None


def check_left_cocycle(omega: GroupCocycle) -> bool:
    return left_cocycle_defect(omega) is None


def check_right_cocycle(omega: GroupCocycle) -> bool:
    """(Δ⊗id)(X)(X⊗1) = (id⊗Δ)(X)(1⊗X)"""
    mul = omega.group.mul
    terms = list(omega.support())
    lhs = _accumulate(omega.ctx, (
        ((mul[g][g2], mul[g][h2], h), v * w) for g, h, v in terms for g2, h2, w in terms
    ))
    rhs = _accumulate(omega.ctx, (
        ((g, mul[h][g2], mul[h][h2]), v * w) for g, h, v in terms for g2, h2, w in terms
    ))
    return lhs == rhs


def check_right_cocycle_via_star(omega: GroupCocycle) -> bool:
    """Ω 满足左余循环恒等式时，Ω* 满足右余循环恒等式"""
    return check_right_cocycle(star(omega))


def check_invariance(omega: GroupCocycle) -> bool:
    """Ω 与 Δ(ℂ[G]) 交换：ω(k⁻¹gk, k⁻¹hk) = ω(g,h)"""
    G = omega.group
    for k in G.generators.values():
        for g, h, v in omega.support():
            if omega(G.conjugate(k, g), G.conjugate(k, h)) != v:
                return False
    return True


def check_counital(omega: GroupCocycle) -> bool:
    """(ε⊗id)(Ω) = (id⊗ε)(Ω) = 1"""
    G = omega.group
    n = G.order
    ctx = omega.ctx
    for a in range(n):
        expected = ctx.one if a == G.identity else ctx.zero
        column = sum((omega(g, a) for g in range(n)), ctx.zero)
        row = sum((omega(a, h) for h in range(n)), ctx.zero)
        if column != expected or row != expected:
            return False
    return True


def check_unitary(omega: GroupCocycle) -> bool:
    """ΩΩ* = Ω*Ω = 1⊗1"""
    one = trivial_cocycle(omega.group, omega.ctx)
    adjoint = star(omega)
    return multiply(omega, adjoint) == one and multiply(adjoint, omega) == one


def cohomologous(G: FiniteGroup, irreps: Sequence[Irrep], omega1: GroupCocycle, omega2: GroupCocycle,
                 bases: Optional[BasisLookup] = None) -> Optional[Dict[str, CycloNumber]]:
    """若存在中心可逆元 h 使 Ω₂ = (h⊗h)·Ω₁·Δ(h⁻¹)，返回 h 在各不可约表示上的标量

    比值要求是单位根；见证在群代数中复算一次。
    """
    J1 = decompose(G, irreps, omega1, bases)
    J2 = decompose(G, irreps, omega2, bases)
    ctx = common_context(*(M.ctx.conductor for M in list(J1.values()) + list(J2.values())))
    labels = [R.label for R in irreps]
    pos = {label: i for i, label in enumerate(labels)}
    echelon = LatticeEchelon(len(labels))
    for (x, y, z), A in J1.items():
        try:
            ratio = (J2[(x, y, z)].embed(ctx) @ A.embed(ctx).inverse()).scalar_multiple_of_identity()
        except LinalgError:
            raise VerificationError(f"通道 {(x, y, z)} 不可逆")
        if ratio is None:
            return None
        beta = ctx.angle_of(ratio)
        if beta is None:
            raise VerificationError(f"通道 {(x, y, z)} 上的比值不是单位根")
        row: Dict[int, int] = {}
        for label, sign in ((x, 1), (y, 1), (z, -1)):
            row[pos[label]] = row.get(pos[label], 0) + sign
        if not echelon.add(row, beta):
            return None
    solution = solve_modular(echelon)
    if solution is None:
        return None
    conductor = ctx.conductor
    for q in solution.particular:
        conductor = conductor * q.denominator // math.gcd(conductor, q.denominator)
    wctx = make_context(conductor)
    witness = {label: wctx.from_angle(solution.particular[i]) for label, i in pos.items()}
    if multiply(omega1, coboundary(G, irreps, witness)) != omega2:
        raise VerificationError("规范见证在群代数中复算失败")
    return witness


def certify_structure(G: FiniteGroup, irreps: Sequence[Irrep], structure,
                      bases: Optional[BasisLookup] = None, unitary: bool = False) -> Dict[str, bool]:
    omega = assemble_group_cocycle(G, irreps, structure, bases)
    checks = {
        "left_cocycle": check_left_cocycle(omega),
        "right_cocycle_star": check_right_cocycle_via_star(omega),
        "invariance": check_invariance(omega),
        "counital": check_counital(omega),
    }
    if unitary:
        checks["unitary"] = check_unitary(omega)
    logger.info("%s: 群代数校验 %s", G.name, ", ".join(f"{k}={'✓' if v else '✗'}" for k, v in checks.items()))
    return checks
