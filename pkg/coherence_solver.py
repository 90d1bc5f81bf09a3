"""
单位函子上张量结构的一致性方程与不变 2-上同调群

流程：
1. build_constraints：登记未知通道 J^{xy}_z，把每个四元组 (x,y,z;w) 的一致性方程
   R·E = E·L 拆成单项式关系（全部通道为标量）或矩阵关系
2. branch_enumerate：沿"单矩阵因子"的四元组在矩阵未知量之间传递形状，
   回路给出对易约束 X·A = κ·A·X，按 κ^d = 1 的单位根分支
3. solve_branch：形状固定后每个块对给出 l_u / r_v = κ，在 ℚ/ℤ 上用 Smith 标准形求解
4. classify：代表元两两做上同调比较，乘法表给出群结构
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

import cocycle_verify
import config
from cyclotomic import CycloContext, CycloNumber, common_context, make_context
from formats import TensorStructureSpec, parse_matrix
from fusion_data import FusionError, Quadruple, RepresentationCategory, Tree
from linalg import (
    AbelianGroupPresentation, ExactMatrix, IntegerMatrix, LatticeEchelon, LinalgError,
    block_diagonal, quotient_group, rref_nullspace, solve_modular,
)

logger = logging.getLogger(__name__)

Channel = Tuple[str, str, str]


class SolverError(ValueError):
    """求解过程中的错误"""


class UnsupportedCouplingError(SolverError):
    """块之间的比例常数不是单位根，无法写成 ℚ/ℤ 上的方程"""


class UnsupportedMultiplicityError(SolverError):
    """矩阵未知量的形状在全部约束后仍有两维以上的自由度"""


class ClassificationError(SolverError):
    """代表元无法组成群（乘积找不到对应类，或重复）"""


# ---- 张量结构 ----

class TensorStructure:
    """单位函子上的张量结构：每个非零通道 (x, y, z) 一个 N×N 矩阵"""

    def __init__(self, ctx: CycloContext, channels: Dict[Channel, ExactMatrix]):
        self.ctx = ctx
        self.channels = dict(channels)

    def __getitem__(self, channel: Channel) -> ExactMatrix:
        return self.channels[channel]

    def __len__(self):
        return len(self.channels)

    @classmethod
    def identity(cls, category) -> "TensorStructure":
        return cls(category.ctx, {ch: ExactMatrix.identity(category.ctx, category.fusion.N(*ch))
                                  for ch in all_channels(category)})

    def embed(self, ctx: CycloContext) -> "TensorStructure":
        if ctx is self.ctx:
            return self
        return TensorStructure(ctx, {ch: J.embed(ctx) for ch, J in self.channels.items()})

    def multiply(self, other: "TensorStructure") -> "TensorStructure":
        """Ω₁·Ω₂ 逐通道对应 J₁·J₂"""
        if set(self.channels) != set(other.channels):
            raise SolverError("两个张量结构的通道不一致")
        ctx = common_context(self.ctx.conductor, other.ctx.conductor)
        a, b = self.embed(ctx), other.embed(ctx)
        return TensorStructure(ctx, {ch: a[ch] @ b[ch] for ch in a.channels})

    def inverse(self) -> "TensorStructure":
        return TensorStructure(self.ctx, {ch: J.inverse() for ch, J in self.channels.items()})

    def apply_gauge(self, gauge: Dict[str, CycloNumber]) -> "TensorStructure":
        """J^{xy}_z ↦ c_x c_y / c_z · J^{xy}_z，即 Ω ↦ (h⊗h)·Ω·Δ(h⁻¹)"""
        ctx = self.ctx
        for c in gauge.values():
            ctx = common_context(ctx.conductor, c.ctx.conductor)
        base = self.embed(ctx)
        c = {label: value.embed(ctx) for label, value in gauge.items()}
        return TensorStructure(ctx, {
            (x, y, z): J.scale(c[x] * c[y] / c[z]) for (x, y, z), J in base.channels.items()
        })

    def is_normalized(self, unit: str) -> bool:
        return all(J.is_identity() for (x, y, _), J in self.channels.items() if unit in (x, y))


def all_channels(category) -> List[Channel]:
    fusion = category.fusion
    return [(x, y, z) for x in fusion.labels for y in fusion.labels for z in fusion.products(x, y)]


def structure_from_spec(spec: TensorStructureSpec, category) -> TensorStructure:
    """读入的张量结构：缺省的含单位元通道取单位阵，其余通道必须给全"""
    ctx = common_context(spec.conductor, category.ctx.conductor)
    channels = {}
    for ch in all_channels(category):
        n = category.fusion.N(*ch)
        if ch in spec.channels:
            J = parse_matrix(spec.channels[ch], ctx)
            if J.shape != (n, n):
                raise SolverError(f"通道 {ch} 的形状应为 {n}×{n}，得到 {J.shape}")
            channels[ch] = J
        elif category.unit in ch[:2]:
            channels[ch] = ExactMatrix.identity(ctx, n)
        else:
            raise SolverError(f"张量结构缺少通道 {ch}")
    extra = set(spec.channels) - set(channels)
    if extra:
        raise SolverError(f"张量结构含有不存在的通道: {sorted(extra)[0]}")
    return TensorStructure(ctx, channels)


# ---- 约束系统 ----

@dataclass
class UnknownRegistry:
    """x、y 都不是单位元的通道；下标按 (x, y, z) 的标签顺序"""

    channels: List[Channel]
    dims: Dict[Channel, int]
    unit: str
    index: Dict[Channel, int] = field(init=False)

    def __post_init__(self):
        self.index = {ch: k for k, ch in enumerate(self.channels)}

    def __len__(self):
        return len(self.channels)

    def is_unit_channel(self, ch: Channel) -> bool:
        return self.unit in ch[:2]

    def is_matrix(self, ch: Channel) -> bool:
        return self.dims.get(ch, 1) > 1

    def matrix_unknowns(self) -> List[Channel]:
        return [ch for ch in self.channels if self.dims[ch] > 1]

    def exponents(self, plus: Sequence[Channel], minus: Sequence[Channel]) -> Dict[int, int]:
        row: Dict[int, int] = {}
        for sign, group in ((1, plus), (-1, minus)):
            for ch in group:
                if ch in self.index:
                    k = self.index[ch]
                    row[k] = row.get(k, 0) + sign
        return {k: v for k, v in row.items() if v}


@dataclass
class Block:
    """一组同中间标签的融合树：first ⊗ second 作用在 [start, start + size) 上"""

    label: str
    first: Channel
    second: Channel
    start: int
    size: int

    @property
    def span(self) -> slice:
        return slice(self.start, self.start + self.size)


@dataclass
class MonomialRelation:
    """Π_k J_k^{e_k} = constant；coefficient 是连接两棵树的 F 元"""

    quadruple: Quadruple
    exponents: Dict[int, int]
    constant: CycloNumber
    coefficient: CycloNumber


@dataclass
class MatrixRelation:
    """R·E = E·L，E = Fᵀ（行为右树，列为左树）"""

    quadruple: Quadruple
    E: ExactMatrix
    left_blocks: List[Block]
    right_blocks: List[Block]


@dataclass
class ConstraintSystem:
    category: object
    registry: UnknownRegistry
    monomials: List[MonomialRelation]
    matrix_relations: List[MatrixRelation]

    @property
    def ctx(self) -> CycloContext:
        return self.category.ctx

    def gauge_labels(self) -> List[str]:
        return [x for x in self.category.labels if x != self.registry.unit]

    def gauge_matrix(self) -> IntegerMatrix:
        """D[x, k]：规范变换 c_x 在第 k 个未知量上的指数"""
        labels = self.gauge_labels()
        pos = {x: i for i, x in enumerate(labels)}
        data = np.zeros((len(labels), len(self.registry)), dtype=object)
        for k, (x, y, z) in enumerate(self.registry.channels):
            for label, sign in ((x, 1), (y, 1), (z, -1)):
                if label in pos:
                    data[pos[label], k] += sign
        return IntegerMatrix(data)


def _blocks(trees: Sequence[Tree], channel_pair) -> List[Block]:
    blocks: List[Block] = []
    for pos, (label, _, _) in enumerate(trees):
        if blocks and blocks[-1].label == label:
            blocks[-1].size += 1
        else:
            first, second = channel_pair(label)
            blocks.append(Block(label, first, second, pos, 1))
    return blocks


def build_constraints(category) -> ConstraintSystem:
    """登记未知量并为每个不含单位元的四元组生成关系"""
    fusion = category.fusion
    unit = fusion.unit
    ctx = category.ctx
    non_unit = [x for x in fusion.labels if x != unit]
    channels = [(x, y, z) for x in non_unit for y in non_unit for z in fusion.products(x, y)]
    registry = UnknownRegistry(channels, {ch: fusion.N(*ch) for ch in channels}, unit)
    monomials: List[MonomialRelation] = []
    matrix_relations: List[MatrixRelation] = []
    for x, y, z in itertools.product(non_unit, repeat=3):
        for w in fusion.labels:
            if not fusion.hom_dim(x, y, z, w):
                continue
            key = (x, y, z, w)
            try:
                F = category.f_matrix(*key)
            except FusionError as e:
                raise SolverError(f"四元组 {key} 的 F 矩阵不可用: {e}")
            E = F.matrix.T
            left = _blocks(F.rows, lambda u: ((x, y, u), (u, z, w)))
            right = _blocks(F.cols, lambda v: ((y, z, v), (x, v, w)))
            scalar = all(
                not registry.is_matrix(ch) for b in left + right for ch in (b.first, b.second)
            )
            if not scalar:
                matrix_relations.append(MatrixRelation(key, E, left, right))
                continue
            for rb in right:
                for lb in left:
                    coeff = E.data[rb.start, lb.start]
                    if coeff.is_zero():
                        continue
                    exps = registry.exponents([lb.first, lb.second], [rb.first, rb.second])
                    monomials.append(MonomialRelation(key, exps, ctx.one, coeff))
    logger.info(
        "%s: 未知通道 %d 个（矩阵型 %d 个），单项式关系 %d 条，矩阵关系 %d 条",
        category.name, len(registry), len(registry.matrix_unknowns()), len(monomials), len(matrix_relations),
    )
    return ConstraintSystem(category, registry, monomials, matrix_relations)


# ---- 分支枚举 ----

@dataclass
class BranchSolution:
    """一个分支在 ℚ/ℤ 上的解：K = ker(规范映射) / 关系格 的结构及代表元"""

    torsion: Tuple[int, ...]
    free_rank: int
    gauge_rank: int
    representatives: List[TensorStructure]

    @property
    def group(self) -> AbelianGroupPresentation:
        return AbelianGroupPresentation.from_orders(self.torsion, self.free_rank)


@dataclass
class Candidate:
    """一组矩阵未知量的形状（相差标量），附带回路上读出的特征 ψ"""

    index: int
    shapes: Dict[Channel, ExactMatrix]
    psi: List[Tuple[str, CycloNumber]] = field(default_factory=list)
    generators: List[str] = field(default_factory=list)
    alive: bool = True
    reason: str = ""
    solution: Optional[BranchSolution] = None

    def kill(self, reason: str):
        self.alive = False
        self.reason = reason
        logger.info("候选分支 %d 淘汰: %s", self.index, reason)


@dataclass
class _Edge:
    relation: MatrixRelation
    src: Channel
    dst: Channel

    @property
    def E(self) -> ExactMatrix:
        return self.relation.E


@dataclass
class _Leaf:
    shapes: Dict[Channel, ExactMatrix]
    psi: List[Tuple[str, CycloNumber]]
    reason: str = ""


def _transport_edges(system: ConstraintSystem) -> List[_Edge]:
    """左右各只有一个块、每个块恰有一个矩阵因子的矩阵关系：A_L ∝ E⁻¹·A_R·E"""
    reg = system.registry
    edges = []
    for rel in system.matrix_relations:
        if len(rel.left_blocks) != 1 or len(rel.right_blocks) != 1:
            continue
        lb, rb = rel.left_blocks[0], rel.right_blocks[0]
        left = [ch for ch in (lb.first, lb.second) if reg.is_matrix(ch)]
        right = [ch for ch in (rb.first, rb.second) if reg.is_matrix(ch)]
        if len(left) == 1 and len(right) == 1 and reg.dims[left[0]] == reg.dims[right[0]]:
            edges.append(_Edge(rel, right[0], left[0]))
    return edges


def _components(nodes: List[Channel], edges: List[_Edge]) -> List[List[Channel]]:
    parent = {n: n for n in nodes}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in edges:
        ra, rb = find(e.src), find(e.dst)
        if ra != rb:
            parent[max(ra, rb, key=nodes.index)] = min(ra, rb, key=nodes.index)
    groups: Dict[Channel, List[Channel]] = {}
    for n in nodes:
        groups.setdefault(find(n), []).append(n)
    return [groups[r] for r in sorted(groups, key=nodes.index)]


def _restrict(basis: List[ExactMatrix], X: ExactMatrix, kappa: CycloNumber) -> List[ExactMatrix]:
    """span(basis) 中满足 X·A = κ·A·X 的子空间"""
    ctx = X.ctx
    cols = [(X @ B - (B @ X).scale(kappa)).vec() for B in basis]
    M = ExactMatrix(ctx, np.array(cols, dtype=object).T.copy())
    out = []
    for v in rref_nullspace(M):
        acc = ExactMatrix.zeros(ctx, X.rows, X.cols)
        for c, B in zip(v.data[:, 0], basis):
            if not c.is_zero():
                acc = acc + B.scale(c)
        out.append(acc)
    return out


def _normalize_shape(S: ExactMatrix, gram: ExactMatrix) -> ExactMatrix:
    """首个非零元化为 1；若 S*·G·S = r·G 且 r 是有理平方数，再除以 √r"""
    lead = next(z for z in S.data.flat if not z.is_zero())
    S = S.scale(lead.inverse())
    r = (S.H @ gram @ S).proportionality(gram)
    if r is not None and r.is_rational():
        q = r.as_fraction()
        if q > 0:
            p, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
            if p * p == q.numerator and d * d == q.denominator:
                S = S.scale(Fraction(d, p))
    return S


def _acting_label(system: ConstraintSystem, key: Quadruple) -> Optional[str]:
    fusion = system.category.fusion
    x, _, z, _ = key
    if x != fusion.unit and fusion.is_invertible(x):
        return f"{x}⊗-"
    if z != fusion.unit and fusion.is_invertible(z):
        return f"-⊗{z}"
    return None


def _enumerate_component(system: ConstraintSystem, nodes: List[Channel], edges: List[_Edge]) -> List[_Leaf]:
    ctx = system.ctx
    root = nodes[0]
    d = system.registry.dims[root]
    member = set(nodes)
    local = [e for e in edges if e.src in member]
    adjacency: Dict[Channel, List[int]] = {n: [] for n in nodes}
    for i, e in enumerate(local):
        adjacency[e.src].append(i)
        if e.dst != e.src:
            adjacency[e.dst].append(i)

    # 生成树：P_X 使 A_X ∝ P_X⁻¹·A_root·P_X
    P = {root: ExactMatrix.identity(ctx, d)}
    tree = set()
    queue = deque([root])
    while queue:
        node = queue.popleft()
        for i in adjacency[node]:
            e = local[i]
            if e.src in P and e.dst not in P:
                P[e.dst] = P[e.src] @ e.E
                new = e.dst
            elif e.dst in P and e.src not in P:
                P[e.src] = P[e.dst] @ e.E.inverse()
                new = e.src
            else:
                continue
            tree.add(i)
            queue.append(new)
    cycles = [(local[i], P[local[i].src] @ local[i].E @ P[local[i].dst].inverse())
              for i in range(len(local)) if i not in tree]
    logger.debug("分量 %s: %d 个节点，%d 条回路约束", root, len(nodes), len(cycles))

    states: List[Tuple[List[ExactMatrix], str]] = []
    basis = []
    for i in range(d):
        for j in range(d):
            unit = ExactMatrix.zeros(ctx, d, d)
            unit.data[i, j] = ctx.one
            basis.append(unit)
    states.append((basis, ""))
    for _, X in cycles:
        nxt = []
        for space, dead in states:
            if dead:
                nxt.append((space, dead))
                continue
            if len(space) == 1:
                G0 = space[0]
                if (X @ G0).proportionality(G0 @ X) is None:
                    nxt.append((space, "回路约束 X·A = κ·A·X 无解"))
                else:
                    nxt.append((space, ""))
                continue
            for kappa in ctx.roots_of_unity(d):
                sub = _restrict(space, X, kappa)
                if sub:
                    nxt.append((sub, ""))
        states = nxt

    leaves = []
    for space, dead in states:
        if len(space) > 1:
            raise UnsupportedMultiplicityError(
                f"矩阵未知量 J^{{{root[0]}{root[1]}}}_{{{root[2]}}} 的形状仍有 {len(space)} 维自由度"
            )
        G0 = space[0]
        try:
            G0.inverse()
        except LinalgError:
            dead = dead or "形状矩阵不可逆"
        shapes = {}
        for node in nodes:
            S = P[node].inverse() @ G0 @ P[node]
            shapes[node] = _normalize_shape(S, system.category.channel_gram(*node))
        psi = []
        seen = set()
        for e, X in cycles:
            if e.src != root or e.dst != root:
                continue
            label = _acting_label(system, e.relation.quadruple)
            kappa = (X @ G0).proportionality(G0 @ X)
            if label and label not in seen and kappa is not None:
                seen.add(label)
                psi.append((label, kappa))
        leaves.append(_Leaf(shapes, psi, dead))
    return leaves


def _generating_labels(fusion, labels: List[str]) -> List[str]:
    """可逆标签的一组生成元：按顺序挑出不在已生成子群中的标签"""
    gens: List[str] = []
    span = {fusion.unit}
    for label in labels:
        if label in span:
            continue
        gens.append(label)
        frontier = list(span)
        while frontier:
            x = frontier.pop()
            for g in gens:
                for y in fusion.products(x, g):
                    if y not in span:
                        span.add(y)
                        frontier.append(y)
    return gens


def branch_enumerate(system: ConstraintSystem) -> List[Candidate]:
    """列出全部候选形状；每个连通分量独立分支，候选为各分量叶子的组合"""
    matrices = system.registry.matrix_unknowns()
    if not matrices:
        return [Candidate(0, {})]
    edges = _transport_edges(system)
    per_component = [_enumerate_component(system, nodes, edges) for nodes in _components(matrices, edges)]
    candidates = []
    for index, combo in enumerate(itertools.product(*per_component)):
        shapes: Dict[Channel, ExactMatrix] = {}
        psi: List[Tuple[str, CycloNumber]] = []
        reasons = []
        for leaf in combo:
            shapes.update(leaf.shapes)
            psi.extend(leaf.psi)
            if leaf.reason:
                reasons.append(leaf.reason)
        cand = Candidate(index, shapes, psi, _generating_labels(system.category.fusion, [l for l, _ in psi]))
        if reasons:
            cand.kill(reasons[0])
        candidates.append(cand)
    logger.info("%s: 候选分支 %d 个", system.category.name, len(candidates))
    return candidates


# ---- 分支求解 ----

def _factor(system: ConstraintSystem, shapes: Dict[Channel, ExactMatrix], ch: Channel) -> ExactMatrix:
    if system.registry.is_matrix(ch):
        return shapes[ch]
    return ExactMatrix.identity(system.ctx, 1)


def _structure_from_angles(system: ConstraintSystem, shapes: Dict[Channel, ExactMatrix],
                           angles: Sequence[Fraction]) -> TensorStructure:
    conductor = system.ctx.conductor
    for q in angles:
        conductor = conductor * q.denominator // math.gcd(conductor, q.denominator)
    ctx = make_context(conductor)
    reg = system.registry
    channels = {}
    for ch in all_channels(system.category):
        if reg.is_unit_channel(ch):
            channels[ch] = ExactMatrix.identity(ctx, 1)
            continue
        value = ctx.from_angle(angles[reg.index[ch]])
        if reg.is_matrix(ch):
            channels[ch] = shapes[ch].embed(ctx).scale(value)
        else:
            channels[ch] = ExactMatrix.from_rows(ctx, [[value]])
    return TensorStructure(ctx, channels)


def solve_branch(system: ConstraintSystem, candidate: Candidate) -> Optional[BranchSolution]:
    """形状固定后解 ℚ/ℤ 上的单项式方程组；分支不相容时标记淘汰并返回 None"""
    reg = system.registry
    ctx = system.ctx
    echelon = LatticeEchelon(len(reg))
    for rel in system.monomials:
        beta = ctx.angle_of(rel.constant)
        if not echelon.add(rel.exponents, beta, rel.quadruple):
            candidate.kill(f"单项式关系在 {rel.quadruple} 处不相容")
            return None
    for rel in system.matrix_relations:
        for rb in rel.right_blocks:
            R0 = _factor(system, candidate.shapes, rb.first).kron(_factor(system, candidate.shapes, rb.second))
            for lb in rel.left_blocks:
                block = ExactMatrix(ctx, rel.E.data[rb.span, lb.span].copy())
                if block.is_zero():
                    continue
                L0 = _factor(system, candidate.shapes, lb.first).kron(_factor(system, candidate.shapes, lb.second))
                kappa = (R0 @ block).proportionality(block @ L0)
                if kappa is None:
                    candidate.kill(f"{rel.quadruple} 的块 ({rb.label}, {lb.label}) 两侧不成比例")
                    return None
                beta = ctx.angle_of(kappa)
                if beta is None:
                    raise UnsupportedCouplingError(
                        f"{rel.quadruple} 的块 ({rb.label}, {lb.label}) 的比例常数 {kappa} 不是单位根"
                    )
                exps = reg.exponents([lb.first, lb.second], [rb.first, rb.second])
                if not echelon.add(exps, beta, rel.quadruple):
                    candidate.kill(f"{rel.quadruple} 的块 ({rb.label}, {lb.label}) 与已有关系矛盾")
                    return None
    modular = solve_modular(echelon)
    if modular is None:
        candidate.kill("ℚ/ℤ 方程组无解")
        return None
    gauge = system.gauge_matrix()
    gauge_rank = len(system.gauge_labels()) - quotient_group(IntegerMatrix(gauge.data.T.copy()),
                                                             len(system.gauge_labels())).free_rank
    free_rank = modular.free_rank - gauge_rank
    if free_rank < 0:
        raise SolverError(f"规范秩 {gauge_rank} 超过解空间的自由秩 {modular.free_rank}")
    representatives = [
        _structure_from_angles(system, candidate.shapes, angles) for angles in modular.solutions()
    ]
    candidate.solution = BranchSolution(modular.torsion, free_rank, gauge_rank, representatives)
    logger.info(
        "候选分支 %d 存活: 挠部 %s，自由秩 %d，规范秩 %d",
        candidate.index, modular.torsion or "1", free_rank, gauge_rank,
    )
    return candidate.solution


def gauge_stabilizer(system: ConstraintSystem) -> AbelianGroupPresentation:
    """满足 c_x c_y = c_z（对全部通道）的规范变换组成的群"""
    labels = system.gauge_labels()
    return quotient_group(IntegerMatrix(system.gauge_matrix().data.T.copy()), len(labels))


# ---- 上同调比较与分类 ----

def cohomologous_structures(J1: TensorStructure, J2: TensorStructure) -> Optional[Dict[str, CycloNumber]]:
    """若 J2 = c_x c_y / c_z · J1 对全部通道成立，返回规范 c；否则返回 None"""
    if set(J1.channels) != set(J2.channels):
        raise SolverError("两个张量结构的通道不一致")
    ctx = common_context(J1.ctx.conductor, J2.ctx.conductor)
    A, B = J1.embed(ctx), J2.embed(ctx)
    labels: List[str] = []
    for ch in A.channels:
        for label in ch:
            if label not in labels:
                labels.append(label)
    pos = {label: i for i, label in enumerate(labels)}
    echelon = LatticeEchelon(len(labels))
    for (x, y, z), J in A.channels.items():
        try:
            ratio = (B[(x, y, z)] @ J.inverse()).scalar_multiple_of_identity()
        except LinalgError:
            raise SolverError(f"通道 {(x, y, z)} 的矩阵不可逆")
        if ratio is None:
            return None
        beta = ctx.angle_of(ratio)
        if beta is None:
            raise SolverError(f"通道 {(x, y, z)} 上的比值 {ratio} 不是单位根")
        row: Dict[int, int] = {}
        for label, sign in ((x, 1), (y, 1), (z, -1)):
            row[pos[label]] = row.get(pos[label], 0) + sign
        if not echelon.add(row, beta, (x, y, z)):
            return None
    modular = solve_modular(echelon)
    if modular is None:
        return None
    conductor = ctx.conductor
    for q in modular.particular:
        conductor = conductor * q.denominator // math.gcd(conductor, q.denominator)
    wctx = make_context(conductor)
    return {label: wctx.from_angle(modular.particular[i]) for label, i in pos.items()}


def _find_class(classes: Sequence[TensorStructure], J: TensorStructure) -> Optional[int]:
    for k, K in enumerate(classes):
        if cohomologous_structures(K, J) is not None:
            return k
    return None


def _table_violations(table: List[List[int]]) -> List[str]:
    n = len(table)
    out = []
    if any(table[0][i] != i or table[i][0] != i for i in range(n)):
        out.append("第 0 类不是单位元")
    for i in range(n):
        if 0 not in table[i]:
            out.append(f"第 {i} 类没有逆元")
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            out.append(f"乘法不结合: ({a},{b},{c})")
            break
    return out


def classify(representatives: Sequence[TensorStructure], category) \
        -> Tuple[List[TensorStructure], List[List[int]], Optional[AbelianGroupPresentation]]:
    """把代表元排成类（平凡类在前），给出乘法表和交换群表示"""
    classes: List[TensorStructure] = []
    for J in representatives:
        k = _find_class(classes, J)
        if k is not None:
            raise ClassificationError(f"代表元 {len(classes)} 与第 {k} 类上同调")
        classes.append(J)
    trivial = _find_class(classes, TensorStructure.identity(category))
    if trivial is None:
        raise ClassificationError("平凡张量结构不在任何类中")
    classes.insert(0, classes.pop(trivial))
    n = len(classes)
    table = [[0] * n for _ in range(n)]
    for i, j in itertools.product(range(n), repeat=2):
        k = _find_class(classes, classes[i].multiply(classes[j]))
        if k is None:
            raise ClassificationError(f"第 {i} 类与第 {j} 类的乘积不在代表元中")
        table[i][j] = k
    bad = _table_violations(table)
    if bad:
        raise ClassificationError(f"乘法表不构成群: {bad[0]}")
    if any(table[i][j] != table[j][i] for i in range(n) for j in range(n)):
        logger.warning("%s: 上同调群不交换，只给出阶数 %d", category.name, n)
        return classes, table, None
    rows = []
    for i, j in itertools.product(range(n), repeat=2):
        row = [0] * n
        row[i] += 1
        row[j] += 1
        row[table[i][j]] -= 1
        rows.append(row)
    return classes, table, quotient_group(IntegerMatrix.from_rows(rows), n)


# ---- 独立复核 ----

def verify_tensor_structure(category, J: TensorStructure, unitary: bool = False) -> List[str]:
    """对全部四元组整块重算 R·E = E·L，并检查归一化与（可选）酉性"""
    fusion = category.fusion
    ctx = J.ctx
    violations = []
    for (x, y, _), M in J.channels.items():
        if fusion.unit in (x, y) and not M.is_identity():
            violations.append(f"通道 ({x},{y}) 未归一化")
    for key in category.quadruples():
        x, y, z, w = key
        E = category.f_matrix(*key).matrix.T.embed(ctx)
        L = block_diagonal(ctx, [J[(x, y, u)].kron(J[(u, z, w)])
                                 for u in fusion.labels if fusion.N(x, y, u) and fusion.N(u, z, w)])
        R = block_diagonal(ctx, [J[(y, z, v)].kron(J[(x, v, w)])
                                 for v in fusion.labels if fusion.N(y, z, v) and fusion.N(x, v, w)])
        if R @ E != E @ L:
            violations.append(f"一致性方程在 {key} 处不成立")
    if unitary:
        for ch, M in J.channels.items():
            gram = category.channel_gram(*ch).embed(ctx)
            if M.H @ gram @ M != gram:
                violations.append(f"通道 {ch} 不是酉的")
    return violations


def certify(category, J: TensorStructure, unitary: bool) -> Dict[str, bool]:
    """代表元的独立证书；具体输入再在群代数层面检查 Ω"""
    checks = {"coherence": not verify_tensor_structure(category, J, unitary)}
    if isinstance(category, RepresentationCategory) and config.CERTIFY_CONCRETE:
        checks.update(cocycle_verify.certify_structure(category.G, list(category.irreps.values()), J,
                                                       bases=category.basis, unitary=unitary))
    return checks


# ---- 入口 ----

@dataclass
class CohomologyGroup:
    """H²_inv / H²_uinv 的计算结果"""

    name: str
    coeff: str
    classes: List[TensorStructure]
    table: List[List[int]]
    presentation: Optional[AbelianGroupPresentation]
    free_rank: int
    candidates: List[Candidate]
    stabilizer: AbelianGroupPresentation
    certificates: List[Dict[str, bool]]
    unknown_count: int = 0
    monomial_count: int = 0
    matrix_relation_count: int = 0

    @property
    def order(self) -> Optional[int]:
        return None if self.free_rank else len(self.classes)

    def describe(self) -> str:
        if self.presentation is None:
            return f"非交换群，阶 {len(self.classes)}"
        return str(AbelianGroupPresentation.from_orders(self.presentation.invariants,
                                                        self.presentation.free_rank + self.free_rank))


def compute_invariant_h2(category, coeff: str = config.DEFAULT_COEFF, certify_classes: bool = True) -> CohomologyGroup:
    if coeff not in config.COEFF_MODES:
        raise SolverError(f"未知的系数模式: {coeff}，可选 {sorted(config.COEFF_MODES)}")
    unitary = coeff == "unitary"
    system = build_constraints(category)
    candidates = branch_enumerate(system)
    representatives: List[TensorStructure] = []
    free_rank = 0
    for cand in candidates:
        if not cand.alive:
            continue
        solution = solve_branch(system, cand)
        if solution is None:
            continue
        representatives.extend(solution.representatives)
        free_rank = max(free_rank, solution.free_rank)
    if not representatives:
        raise ClassificationError(f"{category.name}: 没有存活的分支，平凡张量结构也未得到")
    certificates = []
    if certify_classes:
        for i, J in enumerate(representatives):
            checks = certify(category, J, unitary)
            certificates.append(checks)
            failed = [name for name, ok in checks.items() if not ok]
            if failed:
                raise SolverError(f"代表元 {i} 未通过独立校验: {', '.join(failed)}")
    classes, table, presentation = classify(representatives, category)
    result = CohomologyGroup(
        name=category.name,
        coeff=coeff,
        classes=classes,
        table=table,
        presentation=presentation,
        free_rank=free_rank,
        candidates=candidates,
        stabilizer=gauge_stabilizer(system),
        certificates=certificates,
        unknown_count=len(system.registry),
        monomial_count=len(system.monomials),
        matrix_relation_count=len(system.matrix_relations),
    )
    logger.info("%s [%s]: %s", category.name, config.COEFF_MODES[coeff]["symbol"], result.describe())
    return result
