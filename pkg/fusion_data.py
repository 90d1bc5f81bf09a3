"""
骨架融合范畴数据

- SkeletalCategory：融合规则加 F 矩阵表，可由文件读入或由 Tambara-Yamagami 数据生成
- RepresentationCategory：Rep(G) 的具体后端，F 矩阵由交织子基按需计算
- pentagon_check：五边形恒等式的精确校验

F 矩阵的约定：行是左树 (u, i, j)，列是右树 (v, k, l)，按 (标签顺序, 基下标) 字典序；
左树向量 = Σ_列 F[行, 列] · 右树向量。
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from cyclotomic import CycloContext, CycloNumber, make_context
from formats import SkeletalSpec, parse_matrix
from groups_reps import (
    FiniteGroup, FusionTable, IntertwinerBasis, Irrep, basis_from_maps, fusion_table, intertwiner_basis,
)
from linalg import ExactMatrix, LinalgError, solve_unique

logger = logging.getLogger(__name__)

Tree = Tuple[str, int, int]
Quadruple = Tuple[str, str, str, str]


class FusionError(ValueError):
    """融合范畴数据错误"""


@dataclass
class FMatrix:
    """Mor(w, x⊗y⊗z) 中两组融合树基之间的变换矩阵"""

    rows: List[Tree]
    cols: List[Tree]
    matrix: ExactMatrix
    _sparse: Optional[Dict[Tree, List[Tuple[Tree, CycloNumber]]]] = field(default=None, repr=False)

    def row_entries(self, tree: Tree) -> List[Tuple[Tree, CycloNumber]]:
        """左树 tree 在右树基下的非零展开系数"""
        if self._sparse is None:
            sparse = {}
            for a, left in enumerate(self.rows):
                sparse[left] = [
                    (right, self.matrix.data[a, b])
                    for b, right in enumerate(self.cols)
                    if not self.matrix.data[a, b].is_zero()
                ]
            self._sparse = sparse
        return self._sparse[tree]


class _FusionCategory:
    """两个后端共用的树枚举与遍历"""

    name: str
    ctx: CycloContext
    fusion: FusionTable

    @property
    def labels(self) -> List[str]:
        return self.fusion.labels

    @property
    def unit(self) -> str:
        return self.fusion.unit

    def left_trees(self, x: str, y: str, z: str, w: str) -> List[Tree]:
        N = self.fusion.N
        return [(u, i, j) for u in self.labels for i in range(N(x, y, u)) for j in range(N(u, z, w))]

    def right_trees(self, x: str, y: str, z: str, w: str) -> List[Tree]:
        N = self.fusion.N
        return [(v, k, l) for v in self.labels for k in range(N(y, z, v)) for l in range(N(x, v, w))]

    def quadruples(self) -> Iterator[Quadruple]:
        for x, y, z in itertools.product(self.labels, repeat=3):
            for w in self.labels:
                if self.fusion.hom_dim(x, y, z, w):
                    yield (x, y, z, w)

    def f_matrix(self, x: str, y: str, z: str, w: str) -> FMatrix:
        raise NotImplementedError

    def f_items(self) -> Iterator[Tuple[Quadruple, FMatrix]]:
        for key in self.quadruples():
            yield key, self.f_matrix(*key)

    def channel_gram(self, x: str, y: str, z: str) -> ExactMatrix:
        """多重度空间上的内积；J 保持它即对应酉的 Ω"""
        return ExactMatrix.identity(self.ctx, self.fusion.N(x, y, z))


class SkeletalCategory(_FusionCategory):
    """融合规则 + 显式 F 矩阵表；表中省略的 F 为单位阵"""

    def __init__(self, name: str, ctx: CycloContext, fusion: FusionTable,
                 f_table: Optional[Mapping[Quadruple, ExactMatrix]] = None):
        self.name = name
        self.ctx = ctx
        self.fusion = fusion
        self._f: Dict[Quadruple, FMatrix] = {}
        for key, M in (f_table or {}).items():
            self.set_f(key, M)

    def set_f(self, key: Quadruple, M: ExactMatrix):
        rows, cols = self.left_trees(*key), self.right_trees(*key)
        if M.shape != (len(rows), len(cols)):
            raise FusionError(f"F{key} 的形状 {M.shape} 与融合树数 ({len(rows)}, {len(cols)}) 不符")
        self._f[key] = FMatrix(rows, cols, M)

    def f_matrix(self, x: str, y: str, z: str, w: str) -> FMatrix:
        key = (x, y, z, w)
        F = self._f.get(key)
        if F is None:
            rows, cols = self.left_trees(*key), self.right_trees(*key)
            if len(rows) != len(cols):
                raise FusionError(f"F{key} 的融合树数不一致: {len(rows)} 与 {len(cols)}")
            F = FMatrix(rows, cols, ExactMatrix.identity(self.ctx, len(rows)))
            self._f[key] = F
        return F


def category_from_spec(spec: SkeletalSpec) -> SkeletalCategory:
    ctx = make_context(spec.conductor)
    if spec.unit not in spec.labels:
        raise FusionError(f"单位元 {spec.unit} 不在标签中")
    mult = dict(spec.fusion)
    for x in spec.labels:
        mult[(spec.unit, x, x)] = 1
        mult[(x, spec.unit, x)] = 1
    fusion = FusionTable(spec.labels, spec.unit, mult)
    violations = fusion.check()
    if violations:
        raise FusionError(f"融合规则不合法: {violations[0]}")
    f_table = {key: parse_matrix(text, ctx) for key, text in spec.assoc.items()}
    return SkeletalCategory(spec.name, ctx, fusion, f_table)


# ---- Tambara-Yamagami ----

@dataclass
class Bicharacter:
    """交换群 A 上的对称双特征 χ，group_mul 给出 A 的乘法"""

    elements: List[str]
    group_mul: Dict[Tuple[str, str], str]
    values: Dict[Tuple[str, str], CycloNumber]

    @property
    def unit(self) -> str:
        return self.elements[0]

    def __call__(self, a: str, b: str) -> CycloNumber:
        return self.values[(a, b)]

    def violations(self) -> List[str]:
        out = []
        for a, b in itertools.product(self.elements, repeat=2):
            if self(a, b) != self(b, a):
                out.append(f"χ 不对称: ({a},{b})")
            for c in self.elements:
                if self(self.group_mul[(a, b)], c) != self(a, c) * self(b, c):
                    out.append(f"χ 不可乘: ({a},{b};{c})")
        for a in self.elements[1:]:
            if all(self(a, b) == 1 for b in self.elements):
                out.append(f"χ 退化: {a} 与所有元素配对为 1")
        return out


def klein_bicharacter(conductor: int = 4) -> Bicharacter:
    """K₄ = {1, s, t, st} 上的 χ(s,s) = χ(t,t) = −1, χ(s,t) = 1（生成元 a = s, b = t）"""
    ctx = make_context(conductor)
    coords = {"1": (0, 0), "s": (1, 0), "t": (0, 1), "st": (1, 1)}
    by_coords = {v: k for k, v in coords.items()}
    elements = list(coords)
    group_mul = {
        (a, b): by_coords[((coords[a][0] + coords[b][0]) % 2, (coords[a][1] + coords[b][1]) % 2)]
        for a in elements for b in elements
    }
    values = {}
    for a in elements:
        for b in elements:
            # 对角型: χ(s,s) = χ(t,t) = −1
            sign = coords[a][0] * coords[b][0] + coords[a][1] * coords[b][1]
            values[(a, b)] = ctx.number(-1 if sign % 2 else 1)
    return Bicharacter(elements, group_mul, values)


def ty_category(bichar: Bicharacter, tau, name: str = "ty", rho: str = "rho") -> SkeletalCategory:
    """Tambara-Yamagami 范畴 TY(A, χ, τ)

    非平凡结合子: F(a,ρ,b;ρ) = χ(a,b)，F(ρ,a,ρ;b) = χ(a,b)，
    F(ρ,ρ,ρ;ρ) 的 (a,b) 元为 τ·χ(a,b)⁻¹。τ 只接受有理数。
    """
    if not isinstance(tau, (int, Fraction)):
        raise FusionError(f"τ 必须是有理数，得到 {tau!r}（无理 τ 需要扩域，暂不支持）")
    tau = Fraction(tau)
    if tau * tau * len(bichar.elements) != 1:
        raise FusionError(f"τ = {tau} 不满足 τ²·|A| = 1")
    bad = bichar.violations()
    if bad:
        raise FusionError(f"双特征不合法: {bad[0]}")
    A = bichar.elements
    ctx = bichar(A[0], A[0]).ctx
    labels = A + [rho]
    mult = {}
    for a in A:
        for b in A:
            mult[(a, b, bichar.group_mul[(a, b)])] = 1
        mult[(a, rho, rho)] = 1
        mult[(rho, a, rho)] = 1
        mult[(rho, rho, a)] = 1
    fusion = FusionTable(labels, bichar.unit, mult)
    cat = SkeletalCategory(name, ctx, fusion)
    for a in A:
        for b in A:
            cat.set_f((a, rho, b, rho), ExactMatrix.from_rows(ctx, [[bichar(a, b)]]))
            cat.set_f((rho, a, rho, b), ExactMatrix.from_rows(ctx, [[bichar(a, b)]]))
    phi = ExactMatrix.from_rows(ctx, [[bichar(a, b).inverse() * tau for b in A] for a in A])
    cat.set_f((rho, rho, rho, rho), phi)
    return cat


# ---- Rep(G) 的具体后端 ----

class RepresentationCategory(_FusionCategory):
    """有限群的表示范畴；交织子基与 F 矩阵按需计算并缓存"""

    def __init__(self, G: FiniteGroup, irreps: Sequence[Irrep],
                 bases: Optional[Mapping[Tuple[str, str, str], Sequence[ExactMatrix]]] = None,
                 name: Optional[str] = None):
        self.G = G
        self.irreps = {R.label: R for R in irreps}
        self.name = name or G.name
        self.ctx = irreps[0].ctx
        self.fusion = fusion_table(G, irreps)
        self._bases: Dict[Tuple[str, str, str], IntertwinerBasis] = {}
        self._f: Dict[Quadruple, FMatrix] = {}
        for (x, y, z), maps in (bases or {}).items():
            if len(maps) != self.fusion.N(x, y, z):
                raise FusionError(f"Mor({z}, {x}⊗{y}) 的基应有 {self.fusion.N(x, y, z)} 个映射，给出 {len(maps)} 个")
            self._bases[(x, y, z)] = basis_from_maps(G, self.irreps[x], self.irreps[y], self.irreps[z], maps)

    def dim(self, x: str) -> int:
        return self.irreps[x].dim

    def basis(self, x: str, y: str, z: str) -> IntertwinerBasis:
        key = (x, y, z)
        if key not in self._bases:
            self._bases[key] = intertwiner_basis(self.G, self.irreps[x], self.irreps[y], self.irreps[z])
            if len(self._bases[key]) != self.fusion.N(x, y, z):
                raise FusionError(f"Mor({z}, {x}⊗{y}) 的维数与融合系数不符")
        return self._bases[key]

    def channel_gram(self, x: str, y: str, z: str) -> ExactMatrix:
        """G_ij = tr(S_i* S_j) / d_z"""
        maps = self.basis(x, y, z).maps
        d = self.dim(z)
        return ExactMatrix.from_rows(self.ctx, [[(Si.H @ Sj).trace() / d for Sj in maps] for Si in maps])

    def prepare(self):
        """预先计算所有非零通道的交织子基"""
        count = 0
        for (x, y, z) in self.fusion.mult:
            self.basis(x, y, z)
            count += 1
        logger.info("%s: 已计算 %d 个通道的交织子基", self.name, count)

    def f_matrix(self, x: str, y: str, z: str, w: str) -> FMatrix:
        """在 H_w 的第一个基向量上求值两组融合树，再精确解线性方程组"""
        key = (x, y, z, w)
        if key in self._f:
            return self._f[key]
        dx = self.dim(x)
        rows, cols = self.left_trees(*key), self.right_trees(*key)
        left_vectors = []
        for u, i, j in rows:
            inner = self.basis(u, z, w).maps[j].data[:, 0].reshape(self.dim(u), self.dim(z))
            outer = self.basis(x, y, u).maps[i].data
            left_vectors.append((outer @ inner).reshape(-1))
        right_vectors = []
        for v, k, l in cols:
            inner = self.basis(x, v, w).maps[l].data[:, 0].reshape(dx, self.dim(v))
            outer = self.basis(y, z, v).maps[k].data
            right_vectors.append((inner @ outer.T).reshape(-1))
        L = ExactMatrix(self.ctx, np.stack(left_vectors, axis=1))
        R = ExactMatrix(self.ctx, np.stack(right_vectors, axis=1))
        try:
            E = solve_unique(R, L)
        except LinalgError:
            raise FusionError(f"F{key}: 左树无法用右树展开，交织子基不一致")
        F = FMatrix(rows, cols, E.T)
        self._f[key] = F
        return F

    def dual_f_matrix(self, x: str, y: str, z: str, w: str) -> FMatrix:
        """第二种算法：F[(u,i,j),(v,k,l)] = (S'⁺_l (1⊗S⁺_k)) · ((T_i⊗1) T'_j)"""
        rows, cols = self.left_trees(x, y, z, w), self.right_trees(x, y, z, w)
        ctx = self.ctx
        ident = {a: ExactMatrix.identity(ctx, self.dim(a)) for a in (x, z)}
        left = [
            self.basis(x, y, u).maps[i].kron(ident[z]) @ self.basis(u, z, w).maps[j]
            for u, i, j in rows
        ]
        right_dual = [
            self.basis(x, v, w).duals[l] @ ident[x].kron(self.basis(y, z, v).duals[k])
            for v, k, l in cols
        ]
        data = [[(rd @ lv).data[0, 0] for rd in right_dual] for lv in left]
        return FMatrix(rows, cols, ExactMatrix.from_rows(ctx, data))


def from_irreps(G: FiniteGroup, irreps: Sequence[Irrep],
                bases: Optional[Mapping[Tuple[str, str, str], Sequence[ExactMatrix]]] = None,
                name: Optional[str] = None) -> SkeletalCategory:
    """把 Rep(G) 的全部 F 矩阵写成骨架范畴"""
    return to_skeletal(RepresentationCategory(G, irreps, bases, name))


def to_skeletal(concrete: RepresentationCategory) -> SkeletalCategory:
    concrete.prepare()
    cat = SkeletalCategory(concrete.name, concrete.ctx, concrete.fusion)
    count = 0
    for key, F in concrete.f_items():
        cat.set_f(key, F.matrix)
        count += 1
    logger.info("%s: 共计算 %d 个 F 矩阵", concrete.name, count)
    return cat


# ---- 五边形 ----

def _expand(vector: Dict[tuple, CycloNumber], split, F_of, merge) -> Dict[tuple, CycloNumber]:
    out: Dict[tuple, CycloNumber] = {}
    for index, coeff in vector.items():
        key, tree = split(index)
        for right, value in F_of(key).row_entries(tree):
            new = merge(index, right)
            out[new] = out[new] + coeff * value if new in out else coeff * value
    return {k: v for k, v in out.items() if not v.is_zero()}


def unit_violations(C) -> List[Quadruple]:
    """x、y、z 之一为单位元时 F 必须是单位阵；目标 w 为单位元的 F 不受此限"""
    bad = []
    for key in C.quadruples():
        if C.unit in key[:3] and not C.f_matrix(*key).matrix.is_identity():
            bad.append(key)
    return bad


def pentagon_check(C) -> List[Tuple[str, ...]]:
    """对全部 (a,b,c,d;e) 检查五边形恒等式，返回违例元组（空表示通过）

    B1 = (((ab)c)d) 的基元 (f,i₁,g,i₂,i₃) 沿两条路径展开到 B5 = (a(b(cd))) 的基
    (h,k₁,k,m,n)：F^{fcd}_e 再 F^{abh}_e；或 F^{abc}_g、F^{amd}_e、F^{bcd}_k。
    """
    violations: List[Tuple[str, ...]] = [("unit",) + key for key in unit_violations(C)]
    N = C.fusion.N
    labels = [l for l in C.labels if l != C.unit]
    F = C.f_matrix
    one = C.ctx.one
    checked = 0
    for a, b, c, d in itertools.product(labels, repeat=4):
        for e in C.labels:
            if not _has_five(C, a, b, c, d, e):
                continue
            failed = False
            for f in C.fusion.products(a, b):
                for g in C.fusion.products(f, c):
                    if not N(g, d, e):
                        continue
                    for i1, i2, i3 in itertools.product(range(N(a, b, f)), range(N(f, c, g)), range(N(g, d, e))):
                        start = {(f, i1, g, i2, i3): one}
                        # 路径一
                        b2 = _expand(
                            start,
                            lambda idx: ((idx[0], c, d, e), (idx[2], idx[3], idx[4])),
                            lambda key: F(*key),
                            lambda idx, r: (idx[0], idx[1], r[0], r[1], r[2]),
                        )
                        p1 = _expand(
                            b2,
                            lambda idx: ((a, b, idx[2], e), (idx[0], idx[1], idx[4])),
                            lambda key: F(*key),
                            lambda idx, r: (idx[2], idx[3], r[0], r[1], r[2]),
                        )
                        # 路径二
                        b3 = _expand(
                            start,
                            lambda idx: ((a, b, c, idx[2]), (idx[0], idx[1], idx[3])),
                            lambda key: F(*key),
                            lambda idx, r: (r[0], r[1], r[2], idx[2], idx[4]),
                        )
                        b4 = _expand(
                            b3,
                            lambda idx: ((a, idx[0], d, e), (idx[3], idx[2], idx[4])),
                            lambda key: F(*key),
                            lambda idx, r: (idx[0], idx[1], r[0], r[1], r[2]),
                        )
                        p2 = _expand(
                            b4,
                            lambda idx: ((b, c, d, idx[2]), (idx[0], idx[1], idx[3])),
                            lambda key: F(*key),
                            lambda idx, r: (r[0], r[1], idx[2], r[2], idx[4]),
                        )
                        if p1 != p2:
                            failed = True
                            break
                    if failed:
                        break
                if failed:
                    break
            checked += 1
            if failed:
                violations.append((a, b, c, d, e))
    logger.info("%s: 五边形校验 %d 组，违例 %d 组", C.name, checked, len(violations))
    return violations


def _has_five(C, a: str, b: str, c: str, d: str, e: str) -> bool:
    N = C.fusion.N
    return any(N(g, d, e) for f in C.fusion.products(a, b) for g in C.fusion.products(f, c))
