"""
有限群与不可约表示

有限群以完整乘法表存储，元素下标 0..n-1；mul[a][b] 是 a∘b（先作用 b）。
不可约表示对每个群元素给出一个精确矩阵，非生成元的矩阵由字求值得到。
另外提供融合系数、交织子空间，以及交换群 Schur 乘子的两个预言机。
"""

from __future__ import annotations

import itertools
import logging
import math
import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

import config
from cyclotomic import CycloContext, CycloNumber, common_context, make_context
from formats import GroupSpec, IrrepSpec, parse_matrix, read_group_file, read_irreps_file
from linalg import (
    AbelianGroupPresentation, ExactMatrix, IntegerMatrix, LatticeEchelon, LinalgError,
    _SmithReduction, dual_basis, quotient_group, rref_nullspace,
)

logger = logging.getLogger(__name__)


class GroupError(ValueError):
    """群或表示数据错误"""


class FiniteGroup:
    """乘法表表示的有限群

    parent[g] = (生成元名, h) 表示 g = s∘h，用于由生成元矩阵求值任意元素。
    """

    def __init__(self, mul: Sequence[Sequence[int]], names: Sequence[str],
                 generators: Mapping[str, int], parent: Sequence[Optional[Tuple[str, int]]],
                 name: str = "group"):
        self.name = name
        self.mul = [list(row) for row in mul]
        self.order = len(self.mul)
        self.names = list(names)
        self.generators = dict(generators)
        self.parent = list(parent)
        self._validate()

    def _validate(self):
        n = self.order
        if any(len(row) != n for row in self.mul):
            raise GroupError("乘法表不是方阵")
        ident = [e for e in range(n) if all(self.mul[e][g] == g and self.mul[g][e] == g for g in range(n))]
        if len(ident) != 1:
            raise GroupError("乘法表没有唯一的单位元")
        self.identity = ident[0]
        self.inverse = [0] * n
        for g in range(n):
            inv = [h for h in range(n) if self.mul[g][h] == self.identity]
            if len(inv) != 1 or self.mul[inv[0]][g] != self.identity:
                raise GroupError(f"元素 {self.names[g]} 没有双边逆元")
            self.inverse[g] = inv[0]
        mul = self.mul
        for a in range(n):
            row_a = mul[a]
            for b in range(n):
                ab = row_a[b]
                row_b = mul[b]
                row_ab = mul[ab]
                for c in range(n):
                    if row_ab[c] != row_a[row_b[c]]:
                        raise GroupError(f"乘法表不满足结合律: ({a},{b},{c})")

    def multiply(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def conjugate(self, k: int, g: int) -> int:
        """k⁻¹ g k"""
        return self.mul[self.mul[self.inverse[k]][g]][k]

    def element_order(self, g: int) -> int:
        k, h = 1, g
        while h != self.identity:
            h = self.mul[h][g]
            k += 1
        return k

    @property
    def exponent(self) -> int:
        out = 1
        for g in range(self.order):
            k = self.element_order(g)
            out = out * k // math.gcd(out, k)
        return out

    def is_abelian(self) -> bool:
        return all(self.mul[a][b] == self.mul[b][a] for a in range(self.order) for b in range(a))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GroupError(f"群 {self.name} 中没有元素 {name}")

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def _compose(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    """(a∘b)(x) = a(b(x))"""
    return tuple(a[x] for x in b)


def group_from_generators(perms: Mapping[str, Sequence[int]], name: str = "group",
                          max_order: int = config.MAX_GROUP_ORDER) -> FiniteGroup:
    """置换生成的群：从单位元出发做轨道枚举，得到元素、乘法表与字"""
    if not perms:
        raise GroupError("至少需要一个生成元")
    degree = max(len(p) for p in perms.values())
    gens = {}
    for gname, p in perms.items():
        p = tuple(p) + tuple(range(len(p), degree))
        if sorted(p) != list(range(degree)):
            raise GroupError(f"生成元 {gname} 不是置换")
        gens[gname] = p
    identity = tuple(range(degree))
    elements = [identity]
    position = {identity: 0}
    names = ["e"]
    parent: List[Optional[Tuple[str, int]]] = [None]
    queue = deque([0])
    while queue:
        g = queue.popleft()
        for gname, s in gens.items():
            h = _compose(s, elements[g])
            if h in position:
                continue
            if len(elements) >= max_order:
                raise GroupError(f"群闭包超过上限 {max_order}")
            position[h] = len(elements)
            elements.append(h)
            names.append(gname if g == 0 else f"{gname}*{names[g]}")
            parent.append((gname, g))
            queue.append(position[h])
    mul = [[position[_compose(a, b)] for b in elements] for a in elements]
    generators = {gname: position[s] for gname, s in gens.items()}
    logger.info("群 %s 闭包完成，阶 %d", name, len(elements))
    return FiniteGroup(mul, names, generators, parent, name)


def group_from_table(table: Sequence[Sequence[int]], name: str = "group") -> FiniteGroup:
    """乘法表给出的群，每个非单位元都视为一个生成元 g<i>"""
    n = len(table)
    names = ["e" if i == 0 else f"g{i}" for i in range(n)]
    if any(table[0][g] != g for g in range(n)):
        raise GroupError("乘法表中元素 0 必须是单位元")
    parent = [None] + [(names[i], 0) for i in range(1, n)]
    return FiniteGroup(table, names, {names[i]: i for i in range(1, n)}, parent, name)


def group_from_spec(spec: GroupSpec) -> FiniteGroup:
    G = group_from_generators(spec.generators, spec.name) if spec.generators else group_from_table(spec.table, spec.name)
    if G.order != spec.order:
        raise GroupError(f"群 {spec.name} 声明阶 {spec.order}，闭包得到 {G.order}")
    return G


# ---- 表示 ----

@dataclass
class Irrep:
    """不可约酉表示，matrices[g] 为群元素 g 的矩阵"""

    label: str
    dim: int
    matrices: List[ExactMatrix]

    @property
    def ctx(self) -> CycloContext:
        return self.matrices[0].ctx

    def __call__(self, g: int) -> ExactMatrix:
        return self.matrices[g]

    def character(self) -> List[CycloNumber]:
        return [M.trace() for M in self.matrices]

    def embed(self, ctx: CycloContext) -> "Irrep":
        return Irrep(self.label, self.dim, [M.embed(ctx) for M in self.matrices])


def irrep_from_generators(G: FiniteGroup, label: str, gen_matrices: Mapping[str, ExactMatrix]) -> Irrep:
    """由生成元的矩阵按字求值：R(s∘h) = R(s)·R(h)"""
    missing = set(G.generators) - set(gen_matrices)
    if missing:
        raise GroupError(f"表示 {label} 缺少生成元矩阵: {sorted(missing)}")
    first = next(iter(gen_matrices.values()))
    ctx, d = first.ctx, first.rows
    matrices: List[Optional[ExactMatrix]] = [None] * G.order
    matrices[G.identity] = ExactMatrix.identity(ctx, d)
    for g in range(G.order):
        if g == G.identity:
            continue
        gname, h = G.parent[g]
        if matrices[h] is None:
            raise GroupError("字的父元素尚未求值")
        matrices[g] = gen_matrices[gname] @ matrices[h]
    return Irrep(label, d, matrices)


def irreps_from_specs(G: FiniteGroup, specs: Sequence[IrrepSpec]) -> List[Irrep]:
    ctx = common_context(*(s.conductor for s in specs))
    irreps = []
    for spec in specs:
        mats = {gname: parse_matrix(text, ctx) for gname, text in spec.matrices.items()}
        for gname, M in mats.items():
            if M.shape != (spec.dim, spec.dim):
                raise GroupError(f"表示 {spec.label} 在 {gname} 上的矩阵形状 {M.shape} 与维数 {spec.dim} 不符")
        irreps.append(irrep_from_generators(G, spec.label, mats))
    return irreps


def load_group_with_irreps(group_path: str, irreps_path: str) -> Tuple[FiniteGroup, List[Irrep]]:
    G = group_from_spec(read_group_file(group_path))
    return G, irreps_from_specs(G, read_irreps_file(irreps_path))


def wall_group() -> Tuple[FiniteGroup, List[Irrep]]:
    """Z₈ ⋊ Aut(Z₈)，生成元 s: x↦3x, t: x↦5x, u: x↦x+1，以及它的 11 个不可约表示"""
    G, irreps = load_group_with_irreps(
        os.path.join(config.CATALOGUE_DIR, "wall32.group"),
        os.path.join(config.CATALOGUE_DIR, "wall32.irreps"),
    )
    if G.order != 32:
        raise GroupError(f"闭包得到的阶为 {G.order}，应为 32")
    return G, irreps


def validate_irrep(G: FiniteGroup, R: Irrep) -> List[str]:
    """检查同态、酉性与不可约性，返回违例列表（空表示通过）"""
    violations = []
    ctx = R.ctx
    if not R.matrices[G.identity].is_identity():
        violations.append(f"{R.label}: R(e) 不是单位阵")
    homomorphic = True
    for a in range(G.order):
        for b in range(G.order):
            if R(a) @ R(b) != R(G.mul[a][b]):
                violations.append(f"{R.label}: 同态性失败 R({G.names[a]})R({G.names[b]}) ≠ R({G.names[G.mul[a][b]]})")
                homomorphic = False
                break
        if not homomorphic:
            break
    for g in range(G.order):
        if R(g).H != R(G.inverse[g]):
            violations.append(f"{R.label}: R({G.names[g]}) 不是酉矩阵")
            break
    chi = R.character()
    norm = sum((c * c.conjugate() for c in chi), ctx.zero) / G.order
    if norm != 1:
        violations.append(f"{R.label}: 不可约性失败 ⟨χ,χ⟩ = {norm.literal()}")
    return violations


# ---- 融合规则 ----

class FusionTable:
    """融合系数 N^{xy}_z（只存非零项）"""

    def __init__(self, labels: Sequence[str], unit: str, mult: Mapping[Tuple[str, str, str], int],
                 dims: Optional[Mapping[str, int]] = None):
        self.labels = list(labels)
        self.unit = unit
        self.mult = {k: v for k, v in mult.items() if v}
        self.dims = dict(dims) if dims else None
        self._order = {x: i for i, x in enumerate(self.labels)}
        self._products: Dict[Tuple[str, str], List[str]] = {}
        for (x, y, z) in sorted(self.mult, key=lambda k: tuple(self._order[l] for l in k)):
            self._products.setdefault((x, y), []).append(z)

    def N(self, x: str, y: str, z: str) -> int:
        return self.mult.get((x, y, z), 0)

    def products(self, x: str, y: str) -> List[str]:
        return self._products.get((x, y), [])

    def label_index(self, x: str) -> int:
        return self._order[x]

    def dual(self, x: str) -> str:
        candidates = [y for y in self.labels if self.N(x, y, self.unit) == 1]
        if len(candidates) != 1:
            raise GroupError(f"对象 {x} 没有唯一的对偶")
        return candidates[0]

    def is_invertible(self, x: str) -> bool:
        return self.products(x, self.dual(x)) == [self.unit]

    def invertibles(self) -> List[str]:
        return [x for x in self.labels if self.is_invertible(x)]

    def hom_dim(self, x: str, y: str, z: str, w: str) -> int:
        """dim Mor(w, x⊗y⊗z)"""
        return sum(self.N(x, y, u) * self.N(u, z, w) for u in self.labels)

    def check(self) -> List[str]:
        violations = []
        for x in self.labels:
            for y in self.labels:
                if self.N(self.unit, x, y) != (1 if x == y else 0) or self.N(x, self.unit, y) != (1 if x == y else 0):
                    violations.append(f"单位元融合规则失败: {x}, {y}")
        if self.dims:
            for x in self.labels:
                for y in self.labels:
                    total = sum(self.N(x, y, z) * self.dims[z] for z in self.labels)
                    if total != self.dims[x] * self.dims[y]:
                        violations.append(f"维数不守恒: {x}⊗{y}")
        for x, y, z, v in itertools.product(self.labels, repeat=4):
            lhs = sum(self.N(x, y, w) * self.N(w, z, v) for w in self.labels)
            rhs = sum(self.N(y, z, u) * self.N(x, u, v) for u in self.labels)
            if lhs != rhs:
                violations.append(f"融合不满足结合律: ({x},{y},{z};{v})")
        return violations


def character_inner(G: FiniteGroup, chi: Sequence[CycloNumber], psi: Sequence[CycloNumber]) -> CycloNumber:
    ctx = chi[0].ctx
    return sum((a * b.conjugate() for a, b in zip(chi, psi)), ctx.zero) / G.order


def fusion_table(G: FiniteGroup, irreps: Sequence[Irrep]) -> FusionTable:
    """N^{xy}_z = (1/|G|) Σ_g χ_x(g) χ_y(g) conj(χ_z(g))"""
    if sum(R.dim ** 2 for R in irreps) != G.order:
        raise GroupError(f"不可约表示不完整: Σd² = {sum(R.dim ** 2 for R in irreps)} ≠ |G| = {G.order}")
    chars = {R.label: R.character() for R in irreps}
    ctx = irreps[0].ctx
    unit = None
    for R in irreps:
        if R.dim == 1 and all(c == 1 for c in chars[R.label]):
            unit = R.label
            break
    if unit is None:
        raise GroupError("缺少平凡表示")
    mult = {}
    for x in chars:
        for y in chars:
            prod = [a * b for a, b in zip(chars[x], chars[y])]
            for z in chars:
                n = character_inner(G, prod, chars[z])
                value = n.as_fraction()
                if value.denominator != 1 or value < 0:
                    raise GroupError(f"融合系数 N^{x}{y}_{z} = {value} 不是非负整数")
                if value:
                    mult[(x, y, z)] = int(value)
    return FusionTable([R.label for R in irreps], unit, mult, {R.label: R.dim for R in irreps})


# ---- 交织子 ----

@dataclass
class IntertwinerBasis:
    """Mor(z, x⊗y) 的基 T_i: H_z → H_x⊗H_y 及其对偶族"""

    x: str
    y: str
    z: str
    maps: List[ExactMatrix]
    duals: List[ExactMatrix] = field(default_factory=list)

    def __len__(self):
        return len(self.maps)


def _check_intertwiner(G: FiniteGroup, x: Irrep, y: Irrep, z: Irrep, T: ExactMatrix) -> Optional[int]:
    for g in range(G.order):
        if T @ z(g) != x(g).kron(y(g)) @ T:
            return g
    return None


def intertwiner_basis(G: FiniteGroup, x: Irrep, y: Irrep, z: Irrep) -> IntertwinerBasis:
    """Mor(z, x⊗y)：在生成元上堆叠 T·z(g) − (x(g)⊗y(g))·T = 0，按列主序展开求零空间"""
    ctx = x.ctx
    dxy, dz = x.dim * y.dim, z.dim
    blocks = []
    for g in G.generators.values():
        lhs = z(g).T.kron(ExactMatrix.identity(ctx, dxy))
        rhs = ExactMatrix.identity(ctx, dz).kron(x(g).kron(y(g)))
        blocks.append((lhs - rhs).data)
    stacked = ExactMatrix(ctx, np.concatenate(blocks, axis=0))
    maps = [ExactMatrix.unvec(ctx, v.data[:, 0], dxy, dz) for v in rref_nullspace(stacked)]
    return basis_from_maps(G, x, y, z, maps)


def basis_from_maps(G: FiniteGroup, x: Irrep, y: Irrep, z: Irrep, maps: Sequence[ExactMatrix]) -> IntertwinerBasis:
    """对给定的映射族逐元素验证交织关系并计算对偶族"""
    for i, T in enumerate(maps):
        bad = _check_intertwiner(G, x, y, z, T)
        if bad is not None:
            raise GroupError(f"Mor({z.label}, {x.label}⊗{y.label}) 的第 {i} 个映射在 {G.names[bad]} 处不交织")
    try:
        duals = dual_basis(maps)
    except LinalgError as e:
        raise GroupError(f"Mor({z.label}, {x.label}⊗{y.label}): {e}")
    return IntertwinerBasis(x.label, y.label, z.label, list(maps), duals)


# ---- 交换群 ----

def abelian_group(invariants: Sequence[int], name: Optional[str] = None) -> Tuple[FiniteGroup, List[Irrep]]:
    """∏ Z_{n_i} 及其全部特征，元素按坐标字典序，特征标签 chi_<k>"""
    invariants = [int(n) for n in invariants]
    if not invariants or any(n < 1 for n in invariants):
        raise GroupError(f"非法的循环因子: {invariants}")
    name = name or "x".join(f"z{n}" for n in invariants)
    elements = list(itertools.product(*(range(n) for n in invariants)))
    position = {g: i for i, g in enumerate(elements)}
    mul = [[position[tuple((a + b) % n for a, b, n in zip(g, h, invariants))] for h in elements] for g in elements]
    gen_names = [chr(ord("a") + i) for i in range(len(invariants))]
    generators = {}
    for i, gname in enumerate(gen_names):
        unit_vec = tuple(1 if j == i else 0 for j in range(len(invariants)))
        generators[gname] = position[unit_vec]
    names, parent = [], []
    for g in elements:
        nz = [i for i, c in enumerate(g) if c]
        if not nz:
            names.append("e")
            parent.append(None)
            continue
        i = nz[0]
        prev = tuple(c - 1 if j == i else c for j, c in enumerate(g))
        names.append("*".join(f"{gen_names[j]}^{c}" if c > 1 else gen_names[j] for j, c in enumerate(g) if c))
        parent.append((gen_names[i], position[prev]))
    G = FiniteGroup(mul, names, generators, parent, name)
    exponent = 1
    for n in invariants:
        exponent = exponent * n // math.gcd(exponent, n)
    ctx = make_context(exponent)
    sep = "_" if max(invariants) > 10 else ""
    irreps = []
    for k in elements:
        label = "chi_" + sep.join(str(c) for c in k)
        matrices = []
        for g in elements:
            angle = sum(Fraction(a * b, n) for a, b, n in zip(k, g, invariants))
            matrices.append(ExactMatrix.from_rows(ctx, [[ctx.from_angle(angle)]]))
        irreps.append(Irrep(label, 1, matrices))
    return G, irreps


def abelian_invariants(G: FiniteGroup) -> Tuple[int, ...]:
    """交换群的不变因子：ℤ^n / 关系 e_a + e_b − e_{ab}"""
    if not G.is_abelian():
        raise GroupError(f"群 {G.name} 不是交换群")
    rows = []
    for a in range(G.order):
        for b in range(G.order):
            row = [0] * G.order
            row[a] += 1
            row[b] += 1
            row[G.mul[a][b]] -= 1
            rows.append(row)
    return quotient_group(IntegerMatrix.from_rows(rows)).invariants


def schur_multiplier(invariants: Sequence[int]) -> AbelianGroupPresentation:
    """H²(A, ℂ*) = ⊕_{i<j} Z_{gcd(n_i, n_j)}"""
    invariants = list(invariants)
    orders = [math.gcd(a, b) for i, a in enumerate(invariants) for b in invariants[i + 1:]]
    return AbelianGroupPresentation.from_orders(orders)


def _kernel_mod(rows: LatticeEchelon, n: int, modulus: int) -> List[List[Fraction]]:
    """{y ∈ ℤⁿ : r·y ≡ 0 (mod modulus)，r 取遍关系格} 的一组基（列向量）"""
    A, _ = rows.matrix()
    if A.shape[0] == 0:
        return [[Fraction(1 if i == k else 0) for i in range(n)] for k in range(n)]
    red = _SmithReduction(A.data).run()
    basis = []
    for i in range(n):
        d = int(red.a[i, i]) if i < red.rank else 0
        scale = modulus // math.gcd(d, modulus) if d else 1
        basis.append([Fraction(int(red.right[k, i]) * scale) for k in range(n)])
    return basis


def h2_brute(G: FiniteGroup, m: Optional[int] = None) -> AbelianGroupPresentation:
    """Z_m 值规范 2-余循环在 H²(A, ℂ*) 中的像

    取 e = exp(A)，M = m·e。ℂ* 意义下的余边缘 d₁β 若取值于 (1/m)ℤ/ℤ，则 β 取值于
    (1/M)ℤ/ℤ，于是像同构于 L_Z / L_B，其中 L_Z = e·{ω : d₂ω ≡ 0 (mod m)}，
    L_B = {d₁b : d₁b ≡ 0 (mod e)} + Mℤ^N。m = e² 时即为 H²(A, ℂ*)。
    """
    if not G.is_abelian():
        raise GroupError("h2_brute 只适用于交换群")
    if G.order > config.H2_BRUTE_MAX_ORDER:
        raise GroupError(f"群阶 {G.order} 超过暴力计算上限 {config.H2_BRUTE_MAX_ORDER}")
    e = G.exponent
    m = e * e if m is None else m
    if m % e:
        raise GroupError(f"模数 {m} 必须是 exp(A) = {e} 的倍数")
    M = m * e
    others = [g for g in range(G.order) if g != G.identity]
    pair_index = {(g, h): i for i, (g, h) in enumerate(itertools.product(others, others))}
    single_index = {g: i for i, g in enumerate(others)}
    n_pairs = len(pair_index)
    if n_pairs == 0:
        return AbelianGroupPresentation()

    def var(g, h, sign, row):
        if g != G.identity and h != G.identity:
            k = pair_index[(g, h)]
            row[k] = row.get(k, 0) + sign

    cocycle_rows = LatticeEchelon(n_pairs)
    for g, h, k in itertools.product(others, repeat=3):
        row: Dict[int, int] = {}
        var(h, k, 1, row)
        var(G.mul[g][h], k, -1, row)
        var(g, G.mul[h][k], 1, row)
        var(g, h, -1, row)
        cocycle_rows.add(row)
    z_basis = [[v * e for v in col] for col in _kernel_mod(cocycle_rows, n_pairs, m)]

    # d₁: C¹ → C²，列为 b 的坐标
    d1 = np.zeros((len(others), n_pairs), dtype=object)
    for (g, h), k in pair_index.items():
        d1[single_index[g], k] += 1
        d1[single_index[h], k] += 1
        gh = G.mul[g][h]
        if gh != G.identity:
            d1[single_index[gh], k] -= 1
    d1_rows = LatticeEchelon(len(others))
    for k in range(n_pairs):
        d1_rows.add({i: int(d1[i, k]) for i in range(len(others)) if d1[i, k]})
    b_basis = _kernel_mod(d1_rows, len(others), e)
    generators = []
    for b in b_basis:
        generators.append([sum(b[i] * d1[i, k] for i in range(len(others))) for k in range(n_pairs)])
    for k in range(n_pairs):
        generators.append([Fraction(M if j == k else 0) for j in range(n_pairs)])

    Z = IntegerMatrix(np.array([[int(col[k]) for col in z_basis] for k in range(n_pairs)], dtype=object))
    red = _SmithReduction(Z.data).run()
    if red.rank != n_pairs:
        raise GroupError("余循环格不是满秩")
    # 在 L_Z 的基下表示 L_B 的生成元: Z = U⁻¹·S·V⁻¹
    U, S, V = red.left, red.a, red.right
    coords = []
    for gen in generators:
        w = [sum(U[i, k] * gen[k] for k in range(n_pairs)) for i in range(n_pairs)]
        w = [w[i] / int(S[i, i]) for i in range(n_pairs)]
        c = [sum(V[k, i] * w[i] for i in range(n_pairs)) for k in range(n_pairs)]
        if any(x.denominator != 1 for x in c):
            raise GroupError("余边缘不在余循环格中")
        coords.append([int(x) for x in c])
    return quotient_group(IntegerMatrix.from_rows(coords), n_pairs)
