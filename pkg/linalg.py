"""
精确线性代数

- ExactMatrix：分圆域上的稠密矩阵（numpy object 数组，元素为 CycloNumber）
- 行最简形、零空间、线性方程组、对偶基
- 整数矩阵的 Smith 标准形、商群、ℚ/ℤ 上的单项式方程组
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from cyclotomic import CycloContext, CycloNumber

logger = logging.getLogger(__name__)


class LinalgError(ValueError):
    """线性代数错误：维数不符、奇异矩阵、方程组无解等"""


_conj = np.frompyfunc(lambda z: z.conjugate(), 1, 1)
_is_zero = np.frompyfunc(lambda z: z.is_zero(), 1, 1)


def _number_array(ctx: CycloContext, rows: Sequence[Sequence]) -> np.ndarray:
    rows = [list(r) for r in rows]
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    data = np.empty((n_rows, n_cols), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != n_cols:
            raise LinalgError("矩阵各行长度不一致")
        for j, v in enumerate(row):
            data[i, j] = ctx.number(v)
    return data


class ExactMatrix:
    """分圆域 ℚ(ζ_N) 上的矩阵，所有元素共享同一个上下文"""

    __slots__ = ("ctx", "data")

    def __init__(self, ctx: CycloContext, data: np.ndarray):
        if data.ndim != 2:
            raise LinalgError(f"需要二维数组，得到 {data.ndim} 维")
        self.ctx = ctx
        self.data = data

    # ---- 构造 ----
    @classmethod
    def from_rows(cls, ctx: CycloContext, rows: Sequence[Sequence]) -> "ExactMatrix":
        return cls(ctx, _number_array(ctx, rows))

    @classmethod
    def zeros(cls, ctx: CycloContext, rows: int, cols: int) -> "ExactMatrix":
        data = np.empty((rows, cols), dtype=object)
        data.fill(ctx.zero)
        return cls(ctx, data)

    @classmethod
    def identity(cls, ctx: CycloContext, n: int) -> "ExactMatrix":
        m = cls.zeros(ctx, n, n)
        for i in range(n):
            m.data[i, i] = ctx.one
        return m

    @classmethod
    def scalar(cls, ctx: CycloContext, value, n: int) -> "ExactMatrix":
        m = cls.zeros(ctx, n, n)
        value = ctx.number(value)
        for i in range(n):
            m.data[i, i] = value
        return m

    @classmethod
    def column(cls, ctx: CycloContext, values: Sequence) -> "ExactMatrix":
        return cls.from_rows(ctx, [[v] for v in values])

    # ---- 形状与访问 ----
    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __getitem__(self, key):
        return self.data[key]

    def copy(self) -> "ExactMatrix":
        return ExactMatrix(self.ctx, self.data.copy())

    # ---- 运算 ----
    def _check(self, other: "ExactMatrix"):
        if other.ctx is not self.ctx:
            raise LinalgError(f"矩阵导子不一致: {self.ctx.conductor} 与 {other.ctx.conductor}")

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise LinalgError(f"维数不匹配: {self.shape} @ {other.shape}")
        if self.cols == 0:
            return ExactMatrix.zeros(self.ctx, self.rows, other.cols)
        return ExactMatrix(self.ctx, self.data @ other.data)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        return ExactMatrix(self.ctx, self.data + other.data)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        return ExactMatrix(self.ctx, self.data - other.data)

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(self.ctx, -self.data)

    def scale(self, value) -> "ExactMatrix":
        value = self.ctx.number(value)
        return ExactMatrix(self.ctx, self.data * value)

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        """张量积，左因子为主序: (A⊗B)[i·p + k, j·q + l] = A[i,j]·B[k,l]"""
        self._check(other)
        (r1, c1), (r2, c2) = self.shape, other.shape
        outer = np.multiply.outer(self.data, other.data)
        return ExactMatrix(self.ctx, outer.transpose(0, 2, 1, 3).reshape(r1 * r2, c1 * c2))

    def conjugate_transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.ctx, _conj(self.data).T.copy())

    @property
    def H(self) -> "ExactMatrix":
        return self.conjugate_transpose()

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.ctx, self.data.T.copy())

    def trace(self) -> CycloNumber:
        total = self.ctx.zero
        for i in range(min(self.shape)):
            total = total + self.data[i, i]
        return total

    def embed(self, target: CycloContext) -> "ExactMatrix":
        if target is self.ctx:
            return self
        data = np.frompyfunc(lambda z: z.embed(target), 1, 1)(self.data).astype(object)
        return ExactMatrix(target, data.reshape(self.shape))

    def inverse(self) -> "ExactMatrix":
        n = self.rows
        if n != self.cols:
            raise LinalgError(f"非方阵不可逆: {self.shape}")
        aug = np.concatenate([self.data, ExactMatrix.identity(self.ctx, n).data], axis=1)
        reduced, pivots = _rref(aug, n)
        if pivots != list(range(n)):
            raise LinalgError("矩阵奇异，不可逆")
        return ExactMatrix(self.ctx, reduced[:, n:].copy())

    def rank(self) -> int:
        return len(_rref(self.data)[1])

    # ---- 谓词 ----
    def is_zero(self) -> bool:
        return all(z.is_zero() for z in self.data.flat)

    def is_identity(self) -> bool:
        return self == ExactMatrix.identity(self.ctx, self.rows) if self.rows == self.cols else False

    def is_unitary(self) -> bool:
        return self.rows == self.cols and (self.H @ self).is_identity()

    def scalar_multiple_of_identity(self) -> Optional[CycloNumber]:
        """若矩阵为 c·I，返回 c"""
        if self.rows != self.cols or self.rows == 0:
            return None
        c = self.data[0, 0]
        for i in range(self.rows):
            for j in range(self.cols):
                expected = c if i == j else self.ctx.zero
                if self.data[i, j] != expected:
                    return None
        return c

    def proportionality(self, other: "ExactMatrix") -> Optional[CycloNumber]:
        """返回 κ 使 self = κ·other；other 为零或不成比例时返回 None"""
        self._check(other)
        if self.shape != other.shape:
            return None
        kappa = None
        for a, b in zip(self.data.flat, other.data.flat):
            if b.is_zero():
                if not a.is_zero():
                    return None
                continue
            if kappa is None:
                kappa = a / b
            elif a != kappa * b:
                return None
        return kappa

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if other.ctx is not self.ctx or self.shape != other.shape:
            return False
        return all(a == b for a, b in zip(self.data.flat, other.data.flat))

    def __hash__(self):
        return hash((self.ctx.conductor, self.shape, tuple(self.data.flat)))

    # ---- 输出 ----
    def to_literal(self) -> str:
        return "[" + ", ".join("[" + ", ".join(z.literal() for z in row) + "]" for row in self.data) + "]"

    def __repr__(self):
        return f"ExactMatrix({self.to_literal()}, N={self.ctx.conductor})"

    def vec(self) -> List[CycloNumber]:
        """按列主序展开"""
        return list(self.data.T.flat)

    @classmethod
    def unvec(cls, ctx: CycloContext, values: Sequence[CycloNumber], rows: int, cols: int) -> "ExactMatrix":
        data = np.empty((rows, cols), dtype=object)
        for c in range(cols):
            for r in range(rows):
                data[r, c] = values[c * rows + r]
        return cls(ctx, data)


def block_diagonal(ctx: CycloContext, blocks: Sequence[ExactMatrix]) -> ExactMatrix:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    out = ExactMatrix.zeros(ctx, n, m)
    r = c = 0
    for b in blocks:
        out.data[r:r + b.rows, c:c + b.cols] = b.data
        r += b.rows
        c += b.cols
    return out


def _rref(data: np.ndarray, limit: Optional[int] = None) -> Tuple[np.ndarray, List[int]]:
    """Gauss-Jordan 消元：主元取最左列、该列最上方的非零元；只在前 limit 列中选主元"""
    a = data.copy()
    n_rows, n_cols = a.shape
    limit = n_cols if limit is None else limit
    pivots: List[int] = []
    r = 0
    for c in range(limit):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if not a[i, c].is_zero()), None)
        if p is None:
            continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        piv = a[r, c]
        if piv != 1:
            a[r, c:] = a[r, c:] * piv.inverse()
        for i in range(n_rows):
            if i != r:
                f = a[i, c]
                if not f.is_zero():
                    a[i, c:] = a[i, c:] - f * a[r, c:]
        pivots.append(c)
        r += 1
    return a, pivots


def rref(M: ExactMatrix) -> Tuple[ExactMatrix, List[int]]:
    reduced, pivots = _rref(M.data)
    return ExactMatrix(M.ctx, reduced), pivots


def rref_nullspace(M: ExactMatrix) -> List[ExactMatrix]:
    """右零空间的基（列向量），每个自由变量对应一个基向量，该分量取 1"""
    reduced, pivots = _rref(M.data)
    ctx = M.ctx
    pivot_set = set(pivots)
    basis = []
    for f in range(M.cols):
        if f in pivot_set:
            continue
        v = [ctx.zero] * M.cols
        v[f] = ctx.one
        for i, p in enumerate(pivots):
            v[p] = -reduced[i, f]
        basis.append(ExactMatrix.column(ctx, v))
    return basis


@dataclass
class LinearSolution:
    """线性方程组的解：一个特解加上齐次方程组的自由方向"""

    particular: ExactMatrix
    free_directions: List[ExactMatrix] = field(default_factory=list)

    @property
    def free_count(self) -> int:
        return len(self.free_directions)


def solve_linear(M: ExactMatrix, b: Sequence) -> Optional[LinearSolution]:
    """解 M·x = b；无解返回 None，自由变量取 0 得特解"""
    ctx = M.ctx
    if len(b) != M.rows:
        raise LinalgError(f"右端长度 {len(b)} 与行数 {M.rows} 不符")
    rhs = np.empty((M.rows, 1), dtype=object)
    for i, v in enumerate(b):
        rhs[i, 0] = ctx.number(v)
    aug = np.concatenate([M.data, rhs], axis=1) if M.rows else np.empty((0, M.cols + 1), dtype=object)
    reduced, pivots = _rref(aug)
    if M.cols in pivots:
        return None
    x = [ctx.zero] * M.cols
    for i, p in enumerate(pivots):
        x[p] = reduced[i, M.cols]
    return LinearSolution(ExactMatrix.column(ctx, x), rref_nullspace(M))


def solve_unique(M: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    """解 M·X = B，要求 M 列满秩且方程组相容"""
    if M.rows != B.rows:
        raise LinalgError(f"维数不匹配: {M.shape} 与 {B.shape}")
    aug = np.concatenate([M.data, B.data], axis=1)
    reduced, pivots = _rref(aug)
    if pivots != list(range(M.cols)):
        raise LinalgError("系数矩阵不是列满秩或方程组无解")
    return ExactMatrix(M.ctx, reduced[:M.cols, M.cols:].copy())


def dual_basis(maps: Sequence[ExactMatrix]) -> List[ExactMatrix]:
    """对偶族 S_i⁺ = d·Σ_j (G⁻¹)_{ij} S_j*，G_{ij} = tr(S_i* S_j)，d 为源空间维数

    对不可约源空间，Schur 引理给出 S_i⁺ S_j = δ_{ij}·id，结果逐一核对。
    """
    if not maps:
        return []
    ctx = maps[0].ctx
    d = maps[0].cols
    adjoints = [S.H for S in maps]
    gram = ExactMatrix.from_rows(ctx, [[(Si @ Sj).trace() for Sj in maps] for Si in adjoints])
    try:
        ginv = gram.inverse()
    except LinalgError:
        raise LinalgError("Gram 矩阵奇异，输入映射线性相关")
    duals = []
    for i in range(len(maps)):
        acc = ExactMatrix.zeros(ctx, d, maps[0].rows)
        for j, Sj_adj in enumerate(adjoints):
            coeff = ginv.data[i, j]
            if not coeff.is_zero():
                acc = acc + Sj_adj.scale(coeff * d)
        duals.append(acc)
    identity = ExactMatrix.identity(ctx, d)
    zero = ExactMatrix.zeros(ctx, d, d)
    for i, Si_dual in enumerate(duals):
        for j, Sj in enumerate(maps):
            if Si_dual @ Sj != (identity if i == j else zero):
                raise LinalgError(f"对偶基校验失败: S_{i}⁺ S_{j}")
    return duals


# ---- 整数矩阵与 Smith 标准形 ----

class IntegerMatrix:
    """整数矩阵（numpy object 数组，元素为 Python int）"""

    __slots__ = ("data",)

    def __init__(self, data):
        data = np.array(data, dtype=object)
        if data.ndim == 1:
            data = data.reshape(1, -1) if data.size else data.reshape(0, 0)
        self.data = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntegerMatrix":
        rows = [[int(v) for v in r] for r in rows]
        if not rows:
            return cls(np.zeros((0, cols or 0), dtype=object))
        return cls(rows)

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        data = np.zeros((n, n), dtype=object)
        for i in range(n):
            data[i, i] = 1
        return cls(data)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.shape[1] == 0:
            return IntegerMatrix(np.zeros((self.shape[0], other.shape[1]), dtype=object))
        return IntegerMatrix(self.data @ other.data)

    def __eq__(self, other):
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self.data == other.data))

    def tolist(self) -> List[List[int]]:
        return [[int(v) for v in row] for row in self.data]

    def diagonal(self) -> List[int]:
        return [int(self.data[i, i]) for i in range(min(self.shape))]

    def __repr__(self):
        return f"IntegerMatrix({self.tolist()})"


class _SmithReduction:
    """对整数矩阵做初等行列变换化为 Smith 标准形

    left 与 rhs 跟随行变换，right 跟随列变换。
    主元取绝对值最小的非零元，按 (行, 列) 先后打破平局。
    """

    def __init__(self, a: np.ndarray, rhs: Optional[List[Fraction]] = None, track: bool = True):
        self.a = a.copy()
        m, n = self.a.shape
        self.left = IntegerMatrix.identity(m).data if track else None
        self.right = IntegerMatrix.identity(n).data if track else None
        self.rhs = list(rhs) if rhs is not None else None

    def swap_rows(self, i: int, j: int):
        if i == j:
            return
        self.a[[i, j]] = self.a[[j, i]]
        if self.left is not None:
            self.left[[i, j]] = self.left[[j, i]]
        if self.rhs is not None:
            self.rhs[i], self.rhs[j] = self.rhs[j], self.rhs[i]

    def swap_cols(self, i: int, j: int):
        if i == j:
            return
        self.a[:, [i, j]] = self.a[:, [j, i]]
        if self.right is not None:
            self.right[:, [i, j]] = self.right[:, [j, i]]

    def row_axpy(self, target: int, source: int, q: int):
        """row_target += q·row_source"""
        self.a[target] = self.a[target] + q * self.a[source]
        if self.left is not None:
            self.left[target] = self.left[target] + q * self.left[source]
        if self.rhs is not None:
            self.rhs[target] = (self.rhs[target] + q * self.rhs[source]) % 1

    def col_axpy(self, target: int, source: int, q: int):
        """col_target += q·col_source"""
        self.a[:, target] = self.a[:, target] + q * self.a[:, source]
        if self.right is not None:
            self.right[:, target] = self.right[:, target] + q * self.right[:, source]

    def negate_row(self, i: int):
        self.a[i] = -self.a[i]
        if self.left is not None:
            self.left[i] = -self.left[i]
        if self.rhs is not None:
            self.rhs[i] = (-self.rhs[i]) % 1

    def _move_smallest(self, t: int) -> bool:
        sub = self.a[t:, t:]
        if sub.size == 0:
            return False
        absval = np.abs(sub)
        mask = absval != 0
        if not mask.any():
            return False
        positions = np.argwhere(mask)
        k = int(np.argmin(absval[mask]))
        i, j = positions[k]
        self.swap_rows(t, t + int(i))
        self.swap_cols(t, t + int(j))
        return True

    def run(self) -> "_SmithReduction":
        a = self.a
        m, n = a.shape
        t = 0
        while t < min(m, n) and self._move_smallest(t):
            while True:
                p = a[t, t]
                dirty = False
                for i in np.nonzero(a[t + 1:, t])[0]:
                    i = t + 1 + int(i)
                    self.row_axpy(i, t, -(a[i, t] // p))
                    dirty = dirty or a[i, t] != 0
                for j in np.nonzero(a[t, t + 1:])[0]:
                    j = t + 1 + int(j)
                    self.col_axpy(j, t, -(a[t, j] // p))
                    dirty = dirty or a[t, j] != 0
                if dirty:
                    best = (abs(a[t, t]), t, t)
                    for i in range(t + 1, m):
                        if a[i, t] and abs(a[i, t]) < best[0]:
                            best = (abs(a[i, t]), i, t)
                    for j in range(t + 1, n):
                        if a[t, j] and abs(a[t, j]) < best[0]:
                            best = (abs(a[t, j]), t, j)
                    self.swap_rows(t, best[1])
                    self.swap_cols(t, best[2])
                    continue
                rest = a[t + 1:, t + 1:]
                if rest.size:
                    bad = np.argwhere((rest % p) != 0)
                    if len(bad):
                        self.row_axpy(t, t + 1 + int(bad[0][0]), 1)
                        continue
                break
            if a[t, t] < 0:
                self.negate_row(t)
            t += 1
        self.rank = t
        return self


class SmithForm(NamedTuple):
    U: IntegerMatrix
    S: IntegerMatrix
    V: IntegerMatrix


def smith_normal_form(A: IntegerMatrix) -> SmithForm:
    """U·A·V = S，U、V 幺模，S 对角且 d₁ | d₂ | …"""
    red = _SmithReduction(A.data).run()
    return SmithForm(IntegerMatrix(red.left), IntegerMatrix(red.a), IntegerMatrix(red.right))


@dataclass(frozen=True)
class AbelianGroupPresentation:
    """有限生成交换群 ℤ^r ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k，d₁ | d₂ | …，d_i ≥ 2"""

    free_rank: int = 0
    invariants: Tuple[int, ...] = ()

    @classmethod
    def from_orders(cls, orders: Iterable[int], free_rank: int = 0) -> "AbelianGroupPresentation":
        """任意循环因子的直和，化为不变因子形式"""
        orders = [abs(int(o)) for o in orders if abs(int(o)) != 1]
        free_rank += sum(1 for o in orders if o == 0)
        orders = [o for o in orders if o]
        if not orders:
            return cls(free_rank, ())
        diag = np.zeros((len(orders), len(orders)), dtype=object)
        for i, o in enumerate(orders):
            diag[i, i] = o
        red = _SmithReduction(diag, track=False).run()
        inv = tuple(int(d) for d in np.diagonal(red.a) if d > 1)
        return cls(free_rank, inv)

    @property
    def order(self) -> Optional[int]:
        if self.free_rank:
            return None
        out = 1
        for d in self.invariants:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariants

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariants)
        return " × ".join(parts) if parts else "1"


def quotient_group(relations: IntegerMatrix, n: Optional[int] = None) -> AbelianGroupPresentation:
    """ℤⁿ / 行空间(relations) 的不变因子"""
    n = relations.shape[1] if n is None else n
    if relations.shape[0] == 0 or n == 0:
        return AbelianGroupPresentation(n, ())
    red = _SmithReduction(relations.data, track=False).run()
    diag = [int(red.a[i, i]) for i in range(red.rank)]
    return AbelianGroupPresentation(n - red.rank, tuple(d for d in diag if d > 1))


# ---- ℚ/ℤ 上的单项式方程组 ----

def _ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """返回 (g, x, y)，x·a + y·b = g > 0"""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _combine(a: Dict[int, int], ca: int, b: Dict[int, int], cb: int) -> Dict[int, int]:
    out = {}
    for k in set(a) | set(b):
        v = ca * a.get(k, 0) + cb * b.get(k, 0)
        if v:
            out[k] = v
    return out


class LatticeEchelon:
    """关系格的增量整数行阶梯形，右端在 ℚ/ℤ 中随行变换

    每条关系 Σ_k e_k x_k ≡ β (mod 1)；插入时用扩展 gcd 做幺模组合，
    零行且右端非零即为不相容。
    """

    def __init__(self, n: int):
        self.n = n
        self._rows: Dict[int, Tuple[Dict[int, int], Fraction]] = {}
        self.consistent = True
        self.witness: Optional[Dict[int, int]] = None

    def add(self, row: Dict[int, int], rhs=Fraction(0), origin=None) -> bool:
        row = {k: int(v) for k, v in row.items() if v}
        rhs = Fraction(rhs) % 1
        while row:
            p = min(row)
            a = row[p]
            entry = self._rows.get(p)
            if entry is None:
                if a < 0:
                    row = {k: -v for k, v in row.items()}
                    rhs = (-rhs) % 1
                self._rows[p] = (row, rhs)
                return True
            brow, brhs = entry
            b = brow[p]
            if a % b == 0:
                q = a // b
                row = _combine(row, 1, brow, -q)
                rhs = (rhs - q * brhs) % 1
                continue
            g, x, y = _ext_gcd(b, a)
            new = _combine(brow, x, row, y)
            new_rhs = (x * brhs + y * rhs) % 1
            row = _combine(brow, a // g, row, -(b // g))
            rhs = ((a // g) * brhs - (b // g) * rhs) % 1
            self._rows[p] = (new, new_rhs)
        if rhs != 0:
            if self.consistent:
                self.witness = origin
            self.consistent = False
            return False
        return True

    def __len__(self):
        return len(self._rows)

    def rows(self) -> List[Tuple[Dict[int, int], Fraction]]:
        return [self._rows[p] for p in sorted(self._rows)]

    def matrix(self) -> Tuple[IntegerMatrix, List[Fraction]]:
        rows = self.rows()
        data = np.zeros((len(rows), self.n), dtype=object)
        for i, (row, _) in enumerate(rows):
            for k, v in row.items():
                data[i, k] = v
        return IntegerMatrix(data), [rhs for _, rhs in rows]


@dataclass
class ModularSolution:
    """A·x ≡ β (mod 1) 的解集：x₀ + Hom(ℤⁿ/行空间(A), ℚ/ℤ)

    character_basis[i] 是 ℤ/d_i 因子的生成特征在坐标上的取值（分母整除 d_i）。
    """

    particular: List[Fraction]
    torsion: Tuple[int, ...]
    free_rank: int
    character_basis: List[List[Fraction]]
    free_directions: List[List[int]] = field(default_factory=list)

    @property
    def torsion_count(self) -> int:
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def characters(self) -> Iterator[List[Fraction]]:
        """遍历有限部分的全部特征 Σ a_i·f_i，a_i ∈ ℤ/d_i，按字典序"""
        n = len(self.particular)
        for coeffs in itertools.product(*(range(d) for d in self.torsion)):
            vec = [Fraction(0)] * n
            for a, basis in zip(coeffs, self.character_basis):
                if a:
                    for k in range(n):
                        vec[k] = (vec[k] + a * basis[k]) % 1
            yield vec

    def solutions(self) -> Iterator[List[Fraction]]:
        for ch in self.characters():
            yield [(x + c) % 1 for x, c in zip(self.particular, ch)]


def solve_modular(echelon: LatticeEchelon) -> Optional[ModularSolution]:
    """用 Smith 标准形解 ℚ/ℤ 上的方程组；不相容时返回 None"""
    if not echelon.consistent:
        return None
    n = echelon.n
    A, beta = echelon.matrix()
    if A.shape[0] == 0:
        identity = IntegerMatrix.identity(n).data
        return ModularSolution(
            [Fraction(0)] * n, (), n, [], [[int(v) for v in identity[:, k]] for k in range(n)]
        )
    red = _SmithReduction(A.data, rhs=beta).run()
    r = red.rank
    diag = [int(red.a[i, i]) for i in range(r)]
    if any(red.rhs[i] % 1 for i in range(r, len(red.rhs))):
        return None
    y = [Fraction(0)] * n
    for i in range(r):
        y[i] = Fraction(red.rhs[i]) / diag[i]
    V = red.right
    particular = [sum((V[k, i] * y[i] for i in range(r)), Fraction(0)) % 1 for k in range(n)]
    torsion, basis = [], []
    for i in range(r):
        if diag[i] > 1:
            torsion.append(diag[i])
            basis.append([Fraction(int(V[k, i]), diag[i]) % 1 for k in range(n)])
    free = [[int(V[k, i]) for k in range(n)] for i in range(r, n)]
    return ModularSolution(particular, tuple(torsion), n - r, basis, free)
