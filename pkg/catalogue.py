"""
内置输入目录与结果报告

目录中的每一项要么是具体有限群（群文件 + 表示文件 + 可选的交织子基文件，
或由不变因子生成的交换群），要么是骨架融合范畴文件。期望结果附带出处说明。
"""

from __future__ import annotations

import logging
import os
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import config
from coherence_solver import CohomologyGroup
from formats import parse_matrix, read_bases_file, read_skeletal_file
from fusion_data import RepresentationCategory, category_from_spec
from groups_reps import FiniteGroup, Irrep, abelian_group, load_group_with_irreps

logger = logging.getLogger(__name__)


class CatalogueError(ValueError):
    """目录项不存在或数据文件缺失"""


@dataclass(frozen=True)
class CatalogueEntry:
    name: str
    kind: str  # "concrete" 或 "skeletal"
    files: Tuple[str, ...] = ()
    invariants: Tuple[int, ...] = ()
    expected: Optional[str] = None
    provenance: str = ""

    @property
    def is_abelian(self) -> bool:
        return bool(self.invariants)


CATALOGUE: Dict[str, CatalogueEntry] = {
    # Z/8 ⋊ Aut(Z/8)：酉系数与可逆系数下都是 Z/2
    "wall32": CatalogueEntry(
        "wall32", "concrete", ("wall32.group", "wall32.irreps", "wall32.bases"),
        expected="Z/2", provenance="Z/8 ⋊ Aut(Z/8) 的 32 维群代数，两种系数下均为 Z/2",
    ),
    # Kac-Paljutkin 代数的表示范畴
    "ty-k4-kp": CatalogueEntry(
        "ty-k4-kp", "skeletal", ("ty-k4-kp.skeletal",),
        expected="1", provenance="TY(K₄, χ, +1/2)，不变 2-上同调平凡",
    ),
    "s3": CatalogueEntry(
        "s3", "concrete", ("s3.group", "s3.irreps"),
        expected="1", provenance="对称群的不变 2-上同调平凡",
    ),
    "s4": CatalogueEntry(
        "s4", "concrete", ("s4.group", "s4.irreps"),
        expected="1", provenance="对称群的不变 2-上同调平凡",
    ),
    "k4": CatalogueEntry(
        "k4", "concrete", invariants=(2, 2),
        expected="Z/2", provenance="Schur 乘子公式 ⊕_{i<j} Z/gcd(n_i, n_j)",
    ),
    "z2^3": CatalogueEntry(
        "z2^3", "concrete", invariants=(2, 2, 2),
        expected="Z/2 × Z/2 × Z/2", provenance="Schur 乘子公式",
    ),
    "z4xz2": CatalogueEntry(
        "z4xz2", "concrete", invariants=(4, 2),
        expected="Z/2", provenance="Schur 乘子公式",
    ),
    "z6": CatalogueEntry("z6", "concrete", invariants=(6,), expected="1", provenance="循环群的 Schur 乘子平凡"),
    "z8": CatalogueEntry("z8", "concrete", invariants=(8,), expected="1", provenance="循环群的 Schur 乘子平凡"),
    # 两者都没有非内的保类自同构，中心为 Z/2
    "q8": CatalogueEntry(
        "q8", "concrete", ("q8.group", "q8.irreps"),
        expected="1", provenance="四元数群：不变 2-上同调平凡",
    ),
    "d4": CatalogueEntry(
        "d4", "concrete", ("d4.group", "d4.irreps"),
        expected="1", provenance="8 阶二面体群：不变 2-上同调平凡",
    ),
}


@dataclass
class LoadedInput:
    name: str
    category: object
    group: Optional[FiniteGroup] = None
    irreps: Optional[List[Irrep]] = None
    entry: Optional[CatalogueEntry] = None

    @property
    def is_concrete(self) -> bool:
        return self.group is not None


def _path(filename: str) -> str:
    path = os.path.join(config.CATALOGUE_DIR, filename)
    if not os.path.exists(path):
        raise CatalogueError(f"目录数据文件缺失: {path}")
    return path


def _load_bases(path: str, irreps: Sequence[Irrep]) -> Dict[Tuple[str, str, str], list]:
    ctx = irreps[0].ctx
    return {key: [parse_matrix(text, ctx) for text in maps] for key, maps in read_bases_file(path).items()}


def _concrete(name: str, group_path: str, irreps_path: str, bases_path: Optional[str] = None,
              entry: Optional[CatalogueEntry] = None) -> LoadedInput:
    G, irreps = load_group_with_irreps(group_path, irreps_path)
    if G.order > config.MAX_GROUP_ORDER:
        raise CatalogueError(f"群阶 {G.order} 超过上限 {config.MAX_GROUP_ORDER}")
    bases = _load_bases(bases_path, irreps) if bases_path else None
    category = RepresentationCategory(G, irreps, bases, name)
    return LoadedInput(name, category, G, irreps, entry)


def parse_invariants(text: str) -> Optional[Tuple[int, ...]]:
    """'2,2'、'z4xz2'、'z2^3' → 不变因子；无法识别时返回 None"""
    text = text.strip().lower()
    if re.fullmatch(r"\d+(\s*,\s*\d+)*", text):
        return tuple(int(v) for v in text.split(","))
    factors = []
    for part in text.split("x"):
        m = re.fullmatch(r"z(\d+)(?:\^(\d+))?", part)
        if not m:
            return None
        factors.extend([int(m.group(1))] * int(m.group(2) or 1))
    return tuple(factors) if factors else None


def load_entry(name: str) -> LoadedInput:
    """按目录名、骨架文件路径、群文件路径或不变因子读入输入"""
    entry = CATALOGUE.get(name)
    if entry is not None:
        logger.info("读入目录项 %s", name)
        if entry.is_abelian:
            G, irreps = abelian_group(entry.invariants, name)
            return LoadedInput(name, RepresentationCategory(G, irreps, name=name), G, irreps, entry)
        if entry.kind == "skeletal":
            return LoadedInput(name, category_from_spec(read_skeletal_file(_path(entry.files[0]))), entry=entry)
        paths = [_path(f) for f in entry.files]
        return _concrete(name, *paths, entry=entry)
    if name.endswith(".skeletal"):
        return LoadedInput(os.path.basename(name)[:-len(".skeletal")], category_from_spec(read_skeletal_file(name)))
    if name.endswith(".group"):
        stem = name[:-len(".group")]
        irreps_path = stem + ".irreps"
        if not os.path.exists(irreps_path):
            raise CatalogueError(f"缺少表示文件 {irreps_path}")
        bases_path = stem + ".bases" if os.path.exists(stem + ".bases") else None
        return _concrete(os.path.basename(stem), name, irreps_path, bases_path)
    invariants = parse_invariants(name)
    if invariants:
        G, irreps = abelian_group(invariants)
        return LoadedInput(G.name, RepresentationCategory(G, irreps, name=G.name), G, irreps)
    raise CatalogueError(f"未知输入: {name}（可用目录项: {', '.join(CATALOGUE)}）")


# ---- 报告 ----

def describe_group(text: str) -> str:
    return "1 (trivial group)" if text == "1" else text


def _branch_lines(result: CohomologyGroup) -> List[str]:
    lines = [f"候选分支: {len(result.candidates)} 个，存活 {sum(c.alive for c in result.candidates)} 个"]
    for cand in result.candidates:
        psi = ", ".join(f"ψ({label}) = {value.literal()}" for label, value in cand.psi) or "无"
        status = "存活" if cand.alive else f"淘汰: {cand.reason}"
        lines.append(f"  [{cand.index}] {psi} → {status}")
        if cand.generators:
            values = dict(cand.psi)
            on_gens = ", ".join(f"ψ({g}) = {values[g].literal()}" for g in cand.generators)
            lines.append(f"      生成元上: {on_gens}")
        if cand.shapes:
            channel, shape = next(iter(cand.shapes.items()))
            lines.append(f"      J^{{{channel[0]},{channel[1]}}}_{{{channel[2]}}} ∝ {shape.to_literal()}")
        if cand.solution is not None:
            sol = cand.solution
            lines.append(f"      类数 {len(sol.representatives)}，自由秩 {sol.free_rank}，规范秩 {sol.gauge_rank}")
    return lines


def format_report(result: CohomologyGroup, branch_report: bool = False) -> str:
    mode = config.COEFF_MODES[result.coeff]
    lines = [
        f"输入: {result.name}",
        f"系数: {result.coeff}（{mode['name']}）",
        f"未知通道: {result.unknown_count}，单项式关系: {result.monomial_count}，矩阵关系: {result.matrix_relation_count}",
        f"规范稳定子: {result.stabilizer}",
        f"{mode['symbol']} = H² ≅ {describe_group(result.describe())}",
        f"类数: {len(result.classes)}",
        "乘法表:",
    ]
    for row in result.table:
        lines.append("  " + " ".join(str(k) for k in row))
    if result.certificates:
        passed = all(all(c.values()) for c in result.certificates)
        names = sorted({name for c in result.certificates for name in c})
        lines.append(f"独立校验: {'通过' if passed else '失败'} ({', '.join(names)})")
    if branch_report:
        lines.extend(_branch_lines(result))
    return "\n".join(lines) + "\n"
