"""
文本文件格式

所有输入输出都是逐行的纯文本：群、不可约表示、交织子基、骨架范畴、
群上的 2-余循环、张量结构。'#' 之后为注释。解析结果是只含字符串和整数的
记录，数值字面量在调用方确定分圆域之后再用 parse_matrix / parse_number 解析。
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from cyclotomic import CycloContext, CycloError, parse_number
from linalg import ExactMatrix


class FormatError(ValueError):
    """文件格式错误"""


# ---- 通用工具 ----

def _clean_lines(text: str) -> List[Tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def _parse_header(line: str, keyword: str, lineno: int = 1) -> Dict[str, str]:
    parts = line.split()
    if not parts or parts[0] != keyword:
        raise FormatError(f"第 {lineno} 行: 应以 '{keyword}' 开头")
    fields = {}
    for item in parts[1:]:
        if "=" not in item:
            raise FormatError(f"第 {lineno} 行: 无法解析字段 {item!r}")
        key, value = item.split("=", 1)
        fields[key] = value
    return fields


def _header_int(fields: Dict[str, str], key: str, lineno: int, default: Optional[int] = None) -> int:
    if key not in fields:
        if default is None:
            raise FormatError(f"第 {lineno} 行: 缺少字段 {key}=")
        return default
    try:
        return int(fields[key])
    except ValueError:
        raise FormatError(f"第 {lineno} 行: 字段 {key} 不是整数: {fields[key]!r}")


def _split_top_level(text: str) -> List[str]:
    """按最外层逗号切分，忽略括号内的逗号"""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i].strip())
            start = i + 1
    tail = text[start:].strip()
    if tail:
        parts.append(tail)
    return parts


def _strip_brackets(text: str) -> str:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise FormatError(f"矩阵字面量应以方括号包围: {text[:40]!r}")
    return text[1:-1]


def parse_matrix(text: str, ctx: CycloContext) -> ExactMatrix:
    """解析 [[a, b], [c, d]] 形式的矩阵字面量"""
    rows = []
    for row_text in _split_top_level(_strip_brackets(text)):
        try:
            rows.append([parse_number(entry, ctx) for entry in _split_top_level(_strip_brackets(row_text))])
        except CycloError as e:
            raise FormatError(f"矩阵元素解析失败: {e}")
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise FormatError(f"矩阵不是矩形: {text[:60]!r}")
    return ExactMatrix.from_rows(ctx, rows)


def _read(path: str) -> str:
    if not os.path.exists(path):
        raise FormatError(f"文件不存在: {path}")
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _write(path: str, text: str):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


# ---- 群 ----

@dataclass
class GroupSpec:
    name: str
    order: int
    generators: Dict[str, Tuple[int, ...]] = field(default_factory=dict)
    table: Optional[List[List[int]]] = None


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: Optional[int] = None) -> Tuple[int, ...]:
    """轮换记号 (1 2)(3 4 5) → 0 起始的像列表"""
    cycles = []
    rest = _CYCLE.sub("", text).strip()
    if rest:
        raise FormatError(f"无法解析置换: {text!r}")
    for body in _CYCLE.findall(text):
        points = [int(p) for p in body.replace(",", " ").split()]
        if any(p < 1 for p in points) or len(set(points)) != len(points):
            raise FormatError(f"非法轮换: ({body})")
        cycles.append(points)
    top = max((p for c in cycles for p in c), default=1)
    degree = max(degree or 0, top)
    images = list(range(degree))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            images[a - 1] = b - 1
    return tuple(images)


def parse_group_text(text: str) -> GroupSpec:
    lines = _clean_lines(text)
    if not lines:
        raise FormatError("群文件为空")
    lineno, header = lines[0]
    fields = _parse_header(header, "group", lineno)
    spec = GroupSpec(fields.get("name", "group"), _header_int(fields, "order", lineno))
    section = None
    raw_gens: List[Tuple[str, str]] = []
    table: List[List[int]] = []
    for lineno, line in lines[1:]:
        if line in ("generators", "table"):
            section = line
            continue
        if section == "generators":
            if ":" not in line:
                raise FormatError(f"第 {lineno} 行: 生成元应写作 'name: (1 2)(3 4)'")
            name, body = line.split(":", 1)
            raw_gens.append((name.strip(), body.strip()))
        elif section == "table":
            try:
                table.append([int(v) for v in line.split()])
            except ValueError:
                raise FormatError(f"第 {lineno} 行: 乘法表只能包含整数")
        else:
            raise FormatError(f"第 {lineno} 行: 缺少 'generators' 或 'table' 小节")
    if raw_gens:
        degree = max(len(parse_cycles(body)) for _, body in raw_gens)
        spec.generators = {name: parse_cycles(body, degree) for name, body in raw_gens}
    if table:
        spec.table = table
    if not raw_gens and not table:
        raise FormatError("群文件既没有生成元也没有乘法表")
    return spec


def read_group_file(path: str) -> GroupSpec:
    return parse_group_text(_read(path))


# ---- 不可约表示 ----

@dataclass
class IrrepSpec:
    label: str
    dim: int
    conductor: int
    matrices: Dict[str, str] = field(default_factory=dict)


def parse_irreps_text(text: str) -> List[IrrepSpec]:
    specs: List[IrrepSpec] = []
    for lineno, line in _clean_lines(text):
        if line.startswith("irrep "):
            parts = line.split()
            if len(parts) < 2 or "=" in parts[1]:
                raise FormatError(f"第 {lineno} 行: 缺少表示标签")
            fields = _parse_header(" ".join([parts[0]] + parts[2:]), "irrep", lineno)
            specs.append(IrrepSpec(
                parts[1], _header_int(fields, "dim", lineno), _header_int(fields, "conductor", lineno, 1)
            ))
        elif ":" in line and specs:
            gen, body = line.split(":", 1)
            specs[-1].matrices[gen.strip()] = body.strip()
        else:
            raise FormatError(f"第 {lineno} 行: 无法识别 {line[:40]!r}")
    if not specs:
        raise FormatError("表示文件中没有 irrep")
    return specs


def read_irreps_file(path: str) -> List[IrrepSpec]:
    return parse_irreps_text(_read(path))


# ---- 交织子基 ----

def parse_bases_text(text: str) -> Dict[Tuple[str, str, str], List[str]]:
    """'basis x y z' 后跟若干 'map: [[...]]' 行，每个映射 H_z → H_x⊗H_y"""
    bases: Dict[Tuple[str, str, str], List[str]] = {}
    current = None
    for lineno, line in _clean_lines(text):
        if line.startswith("basis "):
            parts = line.split()
            if len(parts) != 4:
                raise FormatError(f"第 {lineno} 行: 应为 'basis x y z'")
            current = tuple(parts[1:])
            bases[current] = []
        elif line.startswith("map:") and current is not None:
            bases[current].append(line[4:].strip())
        else:
            raise FormatError(f"第 {lineno} 行: 无法识别 {line[:40]!r}")
    return bases


def read_bases_file(path: str) -> Dict[Tuple[str, str, str], List[str]]:
    return parse_bases_text(_read(path))


# ---- 骨架范畴 ----

@dataclass
class SkeletalSpec:
    name: str
    conductor: int
    labels: List[str]
    unit: str
    fusion: Dict[Tuple[str, str, str], int]
    assoc: Dict[Tuple[str, str, str, str], str]


def parse_skeletal_text(text: str) -> SkeletalSpec:
    lines = _clean_lines(text)
    if not lines:
        raise FormatError("骨架文件为空")
    lineno, header = lines[0]
    fields = _parse_header(header, "skeletal", lineno)
    labels: List[str] = []
    unit = None
    fusion: Dict[Tuple[str, str, str], int] = {}
    assoc: Dict[Tuple[str, str, str, str], str] = {}
    section = None
    for lineno, line in lines[1:]:
        if line in ("fusion", "assoc"):
            section = line
            continue
        if section == "fusion":
            if line.startswith("labels:"):
                labels = line[len("labels:"):].split()
            elif line.startswith("unit:"):
                unit = line[len("unit:"):].strip()
            elif line.startswith("N "):
                m = re.fullmatch(r"N\s+(\S+)\s+(\S+)\s+(\S+)\s*=\s*(\d+)", line)
                if not m:
                    raise FormatError(f"第 {lineno} 行: 融合系数应写作 'N x y z = n'")
                fusion[(m.group(1), m.group(2), m.group(3))] = int(m.group(4))
            else:
                raise FormatError(f"第 {lineno} 行: 无法识别 {line[:40]!r}")
        elif section == "assoc":
            m = re.fullmatch(r"F\s+(\S+)\s+(\S+)\s+(\S+)\s+(\S+)\s*:\s*(.+)", line)
            if not m:
                raise FormatError(f"第 {lineno} 行: 结合子应写作 'F x y z w: [[...]]'")
            assoc[(m.group(1), m.group(2), m.group(3), m.group(4))] = m.group(5)
        else:
            raise FormatError(f"第 {lineno} 行: 缺少 'fusion' 或 'assoc' 小节")
    if not labels or unit is None:
        raise FormatError("fusion 小节缺少 labels: 或 unit:")
    for key in list(fusion) + [k[:3] for k in assoc]:
        for label in key:
            if label not in labels:
                raise FormatError(f"未声明的标签: {label}")
    return SkeletalSpec(
        fields.get("name", "skeletal"), _header_int(fields, "conductor", lineno, 1), labels, unit, fusion, assoc
    )


def read_skeletal_file(path: str) -> SkeletalSpec:
    return parse_skeletal_text(_read(path))


def format_skeletal(category, comments: Sequence[str] = ()) -> str:
    """写出骨架范畴；省略 x、y、z 中含单位元的结合子（恒为单位阵）"""
    lines = [f"# {c}" for c in comments]
    lines.append(f"skeletal name={category.name} conductor={category.ctx.conductor}")
    lines.append("fusion")
    lines.append("labels: " + " ".join(category.labels))
    lines.append(f"unit: {category.unit}")
    for (x, y, z), n in category.fusion.mult.items():
        if category.unit in (x, y):
            continue
        lines.append(f"N {x} {y} {z} = {n}")
    lines.append("assoc")
    for key, F in category.f_items():
        if category.unit in key[:3]:
            continue
        lines.append(f"F {' '.join(key)}: {F.matrix.to_literal()}")
    return "\n".join(lines) + "\n"


def write_skeletal_file(path: str, category, comments: Sequence[str] = ()):
    _write(path, format_skeletal(category, comments))


# ---- 群上的 2-余循环 ----

@dataclass
class CocycleSpec:
    group: str
    conductor: int
    entries: List[Tuple[int, int, str]]


def parse_cocycle_text(text: str) -> CocycleSpec:
    lines = _clean_lines(text)
    if not lines:
        raise FormatError("余循环文件为空")
    lineno, header = lines[0]
    fields = _parse_header(header, "cocycle", lineno)
    if "group" not in fields:
        raise FormatError(f"第 {lineno} 行: 缺少字段 group=")
    entries = []
    for lineno, line in lines[1:]:
        parts = line.split(None, 2)
        if len(parts) != 3:
            raise FormatError(f"第 {lineno} 行: 应为 'g h value'")
        try:
            entries.append((int(parts[0]), int(parts[1]), parts[2]))
        except ValueError:
            raise FormatError(f"第 {lineno} 行: 群元素下标必须是整数")
    return CocycleSpec(fields["group"], _header_int(fields, "conductor", 1, 1), entries)


def read_cocycle_file(path: str) -> CocycleSpec:
    return parse_cocycle_text(_read(path))


def format_cocycle(cocycle) -> str:
    lines = [f"cocycle group={cocycle.group.name} conductor={cocycle.ctx.conductor}"]
    n = cocycle.group.order
    for g in range(n):
        for h in range(n):
            value = cocycle.values[g][h]
            if not value.is_zero():
                lines.append(f"{g} {h} {value.literal()}")
    return "\n".join(lines) + "\n"


def write_cocycle_file(path: str, cocycle):
    _write(path, format_cocycle(cocycle))


# ---- 张量结构 ----

@dataclass
class TensorStructureSpec:
    name: str
    conductor: int
    channels: Dict[Tuple[str, str, str], str]


def parse_tensor_structure_text(text: str) -> TensorStructureSpec:
    lines = _clean_lines(text)
    if not lines:
        raise FormatError("张量结构文件为空")
    lineno, header = lines[0]
    fields = _parse_header(header, "tensor-structure", lineno)
    channels = {}
    for lineno, line in lines[1:]:
        m = re.fullmatch(r"J\s+(\S+)\s+(\S+)\s+(\S+)\s*:\s*(.+)", line)
        if not m:
            raise FormatError(f"第 {lineno} 行: 通道应写作 'J x y z: [[...]]'")
        channels[(m.group(1), m.group(2), m.group(3))] = m.group(4)
    return TensorStructureSpec(fields.get("name", "structure"), _header_int(fields, "conductor", 1, 1), channels)


def read_tensor_structure_file(path: str) -> TensorStructureSpec:
    return parse_tensor_structure_text(_read(path))


def format_tensor_structure(structure, name: str, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"tensor-structure name={name} conductor={structure.ctx.conductor}")
    for (x, y, z), J in structure.channels.items():
        lines.append(f"J {x} {y} {z}: {J.to_literal()}")
    return "\n".join(lines) + "\n"


def write_tensor_structure_file(path: str, structure, name: str, comments: Sequence[str] = ()):
    _write(path, format_tensor_structure(structure, name, comments))


def write_text(path: str, text: str):
    _write(path, text)
