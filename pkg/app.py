#!/usr/bin/env python
"""
不变 2-上同调计算器

命令行入口：
    python app.py compute wall32 --coeff both --out h2_output --branch-report
    python app.py verify h2_output/wall32/unitary/class_1.cocycle --group wall32
    python app.py oracle z4xz2
    python app.py fsymbols s3 s3.skeletal
    python app.py selftest --full
"""

import argparse
import logging
import os
import sys

from tqdm import tqdm

import config
from catalogue import CATALOGUE, CatalogueError, describe_group, format_report, load_entry, parse_invariants
from cocycle_verify import (
    VerificationError, assemble_group_cocycle, check_counital, check_invariance, check_right_cocycle_via_star,
    check_unitary, cocycle_from_spec, left_cocycle_defect,
)
from coherence_solver import SolverError, compute_invariant_h2
from cyclotomic import CycloError
from formats import FormatError, read_cocycle_file, write_cocycle_file, write_skeletal_file, write_tensor_structure_file, write_text
from fusion_data import FusionError, RepresentationCategory, pentagon_check, to_skeletal
from groups_reps import GroupError, abelian_invariants, h2_brute, schur_multiplier, validate_irrep
from linalg import AbelianGroupPresentation, LinalgError

logger = logging.getLogger("app")

# 会被转成退出码 1 的已知错误
KNOWN_ERRORS = (
    CatalogueError, CycloError, FormatError, FusionError, GroupError, LinalgError, SolverError, VerificationError,
)

EXIT_ERROR = 1
EXIT_VERIFICATION_FAILED = 2


def setup_logging(verbose: bool = False):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format=config.LOG_FORMAT,
        datefmt=config.LOG_DATE_FORMAT,
    )


def _status(ok: bool) -> str:
    return "✅" if ok else "❌"


def _result_group(result) -> AbelianGroupPresentation:
    if result.presentation is None:
        raise SolverError(f"{result.name} 的上同调群不是交换群")
    return AbelianGroupPresentation.from_orders(result.presentation.invariants,
                                                result.presentation.free_rank + result.free_rank)


# ---- compute ----

def write_representatives(loaded, result, out_dir: str) -> int:
    """每个类写一个张量结构文件；具体输入另写群余循环文件"""
    os.makedirs(out_dir, exist_ok=True)
    count = 0
    for k, J in enumerate(result.classes):
        comments = [f"{loaded.name} 的第 {k} 个上同调类（{result.coeff}）"]
        write_tensor_structure_file(os.path.join(out_dir, f"class_{k}.tensor"), J, f"{loaded.name}-class{k}", comments)
        count += 1
        if loaded.is_concrete:
            omega = assemble_group_cocycle(loaded.group, loaded.irreps, J, bases=loaded.category.basis)
            write_cocycle_file(os.path.join(out_dir, f"class_{k}.cocycle"), omega)
    return count


def cmd_compute(args) -> int:
    loaded = load_entry(args.input)
    modes = list(config.COEFF_MODES) if args.coeff == "both" else [args.coeff]
    results = {}
    for coeff in modes:
        result = compute_invariant_h2(loaded.category, coeff)
        results[coeff] = result
        report = format_report(result, args.branch_report)
        out_dir = os.path.join(args.out, loaded.name, coeff)
        written = write_representatives(loaded, result, out_dir)
        write_text(os.path.join(out_dir, "report.txt"), report)
        print(report)
        print(f"✅ 已写出 {written} 个代表元到 {out_dir}")
        if loaded.entry is not None and loaded.entry.expected is not None:
            ok = result.describe() == loaded.entry.expected
            print(f"{_status(ok)} 期望 {describe_group(loaded.entry.expected)}（{loaded.entry.provenance}）")
            if not ok:
                return EXIT_VERIFICATION_FAILED
    if len(results) == 2:
        unitary, invertible = len(results["unitary"].classes), len(results["invertible"].classes)
        ok = unitary <= invertible
        print(f"{_status(ok)} θ 单射: 酉类数 {unitary} ≤ 可逆类数 {invertible}")
        if not ok:
            return EXIT_VERIFICATION_FAILED
    return 0


# ---- verify ----

def cmd_verify(args) -> int:
    loaded = load_entry(args.group)
    if not loaded.is_concrete:
        raise CatalogueError(f"{args.group} 不是具体群，无法在群代数中验证")
    omega = cocycle_from_spec(read_cocycle_file(args.cocycle), loaded.group)
    defect = left_cocycle_defect(omega)
    checks = [
        ("左余循环", defect is None),
        ("右余循环（经 *）", check_right_cocycle_via_star(omega)),
        ("共轭不变", check_invariance(omega)),
        ("余单位", check_counital(omega)),
        ("酉性", check_unitary(omega)),
    ]
    print(f"=== {args.cocycle} @ {loaded.group.name} ===")
    for name, ok in checks:
        print(f"  {_status(ok)} {name}")
    if defect is not None:
        a, b, c = (loaded.group.names[i] for i in defect)
        print(f"  见证: 系数 ({a}, {b}, {c}) 两侧不等")
    return 0 if all(ok for _, ok in checks) else EXIT_VERIFICATION_FAILED


# ---- oracle ----

def cmd_oracle(args) -> int:
    entry = CATALOGUE.get(args.spec)
    loaded = load_entry(args.spec)
    if not loaded.is_concrete or not loaded.group.is_abelian():
        raise CatalogueError(f"{args.spec} 不是交换群，预言机不适用")
    invariants = entry.invariants if entry is not None and entry.invariants else \
        (parse_invariants(args.spec) or abelian_invariants(loaded.group))
    formula = schur_multiplier(invariants)
    brute = h2_brute(loaded.group)
    solver = _result_group(compute_invariant_h2(loaded.category, "invertible"))
    print(f"=== {loaded.name}，不变因子 {', '.join(map(str, invariants))} ===")
    print(f"  Schur 乘子公式: {formula}")
    print(f"  h2_brute:       {brute}")
    print(f"  求解器:         {solver}")
    ok = formula == brute == solver
    print(f"{_status(ok)} 三者{'一致' if ok else '不一致'}")
    return 0 if ok else EXIT_VERIFICATION_FAILED


# ---- fsymbols ----

def cmd_fsymbols(args) -> int:
    loaded = load_entry(args.input)
    category = loaded.category
    if isinstance(category, RepresentationCategory):
        category = to_skeletal(category)
    violations = pentagon_check(category)
    write_skeletal_file(args.output, category, [f"{loaded.name} 的 F 符号"])
    print(f"✅ 已写出 {args.output}")
    if violations:
        print(f"❌ pentagon: {len(violations)} 处违例，首个 {violations[0]}")
        return EXIT_VERIFICATION_FAILED
    print("pentagon: ok")
    return 0


# ---- selftest ----

def _validate(loaded) -> list:
    if loaded.is_concrete:
        problems = [p for R in loaded.irreps for p in validate_irrep(loaded.group, R)]
        return problems + loaded.category.fusion.check()
    return [str(v) for v in pentagon_check(loaded.category)]


def cmd_selftest(args) -> int:
    failures = []
    with tqdm(total=len(CATALOGUE), desc="目录自检") as pbar:
        for name, entry in CATALOGUE.items():
            loaded = load_entry(name)
            problems = _validate(loaded)
            if args.full and entry.expected is not None:
                for coeff in config.COEFF_MODES:
                    got = compute_invariant_h2(loaded.category, coeff).describe()
                    if got != entry.expected:
                        problems.append(f"{coeff}: 得到 {got}，期望 {entry.expected}")
            if problems:
                failures.append((name, problems))
            pbar.update(1)
    for name, entry in CATALOGUE.items():
        bad = next((p for n, p in failures if n == name), None)
        print(f"  {_status(bad is None)} {name}" + (f": {bad[0]}" if bad else ""))
    return 0 if not failures else EXIT_VERIFICATION_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Hopf 代数不变 2-上同调的精确计算")
    parser.add_argument("--verbose", action="store_true", help="输出调试日志")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="计算 H²_inv / H²_uinv")
    p.add_argument("input", help="目录名、.group 文件、.skeletal 文件或不变因子（如 2,2）")
    p.add_argument("--coeff", choices=list(config.COEFF_MODES) + ["both"], default=config.DEFAULT_COEFF)
    p.add_argument("--out", default=config.DEFAULT_OUTPUT_DIR, help="输出目录")
    p.add_argument("--branch-report", action="store_true", help="在报告中列出全部候选分支")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="在群代数中逐项验证余循环文件")
    p.add_argument("cocycle", help="余循环文件")
    p.add_argument("--group", required=True, help="目录名或 .group 文件")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="交换群上与 Schur 乘子公式和暴力计算对比")
    p.add_argument("spec", help="不变因子（如 2,2 或 z4xz2）或目录名")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("fsymbols", help="导出 F 符号并检查五边形恒等式")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_fsymbols)

    p = sub.add_parser("selftest", help="读入并校验全部目录项")
    p.add_argument("--full", action="store_true", help="同时重算带期望结果的目录项")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        return args.func(args)
    except KNOWN_ERRORS as e:
        logger.debug("命令失败", exc_info=True)
        print(f"❌ {type(e).__name__}: {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
