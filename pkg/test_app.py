#!/usr/bin/env python
"""
命令行测试：直接调用 app.main，检查退出码、报告与输出文件
"""

import os

import pytest

import app
from catalogue import load_entry
from coherence_solver import structure_from_spec, verify_tensor_structure
from formats import read_tensor_structure_file


def test_compute_ty(tmp_path, capsys):
    code = app.main(["compute", "ty-k4-kp", "--coeff", "both", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "H²_uinv = H² ≅ 1 (trivial group)" in out
    assert "H²_inv = H² ≅ 1 (trivial group)" in out
    assert "θ 单射" in out
    for coeff in ("unitary", "invertible"):
        folder = tmp_path / "ty-k4-kp" / coeff
        assert sorted(os.listdir(folder)) == ["class_0.tensor", "report.txt"]


def test_compute_wall_and_verify(tmp_path, capsys):
    code = app.main(["compute", "wall32", "--coeff", "both", "--out", str(tmp_path), "--branch-report"])
    out = capsys.readouterr().out
    assert code == 0
    assert "H² ≅ Z/2" in out
    assert "候选分支: 4 个，存活 2 个" in out
    folder = tmp_path / "wall32" / "unitary"
    assert sorted(f for f in os.listdir(folder) if f.endswith(".tensor")) == ["class_0.tensor", "class_1.tensor"]
    report = (folder / "report.txt").read_text(encoding="utf-8")
    assert "H²_uinv = H² ≅ Z/2" in report
    category = load_entry("wall32").category
    J = structure_from_spec(read_tensor_structure_file(str(folder / "class_1.tensor")), category)
    assert verify_tensor_structure(category, J, unitary=True) == []

    code = app.main(["verify", str(folder / "class_1.cocycle"), "--group", "wall32"])
    out = capsys.readouterr().out
    assert code == 0
    assert "❌" not in out


def test_verify_reports_failure(tmp_path, capsys):
    path = tmp_path / "bad.cocycle"
    path.write_text("cocycle group=z2 conductor=1\n0 0 1\n0 1 1\n", encoding="utf-8")
    code = app.main(["verify", str(path), "--group", "2"])
    out = capsys.readouterr().out
    assert code == app.EXIT_VERIFICATION_FAILED
    assert "❌ 余单位" in out


@pytest.mark.parametrize("spec", ["z4xz2", "2,2", "k4"])
def test_oracle(spec, capsys):
    code = app.main(["oracle", spec])
    out = capsys.readouterr().out
    assert code == 0
    assert "三者一致" in out
    assert "Z/2" in out


def test_oracle_rejects_nonabelian(capsys):
    assert app.main(["oracle", "s3"]) == app.EXIT_ERROR
    assert "CatalogueError" in capsys.readouterr().out


def test_fsymbols(tmp_path, capsys):
    target = tmp_path / "s3.skeletal"
    code = app.main(["fsymbols", "s3", str(target)])
    out = capsys.readouterr().out
    assert code == 0
    assert "pentagon: ok" in out
    text = target.read_text(encoding="utf-8")
    assert text.splitlines()[1].startswith("skeletal name=s3")
    assert "F std std std std:" in text
    # 目标为单位元的 F 不能省略
    assert "F std sgn std triv:" in text


def test_selftest(capsys):
    assert app.main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "❌" not in out


def test_unknown_input(tmp_path, capsys):
    assert app.main(["compute", "no-such-thing", "--out", str(tmp_path)]) == app.EXIT_ERROR
    assert "未知输入" in capsys.readouterr().out


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
