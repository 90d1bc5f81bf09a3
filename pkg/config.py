"""
全局配置

所有可调常量集中在这里，命令行参数是唯一的运行时配置入口，不读取环境变量。
"""

import os

# 仓库根目录与数据目录
BASE_DIR = os.path.dirname(os.path.abspath(__file__))
CATALOGUE_DIR = os.path.join(BASE_DIR, "catalogue")
DEFAULT_OUTPUT_DIR = "h2_output"

# 系数群：单位模 S¹ 与全部非零复数 ℂ*
COEFF_MODES = {
    "unitary": {"name": "S¹ (单位模)", "symbol": "H²_uinv"},
    "invertible": {"name": "ℂ∖{0} (全部可逆)", "symbol": "H²_inv"},
}
DEFAULT_COEFF = "unitary"

# 置换群闭包的规模上限
MAX_GROUP_ORDER = 512

# h2_brute 暴力预言机的阶数上限（未知数个数为 |A|²）
H2_BRUTE_MAX_ORDER = 16

# 对具体输入的每个代表元做群代数层面的独立验证
CERTIFY_CONCRETE = True

# 日志
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
LOG_DATE_FORMAT = "%H:%M:%S"
