#!/usr/bin/env python3
"""
Fermi 因果性数值引擎启动脚本

    python fermi.py single --config run.toml --out result.json
"""

import sys
from pathlib import Path

# 添加项目根目录到Python路径
sys.path.insert(0, str(Path(__file__).parent))

from cli.main import main


if __name__ == "__main__":
    sys.exit(main())
