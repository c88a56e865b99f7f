#!/usr/bin/env python3
"""
Fermi 因果性数值引擎环境设置脚本

用于初始化默认配置、创建目录、验证运行环境等。
"""

import argparse
import os
import shutil
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from config.config_manager import ConfigManager


class FermiSetup:
    """环境设置"""

    REQUIRED_PACKAGES = ('numpy', 'scipy', 'mpmath', 'dotenv', 'psutil')

    def __init__(self):
        self.project_root = Path(__file__).parent
        self.config_file = self.project_root / "fermi_config.json"
        self.env_file = self.project_root / ".env"

    def create_config(self, force: bool = False) -> None:
        """创建默认配置文件"""
        if self.config_file.exists() and not force:
            print(f"配置文件已存在: {self.config_file}")
            return
        if force and self.config_file.exists():
            self.config_file.unlink()
        ConfigManager(str(self.config_file), create_if_missing=True)
        print(f"配置文件已创建: {self.config_file}")

    def create_env_file(self, force: bool = False) -> None:
        """从模板创建环境变量文件"""
        if self.env_file.exists() and not force:
            print(f"环境文件已存在: {self.env_file}")
            return
        template_file = self.project_root / ".env.template"
        if template_file.exists():
            shutil.copy(template_file, self.env_file)
            print(f"环境文件已创建: {self.env_file}")
        else:
            print("环境文件模板不存在")

    def create_directories(self) -> None:
        """创建日志与结果目录"""
        for directory in ("logs", "results"):
            (self.project_root / directory).mkdir(exist_ok=True)
        print("目录结构已创建")

    def verify_environment(self) -> bool:
        """验证环境配置"""
        print("验证环境配置...")
        success = True

        # tomllib 需要 3.11
        if sys.version_info < (3, 11):
            print("❌ Python 版本需要 3.11 或更高")
            success = False
        else:
            print(f"✅ Python 版本: {sys.version}")

        for package in self.REQUIRED_PACKAGES:
            try:
                __import__(package)
                print(f"✅ {package} 已安装")
            except ImportError:
                print(f"❌ {package} 未安装")
                success = False

        if self.config_file.exists():
            print(f"✅ 配置文件存在: {self.config_file}")
            if ConfigManager(str(self.config_file)).validate():
                print("✅ 配置验证通过")
            else:
                print("❌ 配置验证失败")
                success = False
        else:
            print(f"⚠️  配置文件不存在，将使用内置默认值: {self.config_file}")

        return success

    def install_dependencies(self) -> None:
        """安装依赖包"""
        requirements_file = self.project_root / "requirements.txt"
        if not requirements_file.exists():
            print("requirements.txt 文件不存在")
            return
        print("安装依赖包...")
        os.system(f"{sys.executable} -m pip install -r {requirements_file}")
        print("依赖包安装完成")


def main():
    """主函数"""
    parser = argparse.ArgumentParser(description="Fermi 因果性数值引擎设置脚本")
    parser.add_argument("--init", action="store_true", help="初始化默认配置和目录")
    parser.add_argument("--verify", action="store_true", help="验证环境配置")
    parser.add_argument("--install", action="store_true", help="安装依赖包")
    parser.add_argument("--force", action="store_true", help="强制覆盖现有文件")

    args = parser.parse_args()
    setup = FermiSetup()

    if args.init:
        print("初始化配置...")
        setup.create_directories()
        setup.create_config(force=args.force)
        setup.create_env_file(force=args.force)
        print("初始化完成")

    if args.install:
        setup.install_dependencies()

    if args.verify:
        if setup.verify_environment():
            print("\n✅ 环境验证通过")
        else:
            print("\n❌ 环境验证失败")
            sys.exit(1)

    if not any([args.init, args.verify, args.install]):
        parser.print_help()


if __name__ == "__main__":
    main()
