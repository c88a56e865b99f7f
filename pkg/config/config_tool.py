#!/usr/bin/env python3
"""
配置管理工具
提供命令行接口来管理引擎默认配置
"""

import argparse
import sys
import json
from pathlib import Path

# 添加项目根目录到Python路径
sys.path.insert(0, str(Path(__file__).parent.parent))

from config.config_manager import ConfigManager


def _parse_value(raw: str):
    """尝试将值转换为适当的类型（JSON 语法优先，例如列表）"""
    if raw.lower() == "true":
        return True
    if raw.lower() == "false":
        return False
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def init_config(args):
    """初始化配置文件"""
    config_manager = ConfigManager(args.config, create_if_missing=True)
    config_manager.save()
    print(f"配置文件已初始化: {config_manager.config_file}")


def show_config(args):
    """显示当前配置"""
    config_manager = ConfigManager(args.config)
    print(json.dumps(config_manager.get_config_dict(), indent=2, ensure_ascii=False))


def set_config(args):
    """设置配置值"""
    config_manager = ConfigManager(args.config)
    value = _parse_value(args.value)
    config_manager.set(args.key, value)
    if not config_manager.validate():
        print(f"错误: {args.key} = {value} 未通过验证，未保存")
        sys.exit(1)
    config_manager.save()
    print(f"配置已更新: {args.key} = {value}")


def get_config(args):
    """获取配置值"""
    config_manager = ConfigManager(args.config)

    value = config_manager.get(args.key)
    if value is not None:
        print(f"{args.key} = {value}")
    else:
        print(f"配置项不存在: {args.key}")


def validate_config(args):
    """验证配置"""
    config_manager = ConfigManager(args.config)

    if config_manager.validate():
        print("配置验证通过")
    else:
        print("配置验证失败")
        sys.exit(1)


def main(argv=None):
    """主函数"""
    parser = argparse.ArgumentParser(description="Fermi 因果性数值引擎配置管理工具")
    parser.add_argument("--config", "-c", help="配置文件路径 (默认: fermi_config.json)")

    subparsers = parser.add_subparsers(dest="command", help="可用命令")

    subparsers.add_parser("init", help="初始化配置文件")
    subparsers.add_parser("show", help="显示当前配置")

    set_parser = subparsers.add_parser("set", help="设置配置值")
    set_parser.add_argument("key", help="配置键 (支持点号分隔)")
    set_parser.add_argument("value", help="配置值 (JSON 语法)")

    get_parser = subparsers.add_parser("get", help="获取配置值")
    get_parser.add_argument("key", help="配置键 (支持点号分隔)")

    subparsers.add_parser("validate", help="验证配置")

    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return

    commands = {
        "init": init_config,
        "show": show_config,
        "set": set_config,
        "get": get_config,
        "validate": validate_config,
    }
    try:
        commands[args.command](args)
    except (OSError, ValueError) as e:
        print(f"错误: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
