"""
fermi 命令行入口

    fermi single --config run.toml --out result.json
    fermi sweep  --config sweep.toml --out table.csv [--threads N]
    fermi verify --suite all --report report.json [--config run.toml]

退出码：0 成功，1 校验未通过或内部错误，2 输入无效，3 有结果未收敛（仍写出部分输出）。
"""

import argparse
import sys
from typing import Optional

from config import ConfigManager, config_manager as default_config_manager
from error_handler import ErrorHandler, EXIT_FAILED_CHECKS, EXIT_INVALID_INPUT, EXIT_OK
from error_handler.exceptions import FermiError, ValidationError
from logger import LoggerManager, get_logger
from .commands import run_single, run_sweep, write_json
from .run_config import load_engine, load_run_config, load_sweep_config, resolve_threads
from .verify_suite import VerifySuite


logger = get_logger('cli')


def _manager(args) -> ConfigManager:
    if args.engine_config:
        return ConfigManager(args.engine_config)
    return default_config_manager


def _apply_log_level(args, manager: ConfigManager) -> None:
    level = args.log_level or manager.logging.level
    LoggerManager().update_config({'level': level})


def cmd_single(args, manager: ConfigManager) -> int:
    """单点计算"""
    config = load_run_config(args.config, manager)
    out = args.out or config.output_path
    if not out:
        raise ValidationError('out', "需要 --out 或配置中的 [output].path")
    code = run_single(config, out)
    print(f"结果已写入: {out}")
    return code


def cmd_sweep(args, manager: ConfigManager) -> int:
    """参数扫描"""
    config = load_sweep_config(args.config, manager)
    out = args.out or config.base.output_path
    if not out:
        raise ValidationError('out', "需要 --out 或配置中的 [output].path")
    threads = resolve_threads(args.threads, config.threads)
    code = run_sweep(config, out, threads)
    print(f"扫描结果已写入: {out}（{config.size} 个网格点，{threads} 个线程）")
    return code


def cmd_verify(args, manager: ConfigManager) -> int:
    """验收校验"""
    engine = load_engine(args.config, manager)
    report = VerifySuite(engine).run(args.suite)
    write_json(args.report, report.to_dict())
    for criterion in report.criteria:
        mark = '通过' if criterion.passed else '未通过'
        print(f"[{mark}] {criterion.id}: {criterion.description}")
        if criterion.finding:
            print(f"    {criterion.finding}")
    print(f"校验报告已写入: {args.report}")
    return EXIT_OK if report.passed else EXIT_FAILED_CHECKS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='fermi', description="Fermi 双量子比特因果性数值引擎")
    parser.add_argument("--engine-config", help="引擎默认配置 JSON (默认: fermi_config.json)")
    parser.add_argument("--log-level", choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help="日志级别")

    subparsers = parser.add_subparsers(dest="command", help="可用命令")

    single = subparsers.add_parser("single", help="计算单个参数点")
    single.add_argument("--config", required=True, help="运行配置 TOML")
    single.add_argument("--out", help="结果 JSON 路径")

    sweep = subparsers.add_parser("sweep", help="参数网格扫描")
    sweep.add_argument("--config", required=True, help="扫描配置 TOML")
    sweep.add_argument("--out", help="结果 CSV 路径")
    sweep.add_argument("--threads", type=int, help="工作线程数 (默认: FERMI_THREADS 或逻辑核数)")

    verify = subparsers.add_parser("verify", help="运行验收校验")
    verify.add_argument("--suite", default="all", choices=VerifySuite.suite_names(), help="校验套件")
    verify.add_argument("--report", required=True, help="报告 JSON 路径")
    verify.add_argument("--config", help="可选的运行配置 TOML（只读取正则化与积分设置）")
    return parser


def main(argv: Optional[list] = None) -> int:
    """主函数"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_INVALID_INPUT

    commands = {
        "single": cmd_single,
        "sweep": cmd_sweep,
        "verify": cmd_verify,
    }
    handler = ErrorHandler(logger)
    try:
        manager = _manager(args)
        _apply_log_level(args, manager)
        return commands[args.command](args, manager)
    except FermiError as e:
        print(f"错误: {e}", file=sys.stderr)
        return handler.handle_error(e, {'command': args.command})
    except OSError as e:
        print(f"错误: 文件读写失败: {e}", file=sys.stderr)
        handler.handle_error(e, {'command': args.command})
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
