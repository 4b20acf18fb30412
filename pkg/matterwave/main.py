"""
命令行入口：python -m matterwave.main [全局参数] <子命令> [参数]

标准输出只写CSV/JSON结果，日志写到标准错误。
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from matterwave.commands import COMMANDS
from matterwave.services.config_service import ConfigService
from matterwave.utils.errors import (BracketError, ConvergenceError, DataFormatError, DegenerateDataError,
                                     DomainError, ExtremumNotFoundError)
from matterwave.utils.file_utils import write_text
from matterwave.utils.logger import close_file_handlers, setup_logger

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_DATA = 4

# 异常类型 -> 退出码，按顺序匹配
EXIT_CODES = (
    ((DegenerateDataError, DataFormatError, OSError), EXIT_DATA),
    ((ConvergenceError, BracketError, ExtremumNotFoundError), EXIT_NUMERIC),
    ((DomainError, ValidationError), EXIT_USAGE),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matterwave", description="物质波孔径探测比的统计模型")
    parser.add_argument("--config", help="配置文件路径（默认 config/config.json）")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    parser.add_argument("--log-file", help="日志文件路径")
    parser.add_argument("--output", help="结果写入文件而不是标准输出")
    parser.add_argument("--workers", type=int, default=None, help="蒙特卡洛线程数，不影响结果")

    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, command_class in COMMANDS.items():
        command = command_class()
        sub = subparsers.add_parser(name, help=command.help)
        command.add_arguments(sub)
        sub.set_defaults(handler=command)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        setup_logger("matterwave", log_level=getattr(logging, args.log_level), log_file=args.log_file)
        if args.config:
            ConfigService().load(args.config)
        output = args.handler.execute(args)
        if args.output:
            # 输出路径不可写时的 OSError 归入文件错误
            write_text(args.output, output)
            logger.info("结果已写入 %s", args.output)
        else:
            sys.stdout.write(output)
    except tuple(cls for classes, _ in EXIT_CODES for cls in classes) as e:
        code = next(code for classes, code in EXIT_CODES if isinstance(e, classes))
        logger.error("%s 失败: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return code
    finally:
        if args.log_file:
            close_file_handlers("matterwave")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
