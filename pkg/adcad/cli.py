"""
命令行入口
子命令: synth / ingest / augment / split / train / eval / scan / gradcheck
退出码: 0 成功，1 校验/用法错误，2 运行时错误
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, Optional, Sequence

from .config.constants import ExitCodes, LogConstants
from .config.validation import RunConfig, load_config
from .config.version import PROJECT_VERSION, get_version_info
from .models.dataset import SplitMode, SplitName
from .services.pipeline import Pipeline
from .utils.exceptions import ADCADException, ExceptionHandler, UsageError
from .utils.logging_config import configure_logging, get_logger, log_manager

logger = logging.getLogger(__name__)


class CommandParser(argparse.ArgumentParser):
    """参数错误时抛出 UsageError 而不是直接退出"""

    def error(self, message: str):
        raise UsageError(message, detail=self.format_usage())


def _option(parser: argparse.ArgumentParser, flag: str, key: str, help: str, **kwargs) -> None:
    """注册覆盖配置项 key（点分路径）的参数；未给出时不覆盖"""
    parser.add_argument(flag, dest=key, default=argparse.SUPPRESS, help=help, **kwargs)


def _common_options() -> argparse.ArgumentParser:
    common = CommandParser(add_help=False)
    common.add_argument('--config', default=argparse.SUPPRESS, help='TOML 配置文件路径')
    _option(common, '--seed', 'seed', '全局随机种子（控制所有随机性）', type=int)
    _option(common, '--workdir', 'paths.workdir', '工作目录（所有产物写入此处）')
    common.add_argument(
        '--log-level', default=argparse.SUPPRESS, choices=LogConstants.VALID_LEVELS,
        type=str.upper, help='日志级别'
    )
    return common


def build_parser() -> CommandParser:
    """构建命令行解析器"""
    common = _common_options()
    parser = CommandParser(
        prog='adcad',
        description='乳腺X线结构扭曲检测流水线：合成、增强、划分、训练、评估、扫描与梯度检查',
        parents=[common],
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {PROJECT_VERSION}')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND', required=True)

    synth = commands.add_parser('synth', parents=[common], help='生成合成 ROI 数据集与清单')
    _option(synth, '--count', 'synth.count', 'ROI 总数（两类各半）', type=int)
    _option(synth, '--roi-size', 'synth.roi_size', 'ROI 边长', type=int)

    ingest = commands.add_parser('ingest', parents=[common], help='从带标记的 PGM 检查裁剪 ROI 并生成清单')
    ingest.add_argument('exams', nargs='+', help='检查图像（同目录下需有 <stem>.marks.csv）')
    _option(ingest, '--roi-size', 'synth.roi_size', 'ROI 边长', type=int)

    commands.add_parser('augment', parents=[common], help='按 36 项增强计划展开清单')

    split = commands.add_parser('split', parents=[common], help='分层划分 train/val/test')
    _option(split, '--mode', 'split.mode', '划分模式', choices=[m.value for m in SplitMode])
    _option(split, '--train-ratio', 'split.train', '训练集比例', type=float)
    _option(split, '--val-ratio', 'split.validation', '验证集比例', type=float)
    _option(split, '--test-ratio', 'split.test', '测试集比例', type=float)

    train = commands.add_parser('train', parents=[common], help='训练网络，输出检查点与训练历史')
    _option(train, '--batch-size', 'train.batch_size', '批大小', type=int)
    _option(train, '--learning-rate', 'train.learning_rate', '学习率', type=float)
    _option(train, '--momentum', 'train.momentum', '动量', type=float)
    _option(train, '--max-epochs', 'train.max_epochs', '最大轮数', type=int)
    _option(train, '--patience', 'train.patience', '早停耐心轮数', type=int)
    _option(train, '--input-size', 'network.input_size', '网络输入边长', type=int)
    _option(train, '--base-filters', 'network.base_filters', '第一阶段滤波器数', type=int)

    evaluate = commands.add_parser('eval', parents=[common], help='在某个划分上计算 ROC/AUC/准确率')
    _option(evaluate, '--split', 'eval.split', '评估的划分', choices=[s.value for s in SplitName])
    _option(evaluate, '--threshold', 'eval.threshold', '判定阈值', type=float)

    scan = commands.add_parser('scan', parents=[common], help='全片滑窗扫描')
    scan.add_argument('exams', nargs='*', help='检查图像；为空时合成检查')
    _option(scan, '--roi-size', 'scan.roi_size', '扫描窗口边长', type=int)
    _option(scan, '--stride', 'scan.stride', '窗口步长', type=int)
    _option(scan, '--coverage-min', 'scan.coverage_min', '窗口内乳腺像素最低占比', type=float)
    _option(scan, '--threshold', 'scan.threshold', '判定阈值', type=float)
    _option(scan, '--exam-count', 'synth.exam_count', '合成检查数', type=int)
    _option(scan, '--exam-size', 'synth.exam_size', '合成检查边长', type=int)

    gradcheck = commands.add_parser('gradcheck', parents=[common], help='整网有限差分梯度检查')
    _option(gradcheck, '--epsilon', 'gradcheck.epsilon', '差分步长', type=float)
    _option(gradcheck, '--floor', 'gradcheck.floor', '相对误差分母下限', type=float)
    _option(gradcheck, '--coordinates', 'gradcheck.coordinates', '抽样坐标数', type=int)
    _option(gradcheck, '--input-size', 'gradcheck.input_size', '检查用网络输入边长', type=int)
    _option(gradcheck, '--base-filters', 'gradcheck.base_filters', '检查用基础滤波器数', type=int)

    return parser


def collect_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """把点分路径的参数转换为嵌套字典"""
    overrides: Dict[str, Any] = {}
    for key, value in vars(args).items():
        if key == 'seed' or '.' in key:
            node = overrides
            *parents, leaf = key.split('.')
            for part in parents:
                node = node.setdefault(part, {})
            node[leaf] = value
    return overrides


def log_run_header(command: str, config: RunConfig) -> None:
    """记录复现运行所需的全部信息"""
    get_logger(__name__).add_field('command', command).add_field('seed', config.seed).info(
        f"命令: {command}，种子: {config.seed}"
    )
    logger.info(f"版本信息: {json.dumps(get_version_info(), sort_keys=True)}")
    logger.info(f"运行配置: {config.model_dump_json()}")


def run(command: str, args: argparse.Namespace, config: RunConfig) -> str:
    """
    执行子命令

    Returns:
        输出到标准输出的结果摘要
    """
    pipeline = Pipeline(config)

    if command == 'synth':
        return f"manifest={pipeline.synth()}"
    if command == 'ingest':
        return f"manifest={pipeline.ingest(args.exams)}"
    if command == 'augment':
        return f"manifest={pipeline.augment()}"
    if command == 'split':
        return f"manifest={pipeline.split()}"
    if command == 'train':
        return f"checkpoint={pipeline.train()}"
    if command == 'eval':
        metrics = pipeline.evaluate()
        return f"auc={metrics.auc:.6f} accuracy={metrics.accuracy:.6f}"
    if command == 'scan':
        lines = [
            f"{r.exam_id} n_rois={r.n_rois} n_positive={r.n_positive} "
            f"auc={'NA' if r.auc is None else f'{r.auc:.6f}'} accuracy={r.accuracy:.6f}"
            for r in pipeline.scan(args.exams)
        ]
        return "\n".join(lines)
    if command == 'gradcheck':
        result = pipeline.gradcheck()
        return f"max_relative_error={result.max_relative_error:.6e} checked={result.checked} skipped={result.skipped}"
    raise UsageError(f"未知子命令: {command}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    命令行主函数

    Args:
        argv: 参数列表，默认取 sys.argv[1:]

    Returns:
        退出码
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(e.detail or parser.format_usage())
        sys.stderr.write(f"adcad: 错误: {e.message}\n")
        return ExitCodes.VALIDATION_ERROR
    except SystemExit as e:
        # --help / --version
        return int(e.code or 0)

    try:
        config = load_config(getattr(args, 'config', None), collect_overrides(args))
    except ADCADException as e:
        sys.stderr.write(f"adcad: 配置错误: {e.message}\n")
        return ExceptionHandler.exit_code(e)

    configure_logging(config.paths.resolve('log_dir'), getattr(args, 'log_level', None), force=True)
    try:
        log_run_header(args.command, config)
        output = run(args.command, args, config)
        if output:
            print(output)
        logger.info(f"命令 {args.command} 完成")
        return ExitCodes.SUCCESS
    except Exception as e:
        error = ExceptionHandler.handle_exception(e)
        get_logger(__name__).add_field('command', args.command).add_field('error_code', error['error_code']).error(
            f"命令 {args.command} 失败: {json.dumps(error, ensure_ascii=False, default=str)}"
        )
        sys.stderr.write(f"adcad: {error['message']}\n")
        return ExceptionHandler.exit_code(e)
    finally:
        log_manager.shutdown()


__all__ = ['CommandParser', 'build_parser', 'collect_overrides', 'run', 'main']
