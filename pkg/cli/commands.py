"""
single / sweep 子命令的执行逻辑
"""

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Tuple

from error_handler import ErrorHandler, EXIT_OK, EXIT_NOT_CONVERGED
from logger import get_logger, performance_timer
from scenarios import Regime, Scenario, ScenarioEngine, SystemParams, causality_diagnostics
from .run_config import RunConfig, SweepConfig


ENGINE_NAME = 'fermi-causality'
ENGINE_VERSION = '1.0.0'

# 扫描输出列；flags、lambda、tau0 为附加列
CSV_COLUMNS = (
    'omega0', 'r', 'sigma2', 'dtau', 'scenario', 'term', 're', 'im', 'err_est', 'regime', 'status',
    'omega0_r', 'omega0_dtau', 's_disorder', 'lambda', 'tau0', 'flags',
)

# 17 位有效数字，可逐位还原 double
NUMBER_FORMAT = '.16e'

TOTAL_LABEL = 'probability_r_dependent'

# 扫描时按网格序号标记 run_id 的模块
RUN_ID_LOGGERS = ('cli', 'scenarios', 'quadrature', 'greens')

logger = get_logger('cli')


def engine_metadata() -> Dict[str, str]:
    return {'name': ENGINE_NAME, 'version': ENGINE_VERSION}


def _fmt(value: float) -> str:
    return format(float(value), NUMBER_FORMAT)


def write_json(path: str, document: Dict[str, Any]) -> None:
    file = Path(path)
    file.parent.mkdir(parents=True, exist_ok=True)
    with open(file, 'w', encoding='utf-8') as f:
        json.dump(document, f, indent=2, ensure_ascii=False)
        f.write('\n')


def run_single(config: RunConfig, out_path: str) -> int:
    """计算单个参数点上选定的场景并写出 JSON 文档

    Returns:
        0 表示全部收敛，3 表示有分项未收敛（文档照常写出）
    """
    engine = config.engine()
    entries: List[Dict[str, Any]] = []
    converged = True

    with performance_timer(logger, 'run_single', scenarios=[s.value for s in config.scenarios]):
        for scenario in config.scenarios:
            result = engine.evaluate(config.params, scenario, config.disorder)
            entry = result.to_dict()
            entry['regime_label'] = result.regime_label
            if config.diagnostics and result.regime is Regime.PRECURSOR:
                entry['diagnostics'] = causality_diagnostics(result, engine).to_dict()
            converged = converged and result.converged
            entries.append(entry)

    document = {
        'engine': engine_metadata(),
        'params': config.params.to_dict(),
        'settings': config.metadata(),
        'results': entries,
        'status': 'ok' if converged else 'not_converged',
    }
    write_json(out_path, document)
    logger.info("单点计算完成", out=out_path, status=document['status'])
    return EXIT_OK if converged else EXIT_NOT_CONVERGED


def _base_row(params: SystemParams, scenario: Scenario) -> Dict[str, str]:
    return {
        'omega0': _fmt(params.omega0),
        'r': _fmt(params.r),
        'sigma2': _fmt(params.sigma2),
        'dtau': _fmt(params.dtau),
        'scenario': str(scenario.value),
        'omega0_r': _fmt(params.omega0_r),
        'omega0_dtau': _fmt(params.omega0_dtau),
        's_disorder': _fmt(params.s_disorder),
        'lambda': _fmt(params.lam),
        'tau0': _fmt(params.tau0),
    }


def _term_row(base: Dict[str, str], term: str, value: complex, err_est: float,
              regime: str, flags: Tuple[str, ...]) -> Dict[str, str]:
    row = dict(base)
    row.update({
        'term': term,
        're': _fmt(value.real),
        'im': _fmt(value.imag),
        'err_est': _fmt(err_est),
        'regime': regime,
        'status': 'not_converged' if 'not_converged' in flags else 'ok',
        'flags': ';'.join(flags),
    })
    return row


def evaluate_grid_point(engine: ScenarioEngine, handler: ErrorHandler, config: SweepConfig,
                        index: int, params: SystemParams) -> List[Dict[str, str]]:
    """一个网格点上所有场景的输出行；失败的场景只写一行状态码"""
    for name in RUN_ID_LOGGERS:
        get_logger(name).set_run_id(f"point-{index}")
    rows: List[Dict[str, str]] = []
    for scenario in config.base.scenarios:
        base = _base_row(params, scenario)
        result, status = handler.guarded(engine.evaluate, params, scenario, config.base.disorder)
        if result is None:
            row = dict(base)
            row.update({'term': '', 're': '', 'im': '', 'err_est': '',
                        'regime': params.regime().value, 'status': status, 'flags': ''})
            rows.append(row)
            continue
        label = result.regime_label
        for term, value in result.breakdown.items():
            rows.append(_term_row(base, term, value.value, value.err_est, label, value.flags))
        rows.append(_term_row(base, TOTAL_LABEL, complex(result.probability_r_dependent, result.imag_part),
                              result.err_est, label, result.flags))
    return rows


def run_sweep(config: SweepConfig, out_path: str, threads: int) -> int:
    """在参数网格上求值并按网格字典序写出 CSV

    Returns:
        0 表示全部成功；3 表示有点未收敛或失败（其余行照常写出）
    """
    engine = config.base.engine()
    handler = ErrorHandler(logger)
    file = Path(out_path)
    file.parent.mkdir(parents=True, exist_ok=True)
    clean = True

    logger.info("开始参数扫描", points=config.size, threads=threads,
                axes=[name for name, _ in config.axes])

    def task(item: Tuple[int, SystemParams]) -> List[Dict[str, str]]:
        index, params = item
        return evaluate_grid_point(engine, handler, config, index, params)

    with performance_timer(logger, 'run_sweep', points=config.size, threads=threads):
        with open(file, 'w', encoding='utf-8', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, lineterminator='\r\n')
            writer.writeheader()
            with ThreadPoolExecutor(max_workers=threads, thread_name_prefix='fermi_worker') as executor:
                # map 按提交顺序返回，输出与线程数无关
                for rows in executor.map(task, config.grid()):
                    writer.writerows(rows)
                    clean = clean and all(row['status'] == 'ok' for row in rows)

    logger.info("参数扫描完成", out=out_path, clean=clean)
    return EXIT_OK if clean else EXIT_NOT_CONVERGED
