import argparse
import sys
from typing import Dict, List, Optional

from rich.table import Table

from ..common.config import MagicConfig
from ..common.errors import ConfigError, Nonfinite, UnknownPreset
from ..shared import console
from ..utils import parse_scalar
from .config import EXIT_CONFIG, EXIT_FAIL, EXIT_PASS, OUTPUT_FORMATS, PRESETS
from .experiment import ExperimentConfig, RunReport, load_config, parse_config_text, run
from .presets import list_presets, reproduce
from .sweep import sweep


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog='driftflow',
        description='Gradient descent against its continuous-time models.',
    )
    commands = parser.add_subparsers(dest='command', required=True)

    def common(sub: argparse.ArgumentParser):
        sub.add_argument('--out', help='output directory')
        sub.add_argument('--seed', type=int, help='random seed')
        sub.add_argument('--format', dest='output_format', choices=OUTPUT_FORMATS)

    run_parser = commands.add_parser('run', help='run one configured experiment')
    run_parser.add_argument('--config', help='file of "key.path = value" lines')
    run_parser.add_argument(
        '--set', dest='overrides', action='append', default=[], metavar='KEY=VALUE'
    )
    run_parser.add_argument('--progress', action='store_true')
    common(run_parser)

    preset_parser = commands.add_parser('reproduce', help='run a canonical study')
    preset_parser.add_argument('preset', help=f'one of {", ".join(PRESETS)}')
    common(preset_parser)

    sweep_parser = commands.add_parser('sweep', help='repeat a run over one key')
    sweep_parser.add_argument('--config', help='file of "key.path = value" lines')
    sweep_parser.add_argument('--key', required=True, help='flat key, e.g. optimizer.h')
    sweep_parser.add_argument('--values', required=True, help='comma separated values')
    common(sweep_parser)

    commands.add_parser('list', help='list the presets')
    return parser.parse_args(argv)


def _experiment(args: argparse.Namespace) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    if getattr(args, 'overrides', None):
        flat = {**config.to_flat(), **parse_config_text('\n'.join(args.overrides))}
        config = ExperimentConfig.from_flat(flat)
    return config.with_overrides(out=args.out, seed=args.seed, output_format=args.output_format)


def _show(title: str, report: RunReport):
    table = Table(title=title, show_header=True)
    table.add_column('key')
    table.add_column('value', justify='right')
    for key, value in report.summary.items():
        if isinstance(value, (int, float, str, bool)) or value is None:
            table.add_row(key, f'{value:.6g}' if isinstance(value, float) else str(value))
    console.print(table)
    if report.checks:
        checks = Table(show_header=True)
        checks.add_column('check')
        checks.add_column('result')
        checks.add_column('detail')
        for check in report.checks:
            mark = '[green]PASS[/green]' if check.passed else '[red]FAIL[/red]'
            checks.add_row(check.name, mark, check.detail)
        console.print(checks)
    verdict = '[green]PASS[/green]' if report.passed else '[red]FAIL[/red]'
    console.print(f'{verdict}  {report.out_dir}')


def _show_sweep(reports: Dict[str, RunReport]):
    table = Table(title='sweep', show_header=True)
    table.add_column('run')
    table.add_column('final loss / radius', justify='right')
    table.add_column('status')
    for label, report in reports.items():
        summary = report.summary
        final = summary.get('final_loss', summary.get('final_radius'))
        status = summary.get('error', 'ok')
        table.add_row(label, '' if final is None else f'{final:.6g}', status)
    console.print(table)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of ``python -m driftflow``

    Returns
    -------
    int
        0 when the run or every preset check passed, 1 on a failed check or
        a numerical divergence, 2 on a configuration error
    """
    args = _parse_args(argv)
    try:
        if args.command == 'list':
            table = Table(show_header=True)
            table.add_column('preset')
            table.add_column('description')
            for name, description in list_presets().items():
                table.add_row(name, description)
            console.print(table)
            return EXIT_PASS
        if args.command == 'reproduce':
            report = reproduce(
                args.preset,
                out=args.out,
                seed=args.seed or 0,
                output_format=args.output_format or 'csv',
            )
            _show(args.preset, report)
            return EXIT_PASS if report.passed else EXIT_FAIL
        config = _experiment(args)
        if args.command == 'sweep':
            values = [parse_scalar(v) for v in args.values.split(',') if v.strip()]
            reports = sweep(config, args.key, values)
            _show_sweep(reports)
            failed = any('error' in r.summary for r in reports.values())
            return EXIT_FAIL if failed else EXIT_PASS
        report = run(config, **{MagicConfig.PROGRESS: args.progress})
        _show(config.problem, report)
        return EXIT_PASS
    except (ConfigError, UnknownPreset) as e:
        console.print(f'[red]configuration error:[/red] {e}')
        return EXIT_CONFIG
    except Nonfinite as e:
        console.print(f'[red]diverged:[/red] {e}')
        return EXIT_FAIL


if __name__ == '__main__':
    sys.exit(main())
