#!/usr/bin/env python3
"""
mimorelay - FD massive-MIMO relay rate simulator
Main entry point for command-line usage
"""

import asyncio
import argparse
import json
import logging
import sys
import math
from typing import Any, List, Optional

from mimorelay.core.agent import SimulationAgent
from mimorelay.core.asymptotic import deterministic_equivalent
from mimorelay.core.concentration import run_lemma_suite
from mimorelay.core.config import load_config, perfect_csi, validate, with_antennas
from mimorelay.core.errors import ConfigParseError, ConfigValidationError, MimoRelayError
from mimorelay.core.finite_rate import breakdown_summary
from mimorelay.core.reporter import SweepReporter
from mimorelay.core.settings import Settings
from mimorelay.export.array_dump import DUMP_FORMATS, dump_channels, dump_relay_covariances

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def setup_logging(settings: Settings, verbose: bool = False) -> None:
    """Set up logging configuration; log lines go to stderr, results to stdout."""
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level.upper(), logging.INFO)
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file))
    logging.basicConfig(
        level=level,
        format=settings.log_format,
        handlers=handlers,
        force=True
    )


def parse_n_values(text: str) -> List[int]:
    try:
        values = [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or any(n < 1 for n in values):
        raise argparse.ArgumentTypeError(f"antenna counts must be positive, got {text!r}")
    return values


def positive_int(text: str) -> int:
    """argparse type for counts that must be at least 1"""
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """Build the command line parser"""
    parser = argparse.ArgumentParser(
        description='mimorelay - finite-N and asymptotic rates of an FD massive-MIMO DF relay',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Rates of one channel realization
  python main.py simulate --config configs/impaired.json --seed 1

  # Closed-form large-N limits
  python main.py asymptote --config configs/flat.json

  # Monte Carlo sweep over the array size
  python main.py sweep --config configs/impaired.json --n-values 64,256,1024 --trials 50 --out results/sweep.csv --format csv

  # Statistical checks of the concentration lemmas
  python main.py verify-lemmas --n 4096 --trials 200

Reports printed by simulate, asymptote and verify-lemmas are strict JSON: an
unbounded SINR or rate is written as the string "inf". Sweep result files keep
the Infinity token so that they parse back exactly.
        """
    )

    parser.add_argument(
        '--settings', '-s',
        type=str,
        default='settings.yaml',
        help='Runtime settings file (default: settings.yaml)'
    )

    parser.add_argument(
        '--verbose', '-v',
        action='store_true',
        help='Enable verbose logging'
    )

    config_required = argparse.ArgumentParser(add_help=False)
    config_required.add_argument('--config', '-c', required=True, help='System configuration JSON file')

    config_optional = argparse.ArgumentParser(add_help=False)
    config_optional.add_argument('--config', '-c', default=None,
                                 help='System configuration JSON file (sets sigma_p, sigma_q)')

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    # Single realization
    sim_parser = subparsers.add_parser('simulate', parents=[config_required],
                                       help='Rates of one channel realization')
    sim_parser.add_argument('--n', type=positive_int, default=None, help='Override the number of relay antennas')
    sim_parser.add_argument('--seed', type=int, default=None, help='Base seed')
    sim_parser.add_argument('--trial', type=int, default=0, help='Trial index')
    sim_parser.add_argument('--perfect-csi', action='store_true', help='Use true channel statistics')
    sim_parser.add_argument('--breakdown', action='store_true',
                            help='Include received power per interference origin')
    sim_parser.add_argument('--dump-channels', metavar='DIR', help='Write the channel realization to DIR')
    sim_parser.add_argument('--dump-covariance', metavar='DIR', help='Write relay covariances to DIR')
    sim_parser.add_argument('--dump-format', choices=DUMP_FORMATS, default='json', help='Dump layout')
    sim_parser.add_argument('--out', '-o', help='Write the report to a file instead of stdout')

    # Asymptotic limits
    asym_parser = subparsers.add_parser('asymptote', parents=[config_required],
                                        help='Closed-form N -> infinity limits')
    asym_parser.add_argument('--perfect-csi', action='store_true', help='Use true channel statistics')
    asym_parser.add_argument('--equivalent-n', type=positive_int, default=None,
                             help='Also evaluate the deterministic equivalent at this N')

    # Sweep
    sweep_parser = subparsers.add_parser('sweep', parents=[config_required],
                                         help='Monte Carlo sweep over antenna counts')
    sweep_parser.add_argument('--n-values', type=parse_n_values, default=None,
                              help='Comma-separated antenna counts, e.g. 64,256,1024')
    sweep_parser.add_argument('--trials', type=positive_int, default=None, help='Trials per antenna count')
    sweep_parser.add_argument('--seed', type=int, default=None, help='Base seed')
    sweep_parser.add_argument('--parallelism', '-j', type=positive_int, default=None, help='Worker processes')
    sweep_parser.add_argument('--perfect-csi', action='store_true', help='Use true channel statistics')
    sweep_parser.add_argument('--out', '-o', help='Result file (stdout if omitted)')
    sweep_parser.add_argument('--format', choices=['json', 'csv'], default=None, help='Result format')
    sweep_parser.add_argument('--html', action='store_true', help='Also write an HTML summary next to --out')

    # Lemma checks
    lemma_parser = subparsers.add_parser('verify-lemmas', parents=[config_optional],
                                         help='Statistical checks of the concentration lemmas')
    lemma_parser.add_argument('--n', type=positive_int, default=4096, help='Vector length (default: 4096)')
    lemma_parser.add_argument('--trials', type=positive_int, default=200, help='Trials (default: 200)')
    lemma_parser.add_argument('--seed', type=int, default=None, help='Base seed')

    return parser


def _finite_or_label(value: Any) -> Any:
    """Replace non-finite floats anywhere inside nested dicts and lists by string labels"""
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {key: _finite_or_label(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite_or_label(item) for item in value]
    return value


def strict_json(payload: Any) -> str:
    """RFC 8259 JSON; non-finite floats become the strings "inf", "-inf" or "nan"."""
    return json.dumps(_finite_or_label(payload), indent=2, allow_nan=False)


def write_output(text: str, out: Optional[str] = None) -> None:
    """Write a command result to --out, or to stdout when no file is given"""
    if out:
        with open(out, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        logging.info(f"Output written to {out}")
    else:
        sys.stdout.write(text)
        if not text.endswith('\n'):
            sys.stdout.write('\n')


async def run_simulate(agent: SimulationAgent, args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.n is not None:
        config = with_antennas(config, args.n)
    if args.perfect_csi:
        config = perfect_csi(config)
    seed = agent.settings.default_seed if args.seed is None else args.seed

    outcome = agent.simulate(config, seed, args.trial)
    payload = {
        'num_antennas': config.num_antennas,
        'seed': seed,
        'trial': args.trial,
        'perfect_csi': args.perfect_csi,
        'report': outcome.report.to_dict(),
    }
    if args.breakdown:
        payload['breakdown'] = [
            [breakdown_summary(outcome.breakdown, config, i, k) for k in range(config.num_subcarriers)]
            for i in range(config.num_pairs)
        ]
    if args.dump_channels:
        payload['channel_dump'] = dump_channels(outcome.channels, args.dump_channels, args.dump_format)
    if args.dump_covariance:
        payload['covariance_dump'] = dump_relay_covariances(
            outcome.channels, outcome.filters, config, args.dump_covariance, args.dump_format
        )

    write_output(strict_json(payload), args.out)
    return EXIT_OK


async def run_asymptote(agent: SimulationAgent, args: argparse.Namespace) -> int:
    config = load_config(args.config)
    limits = agent.limits(config, use_perfect_csi=args.perfect_csi)
    payload = limits.to_dict()
    if args.equivalent_n is not None:
        payload['deterministic_equivalent'] = {
            'num_antennas': args.equivalent_n,
            'report': deterministic_equivalent(
                perfect_csi(config) if args.perfect_csi else config, args.equivalent_n
            ).report.to_dict(),
        }
    write_output(strict_json(payload))
    return EXIT_OK


async def run_sweep(agent: SimulationAgent, args: argparse.Namespace) -> int:
    config = load_config(args.config)
    settings = agent.settings
    n_values = args.n_values or settings.default_n_values
    trials = args.trials if args.trials is not None else settings.default_trials
    seed = args.seed if args.seed is not None else settings.default_seed
    fmt = args.format or settings.output_format
    if args.html:
        settings.write_html = True

    result = await agent.run_sweep(config, n_values, trials, seed,
                                   parallelism=args.parallelism,
                                   use_perfect_csi=args.perfect_csi)

    reporter = SweepReporter(settings)
    if args.out:
        files = await reporter.generate_report(result, args.out, fmt)
        logging.info(f"Sweep report generated: {', '.join(files.values())}")
    else:
        write_output(reporter.render(result, fmt))
    return EXIT_OK


async def run_verify_lemmas(agent: SimulationAgent, args: argparse.Namespace) -> int:
    sigma_p = sigma_q = 1.0
    if args.config:
        config = load_config(args.config)
        report = validate(config)
        if not report.passed:
            raise ConfigValidationError(report)
        sigma_p = float(config.psi_hat_sr[0, 0]) ** 0.5
        sigma_q = float(config.psi_hat_rd[0, 0]) ** 0.5
    seed = agent.settings.default_seed if args.seed is None else args.seed

    reports = run_lemma_suite(args.n, args.trials, seed, sigma_p, sigma_q)
    payload = [dict(r.to_dict(), passed=r.passed) for r in reports]
    write_output(strict_json(payload))

    failed = [r for r in reports if not r.passed]
    for r in failed:
        logging.error(f"{r.lemma}{' (' + r.matrix_kind + ')' if r.matrix_kind else ''} check failed")
    return EXIT_FAILURE if failed else EXIT_OK


COMMANDS = {
    'simulate': run_simulate,
    'asymptote': run_asymptote,
    'sweep': run_sweep,
    'verify-lemmas': run_verify_lemmas,
}


async def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    # Load runtime settings
    try:
        settings = Settings.from_file(args.settings)
    except Exception as e:
        print(f"Failed to load settings: {e}", file=sys.stderr)
        return EXIT_USAGE

    setup_logging(settings, args.verbose)

    if args.command not in COMMANDS:
        logging.error("No command specified. Use --help for usage information.")
        return EXIT_USAGE

    agent = SimulationAgent(settings)

    try:
        return await COMMANDS[args.command](agent, args)
    except ConfigValidationError as e:
        for violation in e.report.violations:
            print(violation.message, file=sys.stderr)
        logging.error("Configuration failed validation")
        return EXIT_FAILURE
    except (ConfigParseError, OSError) as e:
        logging.error(f"Cannot read input: {e}")
        return EXIT_USAGE
    except ValueError as e:
        logging.error(f"Invalid arguments: {e}")
        return EXIT_USAGE
    except MimoRelayError as e:
        logging.error(f"Operation failed: {e}")
        return EXIT_FAILURE
    except KeyboardInterrupt:
        logging.info("Operation cancelled by user")
        return EXIT_FAILURE


def cli(argv: Optional[List[str]] = None) -> int:
    """Run the command line and return its exit code"""
    return asyncio.run(main(argv))


if __name__ == '__main__':
    sys.exit(cli())
