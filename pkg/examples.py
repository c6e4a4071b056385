#!/usr/bin/env python3
"""
mimorelay Example Usage Scripts
Demonstrates the library API: single trials, limits, sweeps and lemma checks
"""

import asyncio
import dataclasses
import logging

import numpy as np

from mimorelay.core.agent import SimulationAgent
from mimorelay.core.asymptotic import asymptotic_rate, deterministic_equivalent
from mimorelay.core.concentration import run_lemma_suite
from mimorelay.core.config import load_config, with_antennas
from mimorelay.core.errors import MimoRelayError
from mimorelay.core.finite_rate import breakdown_summary
from mimorelay.core.reporter import SweepReporter
from mimorelay.core.settings import Settings


async def example_single_trial():
    """Example: rates of one channel realization"""
    print("=== Example: Single Trial ===")

    config = with_antennas(load_config('configs/impaired.json'), 128)
    agent = SimulationAgent(Settings.from_file('settings.yaml'))

    outcome = agent.simulate(config, seed=1)
    report = outcome.report
    print(f"End-to-end rate, pair 0: {np.round(report.rate_total[0], 3)}")
    print(f"Uplink SINR, pair 0:     {np.round(report.sinr_sr[0], 2)}")

    powers = breakdown_summary(outcome.breakdown, config, pair=0, subcarrier=0)
    for origin, value in sorted(powers['uplink'].items(), key=lambda item: -item[1]):
        print(f"  uplink {origin:>22}: {value:.4g}")


async def example_limits():
    """Example: closed-form limit and the deterministic equivalent"""
    print("\n=== Example: Asymptotic Limits ===")

    config = load_config('configs/flat.json')
    limits = asymptotic_rate(config)
    print(f"Limit: {limits.rate_limit[0, 0]:.4f} bits/s/Hz ({limits.binding_side[0][0]})")

    for n in (64, 1024, 16384):
        equivalent = deterministic_equivalent(config, n)
        print(f"  deterministic equivalent at N={n:>5}: {equivalent.report.rate_total[0, 0]:.4f}")


async def example_sweep():
    """Example: short Monte Carlo sweep with a CSV report"""
    print("\n=== Example: Monte Carlo Sweep ===")

    settings = Settings.from_file('settings.yaml')
    agent = SimulationAgent(settings)
    result = await agent.run_sweep(load_config('configs/impaired.json'), [16, 64, 256], trials=10, seed=0)

    for n_index, n in enumerate(result.n_values):
        print(f"N={n:>4}: mean rate {result.mean_rate[0, 0, n_index]:.3f}, "
              f"gap {result.gap[0, 0, n_index]:.3f}")

    files = await SweepReporter(settings).generate_report(result, output_format='csv')
    print(f"Report written: {files}")


async def example_power_scaling():
    """Example: the limit only depends on power ratios"""
    print("\n=== Example: Power Scaling ===")

    config = load_config('configs/impaired.json')
    louder = dataclasses.replace(config, p_s=config.p_s * 10.0, p_r=config.p_r * 10.0)
    same = np.array_equal(asymptotic_rate(config).sinr_limit, asymptotic_rate(louder).sinr_limit)
    print(f"Limit unchanged after 10x power: {same}")


async def example_lemma_checks():
    """Example: concentration checks at a moderate array size"""
    print("\n=== Example: Lemma Checks ===")

    for report in run_lemma_suite(1024, trials=50, seed=0):
        label = report.lemma + (f" ({report.matrix_kind})" if report.matrix_kind else "")
        print(f"{label:<20} {'pass' if report.passed else 'FAIL'}")


async def example_error_handling():
    """Example: invalid configurations are reported, not simulated"""
    print("\n=== Example: Error Handling ===")

    config = load_config('configs/flat.json')
    broken = dataclasses.replace(config, psi_hat_sr=np.zeros_like(config.psi_hat_sr))
    try:
        await SimulationAgent(Settings(parallelism=1)).run_sweep(broken, [8], trials=1, seed=0)
    except MimoRelayError as e:
        print(f"Caught {type(e).__name__}: {e}")


def main():
    """Run all examples"""
    print("mimorelay Examples")
    print("=" * 50)

    logging.basicConfig(level=logging.WARNING)

    asyncio.run(example_single_trial())
    asyncio.run(example_limits())
    asyncio.run(example_sweep())
    asyncio.run(example_power_scaling())
    asyncio.run(example_lemma_checks())
    asyncio.run(example_error_handling())

    print("\n" + "=" * 50)
    print("Examples completed!")


if __name__ == '__main__':
    main()
