"""
Simulation Agent - orchestrates single trials and Monte Carlo sweeps

A trial runs the full chain for one channel realization:
sample_channels -> build_mrc_mrt -> interference terms -> rates.
A sweep repeats trials over a list of antenna counts, spreads them across
worker processes and reduces the results in ascending trial order, so the
output does not depend on the number of workers.
"""

import asyncio
import logging
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .asymptotic import AsymptoticLimits, asymptotic_rate, asymptotic_rate_perfect_csi
from .beamform import FilterSet, build_mrc_mrt
from .channel import ChannelSet, sample_channels
from .config import SystemConfig, config_digest, perfect_csi, validate, with_antennas
from .errors import ConfigValidationError, TrialError
from .finite_rate import InterferenceBreakdown, RateReport, interference_breakdown, rates
from .reporter import SweepResult
from .settings import Settings

logger = logging.getLogger(__name__)


@dataclass
class TrialOutcome:
    """Everything one trial produced, for inspection and dumps."""

    channels: ChannelSet
    filters: FilterSet
    breakdown: InterferenceBreakdown
    report: RateReport


def simulate_trial(config: SystemConfig, seed: int, trial_index: int,
                   lazy_si: bool = False) -> TrialOutcome:
    channels = sample_channels(config, seed, trial_index, lazy_si=lazy_si)
    filters = build_mrc_mrt(channels)
    breakdown = interference_breakdown(channels, filters, config)
    return TrialOutcome(channels, filters, breakdown, rates(breakdown, config))


def run_trial(config: SystemConfig, seed: int, trial_index: int,
              lazy_si: bool = False) -> RateReport:
    """Rates of one channel realization; deterministic in (seed, trial_index)."""
    return simulate_trial(config, seed, trial_index, lazy_si).report


# (trial_index, report or None, (error type, message) or None)
TrialResult = Tuple[int, Optional[RateReport], Optional[Tuple[str, str]]]


def _trial_chunk(config: SystemConfig, seed: int, trial_indices: Sequence[int],
                 lazy_si: bool) -> List[TrialResult]:
    """Worker entry point. Failures come back as data and are raised by the parent."""
    results: List[TrialResult] = []
    for t in trial_indices:
        try:
            results.append((t, run_trial(config, seed, t, lazy_si), None))
        except Exception as e:
            results.append((t, None, (type(e).__name__, str(e))))
    return results


def pairwise_sum(stack: np.ndarray) -> np.ndarray:
    """Sum over the leading (trial) axis by recursive halving, lower trial indices first."""
    count = stack.shape[0]
    if count == 1:
        return np.array(stack[0], dtype=float)
    half = count // 2
    return pairwise_sum(stack[:half]) + pairwise_sum(stack[half:])


def trial_mean(stack: np.ndarray) -> np.ndarray:
    return pairwise_sum(stack) / stack.shape[0]


def trial_std(stack: np.ndarray, ddof: int = 0) -> np.ndarray:
    """Standard deviation over trials, both passes summed with ``pairwise_sum``."""
    deviation = stack - trial_mean(stack)
    return np.sqrt(pairwise_sum(deviation * deviation) / (stack.shape[0] - ddof))


def ensure_valid(config: SystemConfig) -> None:
    report = validate(config)
    if not report.passed:
        raise ConfigValidationError(report)


class SimulationAgent:
    """
    Runs trials and sweeps for a system configuration.

    The agent only holds runtime settings; every physical parameter comes
    from the SystemConfig passed to each call.
    """

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the simulation agent.

        Args:
            settings: Runtime settings (uses defaults if None)
        """
        self.settings = settings or Settings()

    def lazy_si_for(self, num_antennas: int) -> bool:
        return num_antennas >= self.settings.lazy_si_threshold

    def simulate(self, config: SystemConfig, seed: int, trial_index: int = 0,
                 use_perfect_csi: bool = False) -> TrialOutcome:
        """Validate and run a single trial."""
        if use_perfect_csi:
            config = perfect_csi(config)
        ensure_valid(config)
        logger.info(f"Simulating trial {trial_index} at N={config.num_antennas}, seed={seed}")
        outcome = simulate_trial(config, seed, trial_index, self.lazy_si_for(config.num_antennas))
        if outcome.report.degenerate:
            logger.warning("Some SINRs are infinite because their interference-plus-noise is zero")
        return outcome

    def limits(self, config: SystemConfig, use_perfect_csi: bool = False) -> AsymptoticLimits:
        ensure_valid(config)
        if use_perfect_csi:
            return asymptotic_rate_perfect_csi(config)
        return asymptotic_rate(config)

    async def run_sweep(self, config: SystemConfig, n_values: Sequence[int], trials: int,
                        seed: int, parallelism: Optional[int] = None,
                        use_perfect_csi: bool = False) -> SweepResult:
        """
        Average finite-N rates over trials for every N and compare them with the limit.

        Args:
            config: System configuration; its N is replaced by each value of n_values
            n_values: Strictly ascending antenna counts
            trials: Monte Carlo trials per N
            seed: Base seed; trial t uses the same streams at every N
            parallelism: Worker processes (defaults to the settings)
            use_perfect_csi: Run with true channel statistics and compare against
                the perfect-CSI limit

        Returns:
            Aggregated SweepResult
        """
        n_values = [int(n) for n in n_values]
        if not n_values:
            raise ValueError("n_values must not be empty")
        if any(b <= a for a, b in zip(n_values, n_values[1:])):
            raise ValueError(f"n_values must be strictly ascending, got {n_values}")
        if trials < 1:
            raise ValueError(f"trials must be at least 1, got {trials}")

        workers = max(1, int(parallelism if parallelism is not None else self.settings.parallelism))
        if use_perfect_csi:
            config = perfect_csi(config)
        for n in n_values:
            ensure_valid(with_antennas(config, n))

        limits = asymptotic_rate(config)
        digest = config_digest(config)
        logger.info(f"Starting sweep: N={n_values}, trials={trials}, seed={seed}, workers={workers}")

        per_n = []
        if workers == 1:
            for n in n_values:
                per_n.append(await self._run_point(None, 1, config, n, trials, seed))
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for n in n_values:
                    per_n.append(await self._run_point(pool, workers, config, n, trials, seed))

        result = self._aggregate(per_n, n_values, limits, trials, seed, digest, use_perfect_csi)
        logger.info("Sweep completed")
        return result

    async def _run_point(self, pool: Optional[Executor], workers: int, config: SystemConfig,
                         num_antennas: int, trials: int, seed: int) -> List[RateReport]:
        point_config = with_antennas(config, num_antennas)
        lazy_si = self.lazy_si_for(num_antennas)
        indices = list(range(trials))

        if pool is None:
            results = _trial_chunk(point_config, seed, indices, lazy_si)
        else:
            loop = asyncio.get_running_loop()
            chunks = [indices[w::workers] for w in range(workers) if indices[w::workers]]
            futures = [
                loop.run_in_executor(pool, _trial_chunk, point_config, seed, chunk, lazy_si)
                for chunk in chunks
            ]
            results = [r for part in await asyncio.gather(*futures) for r in part]

        results.sort(key=lambda r: r[0])
        for trial_index, _, error in results:
            if error is not None:
                cause_type, message = error
                raise TrialError(num_antennas, trial_index, message, cause_type)

        logger.info(f"N={num_antennas}: {trials} trials done")
        return [report for _, report, _ in results]

    @staticmethod
    def _aggregate(per_n: List[List[RateReport]], n_values: List[int], limits: AsymptoticLimits,
                   trials: int, seed: int, digest: str, use_perfect_csi: bool) -> SweepResult:
        ddof = 1 if trials > 1 else 0
        mean_rate, std_rate, median_gap, sinr_sr, sinr_rd = [], [], [], [], []

        for reports in per_n:
            rate = np.stack([r.rate_total for r in reports])          # [trial, i, k]
            mean_rate.append(trial_mean(rate))
            std_rate.append(trial_std(rate, ddof))
            median_gap.append(np.median(np.abs(rate - limits.rate_limit), axis=0))
            sinr_sr.append(trial_mean(np.stack([r.sinr_sr for r in reports])))
            sinr_rd.append(trial_mean(np.stack([r.sinr_rd for r in reports])))

        mean = np.stack(mean_rate, axis=-1)
        return SweepResult(
            n_values=list(n_values),
            mean_rate=mean,
            std_rate=np.stack(std_rate, axis=-1),
            asymptotic_rate=np.array(limits.rate_limit),
            gap=np.abs(mean - limits.rate_limit[:, :, None]),
            median_gap=np.stack(median_gap, axis=-1),
            mean_sinr_sr=np.stack(sinr_sr, axis=-1),
            mean_sinr_rd=np.stack(sinr_rd, axis=-1),
            trials=trials,
            seed=seed,
            config_digest=digest,
            perfect_csi=use_perfect_csi,
        )
