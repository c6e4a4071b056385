"""
Statistical checks of the concentration results behind the large-N limits

- ``lemma1_check``: for independent p, q with i.i.d. CN entries,
  (1/N) p^H p -> sigma_p^2, (1/N) p^H q -> 0 and (1/N) sum |p_n|^4 -> 2 sigma_p^4.
- ``lemma2_check``: for a deterministic A with bounded spectral norm and
  p, q scaled by 1/sqrt(N), p^H A p -> Tr(A)/N and p^H A q -> 0.

Draws use the same counter-based streams as the channel sampler, so a
report is reproducible from (N, trials, seed).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from dataclasses_json import dataclass_json
from scipy.stats import unitary_group

from .channel import LinkRole, complex_gaussian, counter_rng

logger = logging.getLogger(__name__)

MATRIX_KINDS = ('identity', 'ramp', 'rotated')

# Quadratic-form deviations must stay within this many ||A||/sqrt(N) ...
LEMMA2_WIDTH = 5.0
# ... in at least this fraction of trials
LEMMA2_COVERAGE = 0.95


@dataclass_json
@dataclass
class ConcentrationCheck:
    """One statistic compared against its deterministic limit."""

    name: str
    target: float
    mean: float
    std: float
    deviation: float
    tolerance: float
    passed: bool
    fraction_within: Optional[float] = None
    required_fraction: Optional[float] = None


@dataclass_json
@dataclass
class ConcentrationReport:
    lemma: str
    num_antennas: int
    trials: int
    seed: int
    matrix_kind: Optional[str] = None
    checks: List[ConcentrationCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def _require_positive(num_antennas: int, trials: int) -> None:
    if num_antennas < 1:
        raise ValueError(f"num_antennas must be at least 1, got {num_antennas}")
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")


def _stats(samples: np.ndarray):
    """Mean and sample std (population std for a single sample)."""
    ddof = 1 if samples.size > 1 else 0
    return float(np.mean(samples)), float(np.std(samples, ddof=ddof))


def lemma1_check(num_antennas: int, sigma_p: float, sigma_q: float,
                 trials: int, seed: int) -> ConcentrationReport:
    """Normalized inner products and fourth moment of CN vectors."""
    N = int(num_antennas)
    _require_positive(N, trials)
    var_p, var_q = sigma_p ** 2, sigma_q ** 2

    norms = np.empty(trials)
    cross = np.empty(trials, dtype=complex)
    fourth = np.empty(trials)
    for t in range(trials):
        p = complex_gaussian(counter_rng(seed, t, LinkRole.LEMMA_P), var_p, N)
        q = complex_gaussian(counter_rng(seed, t, LinkRole.LEMMA_Q), var_q, N)
        norms[t] = np.vdot(p, p).real / N
        cross[t] = np.vdot(p, q) / N
        fourth[t] = np.sum(np.abs(p) ** 4) / N

    width = math.sqrt(N * trials)
    checks = []

    mean, std = _stats(norms)
    tol = 3.0 * var_p / width
    checks.append(ConcentrationCheck('norm', var_p, mean, std, abs(mean - var_p), tol,
                                     abs(mean - var_p) <= tol))

    cross_mean = complex(np.mean(cross))
    cross_std = float(np.std(cross, ddof=1 if trials > 1 else 0))
    tol = 3.0 * sigma_p * sigma_q / width
    checks.append(ConcentrationCheck('cross', 0.0, abs(cross_mean), cross_std, abs(cross_mean), tol,
                                     abs(cross_mean) <= tol))

    target = 2.0 * var_p ** 2
    mean, std = _stats(fourth)
    tol = 0.05 * target
    checks.append(ConcentrationCheck('fourth_moment', target, mean, std, abs(mean - target), tol,
                                     abs(mean - target) <= tol))

    report = ConcentrationReport('lemma1', N, trials, seed, checks=checks)
    logger.info(f"lemma1 at N={N}, {trials} trials: {'pass' if report.passed else 'FAIL'}")
    return report


@dataclass
class MatrixSpec:
    """Deterministic N x N test matrix with a known spectral norm.

    - ``identity``: I
    - ``ramp``: diag(1, 2, ..., N) / N
    - ``rotated``: Q diag(linspace(-1, 1, N)) Q^H for a fixed Haar unitary Q
      (trace 0, spectral norm 1)
    """

    kind: str
    num_antennas: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in MATRIX_KINDS:
            raise ValueError(f"Unknown matrix kind {self.kind!r}; expected one of {MATRIX_KINDS}")
        N = self.num_antennas
        self._diagonal: Optional[np.ndarray] = None
        self._rotation: Optional[np.ndarray] = None
        self._eigenvalues: Optional[np.ndarray] = None
        if self.kind == 'identity':
            self._diagonal = np.ones(N)
        elif self.kind == 'ramp':
            self._diagonal = np.arange(1, N + 1) / N
        else:
            rng = counter_rng(self.seed, 0, LinkRole.LEMMA_MATRIX)
            Q = unitary_group.rvs(N, random_state=rng) if N > 1 else np.ones((1, 1), dtype=complex)
            eigenvalues = np.linspace(-1.0, 1.0, N) if N > 1 else np.zeros(1)
            self._rotation = Q
            self._eigenvalues = eigenvalues

    def apply(self, x: np.ndarray) -> np.ndarray:
        if self._diagonal is not None:
            return self._diagonal * x
        return self._rotation @ (self._eigenvalues * (self._rotation.conj().T @ x))

    @property
    def trace(self) -> float:
        if self._diagonal is not None:
            return float(self._diagonal.sum())
        return float(self._eigenvalues.sum())

    @property
    def spectral_norm(self) -> float:
        if self.kind == 'rotated' and self.num_antennas == 1:
            return 0.0
        return 1.0

    def dense(self) -> np.ndarray:
        if self._diagonal is not None:
            return np.diag(self._diagonal)
        return (self._rotation * self._eigenvalues) @ self._rotation.conj().T


def lemma2_check(num_antennas: int, matrix_spec: MatrixSpec, trials: int,
                 seed: int) -> ConcentrationReport:
    """Quadratic and bilinear forms of 1/sqrt(N)-scaled CN vectors."""
    N = int(num_antennas)
    _require_positive(N, trials)
    target = matrix_spec.trace / N
    bound = LEMMA2_WIDTH * matrix_spec.spectral_norm / math.sqrt(N)

    quadratic = np.empty(trials)
    bilinear = np.empty(trials)
    for t in range(trials):
        p = complex_gaussian(counter_rng(seed, t, LinkRole.LEMMA_P), 1.0 / N, N)
        q = complex_gaussian(counter_rng(seed, t, LinkRole.LEMMA_Q), 1.0 / N, N)
        quadratic[t] = np.vdot(p, matrix_spec.apply(p)).real
        bilinear[t] = abs(np.vdot(p, matrix_spec.apply(q)))

    checks = []
    for name, samples, goal in (('quadratic_form', quadratic, target),
                                ('bilinear_form', bilinear, 0.0)):
        deviations = np.abs(samples - goal)
        fraction = float(np.mean(deviations <= bound))
        mean, std = _stats(samples)
        checks.append(ConcentrationCheck(
            name, goal, mean, std, float(np.max(deviations)), bound,
            fraction >= LEMMA2_COVERAGE,
            fraction_within=fraction,
            required_fraction=LEMMA2_COVERAGE,
        ))

    report = ConcentrationReport('lemma2', N, trials, seed, matrix_kind=matrix_spec.kind, checks=checks)
    logger.info(f"lemma2 ({matrix_spec.kind}) at N={N}, {trials} trials: "
                f"{'pass' if report.passed else 'FAIL'}")
    return report


def run_lemma_suite(num_antennas: int, trials: int, seed: int,
                    sigma_p: float = 1.0, sigma_q: float = 1.0) -> List[ConcentrationReport]:
    """lemma1 plus lemma2 for every matrix kind."""
    reports = [lemma1_check(num_antennas, sigma_p, sigma_q, trials, seed)]
    for kind in MATRIX_KINDS:
        spec = MatrixSpec(kind, num_antennas, seed)
        reports.append(lemma2_check(num_antennas, spec, trials, seed))
    return reports
