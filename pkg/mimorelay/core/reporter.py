"""
Sweep Reporter - machine-readable and HTML summaries of Monte Carlo sweeps
"""

import csv
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from dataclasses_json import dataclass_json
from jinja2 import Environment, select_autoescape

from .errors import ConfigParseError
from .serialization import ArrayRecord, array_field

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    'pair', 'subcarrier', 'n', 'mean_rate', 'std_rate', 'asymptotic_rate', 'gap',
    'median_gap', 'mean_sinr_sr', 'mean_sinr_rd',
]
# Per-(pair, subcarrier, N) arrays carried in the CSV body
PER_N_COLUMNS = ['mean_rate', 'std_rate', 'gap', 'median_gap', 'mean_sinr_sr', 'mean_sinr_rd']
METADATA_PREFIX = '# '


@dataclass_json
@dataclass(eq=False)
class SweepResult(ArrayRecord):
    """Finite-N rate statistics across antenna counts.

    Per-N arrays are indexed ``[pair, subcarrier, n_index]``; ``asymptotic_rate``
    is ``[pair, subcarrier]``.
    """

    n_values: List[int] = field(default_factory=list)
    mean_rate: np.ndarray = array_field(default=None)
    std_rate: np.ndarray = array_field(default=None)
    asymptotic_rate: np.ndarray = array_field(default=None)
    gap: np.ndarray = array_field(default=None)
    median_gap: np.ndarray = array_field(default=None)
    mean_sinr_sr: np.ndarray = array_field(default=None)
    mean_sinr_rd: np.ndarray = array_field(default=None)
    trials: int = 0
    seed: int = 0
    config_digest: str = ""
    perfect_csi: bool = False

    @property
    def num_pairs(self) -> int:
        return self.mean_rate.shape[0]

    @property
    def num_subcarriers(self) -> int:
        return self.mean_rate.shape[1]

    def relative_gap(self) -> np.ndarray:
        """gap / asymptotic_rate, shaped like ``gap``."""
        return self.gap / self.asymptotic_rate[:, :, None]


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def emit_json(result: SweepResult) -> str:
    return result.to_json(indent=2, sort_keys=True)


def parse_json(text: str) -> SweepResult:
    try:
        return SweepResult.from_json(text)
    except (ValueError, KeyError, TypeError) as e:
        raise ConfigParseError(f"Malformed sweep result JSON: {e}") from e


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def _metadata_line(result: SweepResult) -> str:
    return (f"{METADATA_PREFIX}trials={result.trials} seed={result.seed} "
            f"config_digest={result.config_digest} perfect_csi={str(result.perfect_csi).lower()}")


def emit_csv(result: SweepResult) -> str:
    """One row per (pair, subcarrier, N), preceded by a metadata comment line."""
    buffer = io.StringIO()
    buffer.write(_metadata_line(result) + '\n')
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator='\n')
    writer.writeheader()
    for i in range(result.num_pairs):
        for k in range(result.num_subcarriers):
            for n_index, n in enumerate(result.n_values):
                row: Dict[str, Any] = {'pair': i, 'subcarrier': k, 'n': n,
                                       'asymptotic_rate': repr(float(result.asymptotic_rate[i, k]))}
                for column in PER_N_COLUMNS:
                    row[column] = repr(float(getattr(result, column)[i, k, n_index]))
                writer.writerow(row)
    return buffer.getvalue()


def parse_csv(text: str) -> SweepResult:
    """Inverse of ``emit_csv``."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith(METADATA_PREFIX):
        raise ConfigParseError("Sweep CSV is missing its metadata line")

    metadata = dict(item.split('=', 1) for item in lines[0][len(METADATA_PREFIX):].split())
    rows = list(csv.DictReader(lines[1:]))
    if not rows:
        raise ConfigParseError("Sweep CSV has no data rows")

    try:
        n_values: List[int] = []
        for row in rows:
            n = int(row['n'])
            if n not in n_values:
                n_values.append(n)
        L = max(int(row['pair']) for row in rows) + 1
        K = max(int(row['subcarrier']) for row in rows) + 1

        arrays = {column: np.zeros((L, K, len(n_values))) for column in PER_N_COLUMNS}
        asymptotic = np.zeros((L, K))
        for row in rows:
            i, k = int(row['pair']), int(row['subcarrier'])
            n_index = n_values.index(int(row['n']))
            for column in PER_N_COLUMNS:
                arrays[column][i, k, n_index] = float(row[column])
            asymptotic[i, k] = float(row['asymptotic_rate'])

        return SweepResult(
            n_values=n_values,
            asymptotic_rate=asymptotic,
            trials=int(metadata['trials']),
            seed=int(metadata['seed']),
            config_digest=metadata['config_digest'],
            perfect_csi=metadata.get('perfect_csi') == 'true',
            **arrays,
        )
    except (KeyError, ValueError) as e:
        raise ConfigParseError(f"Malformed sweep CSV: {e}") from e


# ---------------------------------------------------------------------------
# HTML
# ---------------------------------------------------------------------------

HTML_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <title>mimorelay sweep report</title>
    <style>
        body { font-family: -apple-system, BlinkMacSystemFont, 'Segoe UI', Roboto, sans-serif; margin: 20px; background-color: #f5f5f5; }
        .container { max-width: 1200px; margin: 0 auto; background: white; padding: 20px 30px; border-radius: 8px; }
        table { border-collapse: collapse; width: 100%; margin-bottom: 24px; }
        th, td { border: 1px solid #ddd; padding: 6px 10px; text-align: right; }
        th { background: #4a5568; color: white; }
        .meta td { text-align: left; }
    </style>
</head>
<body>
<div class="container">
    <h1>Sweep report</h1>
    <table class="meta">
        <tr><td>Trials</td><td>{{ result.trials }}</td></tr>
        <tr><td>Seed</td><td>{{ result.seed }}</td></tr>
        <tr><td>Config digest</td><td>{{ result.config_digest }}</td></tr>
        <tr><td>Channel knowledge</td><td>{{ 'perfect CSI' if result.perfect_csi else 'estimated CSI' }}</td></tr>
    </table>
    {% for block in blocks %}
    <h2>Pair {{ block.pair }}, subcarrier {{ block.subcarrier }} (limit {{ '%.4f'|format(block.limit) }} bits/s/Hz)</h2>
    <table>
        <tr><th>N</th><th>mean rate</th><th>std</th><th>gap</th><th>median gap</th><th>mean SINR sr</th><th>mean SINR rd</th></tr>
        {% for row in block.rows %}
        <tr>
            <td>{{ row.n }}</td>
            <td>{{ '%.4f'|format(row.mean_rate) }}</td>
            <td>{{ '%.4f'|format(row.std_rate) }}</td>
            <td>{{ '%.4f'|format(row.gap) }}</td>
            <td>{{ '%.4f'|format(row.median_gap) }}</td>
            <td>{{ '%.3g'|format(row.mean_sinr_sr) }}</td>
            <td>{{ '%.3g'|format(row.mean_sinr_rd) }}</td>
        </tr>
        {% endfor %}
    </table>
    {% endfor %}
</div>
</body>
</html>
"""


def render_html(result: SweepResult) -> str:
    env = Environment(autoescape=select_autoescape(default=True))
    template = env.from_string(HTML_TEMPLATE)
    blocks = []
    for i in range(result.num_pairs):
        for k in range(result.num_subcarriers):
            rows = [
                dict(n=n, **{c: float(getattr(result, c)[i, k, idx]) for c in PER_N_COLUMNS})
                for idx, n in enumerate(result.n_values)
            ]
            blocks.append({'pair': i, 'subcarrier': k,
                           'limit': float(result.asymptotic_rate[i, k]), 'rows': rows})
    return template.render(result=result, blocks=blocks)


class SweepReporter:
    """Write sweep results to disk in the configured formats."""

    def __init__(self, settings):
        self.settings = settings

    def render(self, result: SweepResult, output_format: Optional[str] = None) -> str:
        fmt = (output_format or self.settings.output_format).lower()
        if fmt == 'json':
            return emit_json(result)
        if fmt == 'csv':
            return emit_csv(result)
        raise ValueError(f"Unknown output format: {fmt}")

    async def generate_report(self, result: SweepResult, output_path: Optional[str] = None,
                              output_format: Optional[str] = None) -> Dict[str, str]:
        """
        Write the sweep result, plus an HTML summary when enabled.

        Args:
            result: Aggregated sweep statistics
            output_path: Result file path (defaults to the output directory)
            output_format: 'json' or 'csv' (defaults to the settings)

        Returns:
            Paths of the files written
        """
        fmt = (output_format or self.settings.output_format).lower()
        if not output_path:
            output_path = Path(self.settings.output_directory) / f"sweep_seed{result.seed}.{fmt}"

        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)

        with open(output_path, 'w', encoding='utf-8', newline='') as f:
            f.write(self.render(result, fmt))
        files = {fmt: str(output_path)}
        logger.info(f"Sweep results written to {output_path}")

        if self.settings.write_html:
            html_file = output_path.with_suffix('.html')
            with open(html_file, 'w', encoding='utf-8') as f:
                f.write(render_html(result))
            files['html'] = str(html_file)
            logger.info(f"HTML summary written to {html_file}")

        return files
