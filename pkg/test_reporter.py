"""
Tests for sweep result serialization and report files
"""

import numpy as np
import pytest

from mimorelay.core.errors import ConfigParseError
from mimorelay.core.reporter import (
    SweepReporter,
    SweepResult,
    emit_csv,
    emit_json,
    parse_csv,
    parse_json,
    render_html,
)
from mimorelay.core.settings import Settings


@pytest.fixture
def result():
    rng = np.random.default_rng(0)
    shape = (2, 3, 2)
    mean = rng.uniform(1, 6, size=shape)
    limit = rng.uniform(5, 7, size=shape[:2])
    return SweepResult(
        n_values=[64, 256],
        mean_rate=mean,
        std_rate=rng.uniform(0, 0.1, size=shape),
        asymptotic_rate=limit,
        gap=np.abs(mean - limit[:, :, None]),
        median_gap=rng.uniform(0, 1, size=shape),
        mean_sinr_sr=rng.uniform(1, 100, size=shape),
        mean_sinr_rd=rng.uniform(1, 100, size=shape),
        trials=10,
        seed=42,
        config_digest="ab" * 32,
    )


def test_json_round_trip(result):
    assert parse_json(emit_json(result)) == result


def test_csv_round_trip(result):
    text = emit_csv(result)
    assert text.startswith("# trials=10 seed=42")
    assert text.count("\n") == 2 + 2 * 3 * 2
    assert parse_csv(text) == result


def test_csv_header(result):
    header = emit_csv(result).splitlines()[1]
    assert header.split(",")[:3] == ["pair", "subcarrier", "n"]


def test_malformed_inputs():
    with pytest.raises(ConfigParseError):
        parse_json("{")
    with pytest.raises(ConfigParseError):
        parse_csv("pair,subcarrier\n0,0\n")
    with pytest.raises(ConfigParseError):
        parse_csv("# trials=1 seed=0 config_digest=x perfect_csi=false\n")


def test_relative_gap(result):
    assert np.allclose(result.relative_gap() * result.asymptotic_rate[:, :, None], result.gap)


def test_html_lists_every_point(result):
    html = render_html(result)
    assert "Pair 1, subcarrier 2" in html
    assert html.count("<td>256</td>") == 6
    assert "estimated CSI" in html


@pytest.mark.asyncio
async def test_generate_report_writes_files(tmp_path, result):
    settings = Settings(output_directory=str(tmp_path / "out"), output_format="csv", write_html=True)
    files = await SweepReporter(settings).generate_report(result)
    assert set(files) == {"csv", "html"}
    with open(files["csv"], encoding="utf-8") as f:
        assert parse_csv(f.read()) == result
    assert files["csv"].endswith("sweep_seed42.csv")


@pytest.mark.asyncio
async def test_generate_report_explicit_path(tmp_path, result):
    target = tmp_path / "sweep.json"
    files = await SweepReporter(Settings()).generate_report(result, str(target), "json")
    assert files == {"json": str(target)}
    assert parse_json(target.read_text(encoding="utf-8")) == result


def test_unknown_format(result):
    with pytest.raises(ValueError):
        SweepReporter(Settings()).render(result, "xml")
