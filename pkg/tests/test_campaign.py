from __future__ import annotations

import json

import pytest

from equirot import __version__
from equirot.campaign import (
    COMMANDS,
    REPORT_FIELDS,
    CampaignConfig,
    emit_report,
    parse_operator,
    resolve_params,
    run_campaign,
    worker_count,
)
from equirot.errors import ConfigError


def _strip_time(payload: bytes) -> dict:
    data = json.loads(payload)
    data.pop("wall_time_ms")
    return data


@pytest.mark.parametrize(
    "spec, expected",
    [
        ("haar", "haar"),
        ("preset:not", [0.0, 0.7071067811865475, 0.7071067811865475, 0.0]),
        ("preset:id", [1.0, 0.0, 0.0, 0.0]),
        ("0,0,0,1", [0.0, 0.0, 0.0, 1.0]),
    ],
)
def test_parse_operator(spec, expected):
    got = parse_operator(spec)
    assert got == expected if isinstance(expected, str) else got == pytest.approx(expected)


@pytest.mark.parametrize("spec", ["1,1,0,0", "preset:nope", "1,2", "a,b,c,d"])
def test_parse_operator_rejects(spec):
    with pytest.raises(ConfigError):
        parse_operator(spec)


def test_resolve_params_derives_l1():
    params = resolve_params("onesided", {"l0": 0.8})
    assert params["l1"] == pytest.approx(0.6)
    with pytest.raises(ConfigError):
        resolve_params("onesided", {"l0": 0.6, "l1": 0.6})


@pytest.mark.parametrize("command", COMMANDS)
def test_constrained_campaigns_pass(command):
    params = {"family": "symmetric"} if command == "swap" else {}
    if command in ("onesided", "twosided", "channel"):
        params["l0"] = 0.9
    report = run_campaign(CampaignConfig(command, params, samples=300, seed=7), workers=1)
    assert report.n_samples == 300
    assert report.n_pass == 300, report
    assert report.max_residual < 1e-9
    assert list(report.as_dict()) == list(REPORT_FIELDS)
    assert report.library_version == __version__


def test_unconstrained_onesided_fails():
    cfg = CampaignConfig("onesided", {"l0": 0.9, "constrained": False}, samples=300, seed=1)
    report = run_campaign(cfg, workers=1)
    assert report.n_pass <= 3


def test_shard_invariance_and_determinism():
    cfg = CampaignConfig("twosided", {"l0": 0.9, "w1": "haar", "w2": "haar"}, samples=1100, seed=42)
    one = run_campaign(cfg, workers=1)
    many = run_campaign(cfg, workers=4)
    assert (one.n_pass, one.max_residual, one.mean_residual) == (many.n_pass, many.max_residual, many.mean_residual)
    assert _strip_time(emit_report(one)) == _strip_time(emit_report(many))
    other = run_campaign(CampaignConfig(cfg.command, cfg.params, samples=1100, seed=43), workers=1)
    assert other.max_residual != one.max_residual


def test_csv_row():
    report = run_campaign(CampaignConfig("ghz", samples=10), workers=1)
    header, row = emit_report(report, "csv-row").decode().splitlines()
    assert header.split(",") == list(REPORT_FIELDS)
    assert row.startswith("ghz,")
    assert len(emit_report(report, "csv-row", header=False).decode().splitlines()) == 1
    with pytest.raises(ConfigError):
        emit_report(report, "xml")


@pytest.mark.parametrize(
    "cfg",
    [
        CampaignConfig("nope"),
        CampaignConfig("ghz", samples=0),
        CampaignConfig("ghz", seed=-1),
        CampaignConfig("ghz", tol=0.0),
        CampaignConfig("channel", {"p": 2.0}),
        CampaignConfig("dxd", {"dim": 20}),
    ],
)
def test_config_errors(cfg):
    with pytest.raises(ConfigError):
        run_campaign(cfg, workers=1)


def test_worker_env(monkeypatch):
    monkeypatch.setenv("EQUIROT_WORKERS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("EQUIROT_WORKERS", "zero")
    with pytest.raises(ConfigError):
        worker_count()
