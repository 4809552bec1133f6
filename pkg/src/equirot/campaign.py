"""Seeded Monte-Carlo verification campaigns and their reports.

Samples are cut into fixed-size shards independent of the worker count. Shard
``i`` draws from ``SeedSequence(seed, spawn_key=(i,))`` and results are merged
in shard order, so the report depends only on ``(seed, config)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import __version__
from .bipartite import apply_local, check_schmidt_pair, local_operator, make_psi0, overlap
from .channels import bitflip_channel, depolarizing_channel, one_sided_channel_fidelity
from .conditions import (
    circle_set_predicate,
    one_sided_amount,
    sample_circle_point,
    sample_not_twosided_set,
    sample_one_sided_set,
    sample_two_sided_set,
    two_sided_overlap_condition,
)
from .errors import BadSchmidtPair, ConfigError
from .multiparty import (
    DEFAULT_MAX_DIM,
    SWAP_SU4,
    EulerSU2,
    commuting_special_unitary,
    dxd_condition,
    haar_special_unitary,
    sample_swap_matched_pair,
    sample_swap_symmetric_pair,
    swap_amount,
    verify_ghz_invariance,
)
from .su2 import (
    IDENTITY,
    IDENTITY_ELEMENT,
    NOT_ELEMENT,
    SU2Element,
    axis_rotation,
    haar_sample,
    pauli_element,
)

__all__ = [
    "COMMANDS",
    "SHARD_SIZE",
    "REPORT_FIELDS",
    "CampaignConfig",
    "CampaignReport",
    "parse_operator",
    "resolve_params",
    "run_campaign",
    "emit_report",
    "worker_count",
]

COMMANDS = ("onesided", "twosided", "circle", "channel", "ghz", "swap", "dxd")
SHARD_SIZE = 250
REPORT_FIELDS = (
    "command",
    "params",
    "n_samples",
    "n_pass",
    "max_residual",
    "mean_residual",
    "seed",
    "wall_time_ms",
    "library_version",
)
_PRESETS = {
    "not": NOT_ELEMENT,
    "sx": pauli_element("x"),
    "sy": pauli_element("y"),
    "sz": pauli_element("z"),
    "id": IDENTITY_ELEMENT,
}
_QUATERNION_TOL = 1e-6
_Z = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class CampaignConfig:
    command: str
    params: dict[str, Any] = field(default_factory=dict)
    samples: int = 1000
    seed: int = 0
    tol: float = 1e-9
    out: str | None = None


@dataclass(frozen=True)
class CampaignReport:
    command: str
    params: dict[str, Any]
    n_samples: int
    n_pass: int
    max_residual: float
    mean_residual: float
    seed: int
    wall_time_ms: int
    library_version: str

    def as_dict(self) -> dict[str, Any]:
        return {name: getattr(self, name) for name in REPORT_FIELDS}


def parse_operator(spec) -> str | list[float]:
    """Parse ``r0,rx,ry,rz``, ``preset:NAME`` or ``haar`` into its canonical echo form.

    Quaternions off the unit sphere by more than 1e-6 are rejected; others
    are renormalized.
    """
    if isinstance(spec, SU2Element):
        return [float(c) for c in spec.quaternion]
    if isinstance(spec, (list, tuple, np.ndarray)):
        parts = list(spec)
    else:
        text = str(spec).strip().lower()
        if text == "haar":
            return "haar"
        if text.startswith("preset:"):
            name = text.split(":", 1)[1]
            if name not in _PRESETS:
                raise ConfigError(f"unknown operator preset {name!r}; choose from {sorted(_PRESETS)}")
            return [float(c) for c in _PRESETS[name].quaternion]
        parts = text.split(",")
    try:
        q = np.array([float(x) for x in parts])
    except (TypeError, ValueError):
        raise ConfigError(f"malformed quaternion {spec!r}") from None
    if q.shape != (4,) or not np.all(np.isfinite(q)):
        raise ConfigError(f"quaternion needs 4 finite components, got {spec!r}")
    norm = float(np.linalg.norm(q))
    if abs(norm - 1.0) > _QUATERNION_TOL:
        raise ConfigError(f"quaternion {spec!r} has norm {norm}, expected 1 within {_QUATERNION_TOL}")
    return [float(c) for c in q / norm]


def _float(params: dict, key: str, default=None) -> float | None:
    value = params.get(key, default)
    if value is None:
        return None
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"--{key} must be a number, got {value!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"--{key} must be finite")
    return value


def _schmidt(params: dict) -> dict[str, float]:
    l0 = _float(params, "l0")
    l1 = _float(params, "l1")
    if l0 is None and l1 is None:
        l0 = l1 = 1 / math.sqrt(2)
    elif l1 is None:
        if not 0.0 <= l0 <= 1.0:
            raise ConfigError(f"--l0 must lie in [0, 1], got {l0}")
        l1 = math.sqrt(max(0.0, 1.0 - l0 * l0))
    elif l0 is None:
        if not 0.0 <= l1 <= 1.0:
            raise ConfigError(f"--l1 must lie in [0, 1], got {l1}")
        l0 = math.sqrt(max(0.0, 1.0 - l1 * l1))
    try:
        check_schmidt_pair(l0, l1)
    except BadSchmidtPair as exc:
        raise ConfigError(str(exc)) from None
    return {"l0": l0, "l1": l1}


def _bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {value!r}")


def resolve_params(command: str, params: dict[str, Any]) -> dict[str, Any]:
    """Validate raw parameters and return their canonical, JSON-ready echo."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    params = {k: v for k, v in params.items() if v is not None}
    out: dict[str, Any] = {"constrained": _bool(params.get("constrained", True))}
    if command in ("onesided", "twosided", "channel", "swap"):
        out.update(_schmidt(params))
    if command in ("onesided", "circle"):
        out["w1"] = parse_operator(params.get("w1", "haar"))
    if command == "twosided":
        out["w1"] = parse_operator(params.get("w1", "preset:not"))
        out["w2"] = parse_operator(params.get("w2", "preset:not"))
    if command == "channel":
        kind = str(params.get("kind", "depolarizing")).lower()
        if kind not in ("depolarizing", "bitflip"):
            raise ConfigError(f"--kind must be depolarizing or bitflip, got {kind!r}")
        p = _float(params, "p", 0.5)
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"--p must lie in [0, 1], got {p}")
        out.update(kind=kind, p=p)
    if command == "swap":
        family = str(params.get("family", "matched")).lower()
        if family not in ("matched", "symmetric"):
            raise ConfigError(f"--family must be matched or symmetric, got {family!r}")
        out["family"] = family
    if command == "dxd":
        try:
            dim = int(params.get("dim", 3))
        except (TypeError, ValueError):
            raise ConfigError(f"--dim must be an integer, got {params.get('dim')!r}") from None
        max_dim = int(params.get("max_dim", DEFAULT_MAX_DIM))
        if not 2 <= dim <= max_dim:
            raise ConfigError(f"--dim must lie in [2, {max_dim}], got {dim}")
        if "dvals" in params:
            raw = params["dvals"]
            try:
                dvals = [float(x) for x in (raw.split(",") if isinstance(raw, str) else raw)]
            except (TypeError, ValueError):
                raise ConfigError(f"malformed --dvals {raw!r}") from None
            if len(dvals) != dim:
                raise ConfigError(f"--dvals has {len(dvals)} entries, --dim is {dim}")
            norm = math.sqrt(math.fsum(x * x for x in dvals))
            if abs(norm - 1.0) > _QUATERNION_TOL or any(x < 0 for x in dvals):
                raise ConfigError("--dvals must be non-negative with unit 2-norm")
            dvals = sorted((x / norm for x in dvals), reverse=True)
        else:
            dvals = [1 / math.sqrt(dim)] * dim
        out.update(dim=dim, max_dim=max_dim, dvals=dvals)
    return out


def _operator(echo, rng: np.random.Generator) -> SU2Element:
    if echo == "haar":
        return haar_sample(rng)
    return SU2Element.from_quaternion(echo)


def _onesided(p: dict, rng: np.random.Generator) -> float:
    l0, l1 = p["l0"], p["l1"]
    w1 = _operator(p["w1"], rng)
    if p["constrained"]:
        u = sample_one_sided_set(w1, rng, delta=l0 * l0 - l1 * l1)
    else:
        u = haar_sample(rng)
    v = haar_sample(rng)
    moved = overlap(apply_local(u, v, make_psi0(l0, l1)), local_operator(w1, IDENTITY))
    return abs(moved - one_sided_amount(w1, l0, l1))


def _twosided(p: dict, rng: np.random.Generator) -> float:
    l0, l1 = p["l0"], p["l1"]
    w1, w2 = _operator(p["w1"], rng), _operator(p["w2"], rng)
    not_q = [float(c) for c in NOT_ELEMENT.quaternion]
    if not p["constrained"]:
        u, v = haar_sample(rng), haar_sample(rng)
    elif p["w1"] == not_q and p["w2"] == not_q:
        u, v = sample_not_twosided_set(l0, l1, rng)
    else:
        u, v = sample_two_sided_set(w1, w2, rng)
    return two_sided_overlap_condition(u, v, w1, w2, l0, l1).value


def _circle(p: dict, rng: np.random.Generator) -> float:
    w1 = _operator(p["w1"], rng)
    if p["constrained"]:
        theta, phi = sample_circle_point(w1, rng)
    else:
        theta = math.acos(rng.uniform(-1.0, 1.0))
        phi = rng.uniform(0.0, 2 * math.pi)
    return circle_set_predicate(theta, phi, w1).value


def _channel(p: dict, rng: np.random.Generator) -> float:
    l0, l1 = p["l0"], p["l1"]
    ch = depolarizing_channel(p["p"]) if p["kind"] == "depolarizing" else bitflip_channel(p["p"])
    if p["constrained"]:
        u = axis_rotation(_Z, rng.uniform(0.0, 2 * math.pi))
    else:
        u = haar_sample(rng)
    v = haar_sample(rng)
    reference = one_sided_channel_fidelity(ch, IDENTITY_ELEMENT, IDENTITY_ELEMENT, l0, l1)
    return abs(one_sided_channel_fidelity(ch, u, v, l0, l1) - reference)


def _ghz(p: dict, rng: np.random.Generator) -> float:
    e1, e2, e3 = (EulerSU2.random(rng) for _ in range(3))
    alpha_p, gamma_p, delta_p, phi = rng.uniform(0.0, 2 * math.pi, size=4)
    return verify_ghz_invariance(e1, e2, e3, alpha_p, gamma_p, delta_p, phi).value


def _swap(p: dict, rng: np.random.Generator) -> float:
    if not p["constrained"]:
        u, v = haar_sample(rng), haar_sample(rng)
    elif p["family"] == "matched":
        u, v = sample_swap_matched_pair(rng)
    else:
        u, v = sample_swap_symmetric_pair(rng)
    return abs(swap_amount(u, v, p["l0"], p["l1"]) - SWAP_SU4[0, 0])


def _dxd(p: dict, rng: np.random.Generator) -> float:
    d = p["dim"]
    w1 = haar_special_unitary(d, rng)
    w2 = np.eye(d, dtype=complex)
    u = commuting_special_unitary(w1, rng) if p["constrained"] else haar_special_unitary(d, rng)
    v = haar_special_unitary(d, rng)
    return dxd_condition(w1, w2, u, v, p["dvals"], max_dim=p["max_dim"]).value


_SAMPLERS: dict[str, Callable[[dict, np.random.Generator], float]] = {
    "onesided": _onesided,
    "twosided": _twosided,
    "circle": _circle,
    "channel": _channel,
    "ghz": _ghz,
    "swap": _swap,
    "dxd": _dxd,
}


def _run_shard(command: str, params: dict, seed: int, shard_index: int, count: int) -> list[float]:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(shard_index,)))
    sampler = _SAMPLERS[command]
    return [float(sampler(params, rng)) for _ in range(count)]


def worker_count(default: int | None = None) -> int:
    raw = os.environ.get("EQUIROT_WORKERS")
    if raw is None:
        return default or os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"EQUIROT_WORKERS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"EQUIROT_WORKERS must be a positive integer, got {raw!r}")
    return n


def _validate(cfg: CampaignConfig) -> None:
    if cfg.command not in COMMANDS:
        raise ConfigError(f"unknown command {cfg.command!r}; choose from {', '.join(COMMANDS)}")
    if not isinstance(cfg.samples, int) or cfg.samples < 1:
        raise ConfigError(f"samples must be a positive integer, got {cfg.samples!r}")
    if not isinstance(cfg.seed, int) or not 0 <= cfg.seed < 2**64:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {cfg.seed!r}")
    if not (isinstance(cfg.tol, (int, float)) and math.isfinite(cfg.tol) and cfg.tol > 0):
        raise ConfigError(f"tol must be a positive number, got {cfg.tol!r}")


def run_campaign(cfg: CampaignConfig, workers: int | None = None) -> CampaignReport:
    """Execute ``cfg.samples`` draws of the named condition and aggregate residuals.

    ``workers`` overrides ``EQUIROT_WORKERS``; neither affects the report
    beyond ``wall_time_ms``.
    """
    _validate(cfg)
    params = resolve_params(cfg.command, cfg.params)
    n_workers = workers if workers is not None else worker_count()
    if n_workers < 1:
        raise ConfigError(f"worker count must be positive, got {n_workers}")

    start = time.perf_counter()
    counts = [min(SHARD_SIZE, cfg.samples - k) for k in range(0, cfg.samples, SHARD_SIZE)]
    jobs = [(cfg.command, params, cfg.seed, i, c) for i, c in enumerate(counts)]
    n_workers = min(n_workers, len(jobs))
    if n_workers == 1:
        shards = [_run_shard(*job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            shards = list(pool.map(_run_shard, *zip(*jobs)))
    residuals = [r for shard in shards for r in shard]
    wall_ms = int(round((time.perf_counter() - start) * 1000))

    return CampaignReport(
        command=cfg.command,
        params=params,
        n_samples=len(residuals),
        n_pass=sum(r <= cfg.tol for r in residuals),
        max_residual=max(residuals),
        mean_residual=math.fsum(residuals) / len(residuals),
        seed=cfg.seed,
        wall_time_ms=wall_ms,
        library_version=__version__,
    )


def emit_report(report: CampaignReport, fmt: str = "json", header: bool = True) -> bytes:
    """Serialize a report as one JSON object or a CSV row (with header line by default)."""
    data = report.as_dict()
    if fmt == "json":
        return (json.dumps(data, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt == "csv-row":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if header:
            writer.writerow(REPORT_FIELDS)
        row = []
        for name in REPORT_FIELDS:
            value = data[name]
            if isinstance(value, dict):
                value = json.dumps(value, ensure_ascii=False)
            elif isinstance(value, float):
                value = repr(value)
            row.append(value)
        writer.writerow(row)
        return buf.getvalue().encode("utf-8")
    raise ConfigError(f"unknown report format {fmt!r}")
