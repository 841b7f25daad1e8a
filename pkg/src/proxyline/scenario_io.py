"""Scenario-file schema (version 1), trace and summary serialization.

Files use 1-based proxy ids; the library is 0-based. Unknown fields are
rejected so typos fail loudly, with dotted-path diagnostics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .dynamics import DynamicsTrace, MoveRecord, PolicyKind, PolicySpec, Scheduler, StopReason
from .errors import ScenarioValidationError
from .metrics import delta, social_cost
from .model import Scenario, Space

SCHEMA_VERSION = 1


@dataclass
class ScenarioFile:
    scenario: Scenario
    policies: list[PolicySpec]
    scheduler: Scheduler
    max_steps: int = 100
    oscillation_window: int = 16
    alpha: float = 0.9
    mode: str = "full_info"
    trace_path: str = "trace.jsonl"
    summary_path: str = "summary.json"
    alt_followers: tuple[float, ...] | None = None
    name: str = ""


def _require_keys(obj: dict, allowed: set[str], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ScenarioValidationError(f"{path}.{key}", "unknown field")


def _number_list(obj, path: str) -> list[float]:
    if not isinstance(obj, list) or not all(isinstance(x, (int, float)) for x in obj):
        raise ScenarioValidationError(path, "expected a list of numbers")
    return [float(x) for x in obj]


def _parse_space(obj, path: str) -> Space:
    if obj is None:
        return Space.continuous()
    _require_keys(obj, {"kind", "step"}, path)
    kind = obj.get("kind")
    if kind == "continuous":
        return Space.continuous()
    if kind == "discrete":
        return Space.discrete(float(obj.get("step", 1.0)))
    raise ScenarioValidationError(f"{path}.kind", f"unknown space kind {kind!r}")


def _parse_policy(obj, path: str) -> PolicySpec:
    if not isinstance(obj, dict):
        raise ScenarioValidationError(path, "expected a policy object")
    _require_keys(
        obj, {"kind", "fraction", "alpha1", "decay", "positions", "truth_oriented"}, path
    )
    try:
        kind = PolicyKind(obj.get("kind"))
    except ValueError:
        raise ScenarioValidationError(f"{path}.kind", f"unknown policy kind {obj.get('kind')!r}")
    return PolicySpec(
        kind=kind,
        fraction=float(obj.get("fraction", 0.5)),
        alpha1=float(obj.get("alpha1", 0.25)),
        decay=float(obj.get("decay", 0.5)),
        positions=tuple(_number_list(obj.get("positions", []), f"{path}.positions")),
        truth_oriented=bool(obj.get("truth_oriented", False)),
    )


def _parse_scheduler(obj, path: str) -> Scheduler:
    if obj is None:
        return Scheduler.round_robin()
    _require_keys(obj, {"kind", "order"}, path)
    kind = obj.get("kind")
    if kind == "round_robin":
        return Scheduler.round_robin()
    if kind == "scripted":
        order = obj.get("order", [])
        if not isinstance(order, list) or not all(isinstance(x, int) for x in order):
            raise ScenarioValidationError(f"{path}.order", "expected a list of 1-based proxy ids")
        return Scheduler.scripted([x - 1 for x in order])
    raise ScenarioValidationError(f"{path}.kind", f"unknown scheduler kind {kind!r}")


def parse_scenario_file(doc: dict, name: str = "") -> ScenarioFile:
    if not isinstance(doc, dict):
        raise ScenarioValidationError("$", "expected a JSON object")
    _require_keys(
        doc, {"schema_version", "scenario", "policies", "scheduler", "run", "mode", "output"}, "$"
    )
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ScenarioValidationError("$.schema_version", f"expected {SCHEMA_VERSION}")
    sc_obj = doc.get("scenario")
    if not isinstance(sc_obj, dict):
        raise ScenarioValidationError("$.scenario", "required object")
    _require_keys(
        sc_obj, {"proxies", "followers", "space", "tie_break", "alt_followers"}, "$.scenario"
    )
    if "tie_break" in sc_obj:
        _require_keys(
            sc_obj["tie_break"], {"delegation_tie", "wm_tie"}, "$.scenario.tie_break"
        )  # single supported rule each; presence is allowed for explicitness
    proxies = _number_list(sc_obj.get("proxies", []), "$.scenario.proxies")
    if not proxies:
        raise ScenarioValidationError("$.scenario.proxies", "at least one proxy required")
    followers = _number_list(sc_obj.get("followers", []), "$.scenario.followers")
    space = _parse_space(sc_obj.get("space"), "$.scenario.space")
    scenario = Scenario(tuple(proxies), tuple(followers), space)
    alt = None
    if "alt_followers" in sc_obj:
        alt = tuple(_number_list(sc_obj["alt_followers"], "$.scenario.alt_followers"))

    pol_obj = doc.get("policies", [])
    if not isinstance(pol_obj, list) or len(pol_obj) != len(proxies):
        raise ScenarioValidationError("$.policies", "expected one policy per proxy")
    policies = [_parse_policy(p, f"$.policies[{i}]") for i, p in enumerate(pol_obj)]

    scheduler = _parse_scheduler(doc.get("scheduler"), "$.scheduler")

    run_obj = doc.get("run", {}) or {}
    _require_keys(run_obj, {"max_steps", "oscillation_window", "alpha"}, "$.run")
    mode = doc.get("mode", "full_info")
    if mode not in ("full_info", "partial_info"):
        raise ScenarioValidationError("$.mode", f"unknown mode {mode!r}")

    out_obj = doc.get("output", {}) or {}
    _require_keys(out_obj, {"trace", "summary"}, "$.output")

    return ScenarioFile(
        scenario=scenario,
        policies=policies,
        scheduler=scheduler,
        max_steps=int(run_obj.get("max_steps", 100)),
        oscillation_window=int(run_obj.get("oscillation_window", 16)),
        alpha=float(run_obj.get("alpha", 0.9)),
        mode=mode,
        trace_path=str(out_obj.get("trace", "trace.jsonl")),
        summary_path=str(out_obj.get("summary", "summary.json")),
        alt_followers=alt,
        name=name,
    )


def load_scenario_file(path: str | Path) -> ScenarioFile:
    p = Path(path)
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioValidationError(str(p), f"invalid JSON at line {exc.lineno}: {exc.msg}")
    return parse_scenario_file(doc, name=p.stem)


def record_to_dict(rec: MoveRecord) -> dict:
    """1-based ids for reports."""
    return {
        "t": rec.t,
        "mover": rec.mover + 1,
        "from": rec.from_pos,
        "to": rec.to_pos,
        "winner_before": rec.winner_before + 1,
        "winner_after": rec.winner_after + 1,
        "wm_before": rec.wm_before,
        "wm_after": rec.wm_after,
        "median_after": rec.median_after,
        "delta_after": rec.delta_after,
    }


def write_trace(trace: DynamicsTrace, path: Path) -> None:
    lines = [json.dumps(record_to_dict(r), sort_keys=True) for r in trace.records]
    path.write_text("\n".join(lines) + ("\n" if lines else ""))


def summarize(trace: DynamicsTrace) -> dict:
    scenario = trace.scenario
    recs = trace.records
    converged = trace.stop_reason != StopReason.MAX_STEPS or (
        len(recs) >= 2
        and abs(recs[-1].wm_after - recs[-2].wm_after) <= 1e-6
        and abs(recs[-1].delta_after - recs[-2].delta_after) <= 1e-6
    )
    summary = {
        "schema_version": SCHEMA_VERSION,
        "steps": len(recs),
        "initial_outcome": trace.initial_outcome(),
        "final_outcome": trace.final_outcome(),
        "initial_delta": delta(scenario, trace.initial_declared),
        "final_delta": trace.final_delta,
        "sc_initial": social_cost(scenario, trace.initial_outcome()),
        "sc_final": social_cost(scenario, trace.final_outcome()),
        "stop_reason": trace.stop_reason.value,
        "limit_delta": trace.limit_delta,
        "converged": converged,
        "final_state": list(trace.final_declared),
    }
    if trace.interval_history:
        summary["median_intervals"] = [
            [iv.lo, iv.hi, iv.lo_open, iv.hi_open] for iv in trace.interval_history
        ]
    return summary


def write_summary(summary: dict, path: Path) -> None:
    path.write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
