"""Named replication fixtures and their assertion suites.

Each fixture is a small worked scenario with independently known
quantities; ``replicate(name)`` re-runs it and checks those quantities at
pinned tolerances. The CLI renders the resulting report and the
acceptance tests call the same functions.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import dynamics as dyn
from . import manipulation as manip
from . import metrics, model, partial_info as pinfo
from .dynamics import PolicyKind, PolicySpec, Scheduler, StopReason
from .model import Scenario, Space
from .scenario_io import load_scenario_file


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ReplicationReport:
    name: str
    checks: list[Check] = field(default_factory=list)
    values: dict = field(default_factory=dict)

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(ok), detail))

    def close(self, name: str, got: float, want: float, tol: float = 0.0) -> None:
        ok = abs(got - want) <= tol
        self.checks.append(Check(name, ok, f"got {got!r}, want {want!r} ± {tol}"))
        self.values[name] = got

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def fixtures_dir() -> Path:
    override = os.environ.get("PROXYLINE_FIXTURES")
    if override:
        return Path(override)
    return Path(str(resources.files("proxyline") / "fixtures"))


def load_fixture_file(name: str):
    return load_scenario_file(fixtures_dir() / f"{name}.json")


def expected_values(name: str) -> dict:
    path = fixtures_dir() / "expected" / f"{name}.json"
    return json.loads(path.read_text())


def _diff_expected(report: ReplicationReport) -> None:
    """Compare collected values against the committed expected file."""
    try:
        expected = expected_values(report.name)
    except FileNotFoundError:
        return
    for key, spec in expected.items():
        want, tol = float(spec["value"]), float(spec.get("tol", 0.0))
        if key not in report.values:
            report.check(f"expected.{key}", False, "value not produced")
            continue
        got = float(report.values[key])
        report.check(f"expected.{key}", abs(got - want) <= tol, f"got {got!r}, want {want!r} ± {tol}")


# ---------------------------------------------------------------------------
# scenarios


def example1_scenario() -> Scenario:
    return Scenario((-1.0, 1.5), (0.0,))


def appendix_a_scenario() -> Scenario:
    return Scenario((-11.0, -13.0, -13.0, -13.0, 12.0), (5.0, 5.0, 1.0, 0.0), Space.discrete(1.0))


def appendix_b_scenario() -> Scenario:
    return Scenario((-30.0, 90.0), (-50.0, 0.0, 10.0))


def fig3_scenario() -> Scenario:
    followers = (-4.5, -4.8, -3.6, -2.5, -1.0, -0.6, -0.2, 0.0) + tuple(
        0.4 * k for k in range(1, 12)
    )
    return Scenario((-4.0, -3.0, -2.0, -1.5), followers)


def fig5_scenario() -> Scenario:
    return Scenario((-4.0, 5.0), (0.0,))


def fig7_scenarios() -> tuple[Scenario, Scenario]:
    proxies = (-20.0, 10.0, 50.0)
    return Scenario(proxies, (-50.0, 40.0)), Scenario(proxies, (-50.0, 0.0))


def footnote_scenarios(k: int = 10) -> tuple[Scenario, Scenario]:
    followers = (0.0,) * k + (1.0,) * (k + 2)
    near_two = Scenario((0.0, 1.9), followers)
    reverse = Scenario((0.0, 1.0 + 2.0 / k), followers)
    return near_two, reverse


# ---------------------------------------------------------------------------
# replications


def replicate_example1() -> ReplicationReport:
    r = ReplicationReport("example1")
    sc = example1_scenario()
    truthful = sc.truthful_state()
    r.check("delegation_to_proxy_1", model.delegate(sc, truthful) == [0])
    wid, wpos = model.wm_winner(sc, truthful)
    r.check("winner_is_proxy_1", wid == 0, f"winner id {wid + 1}")
    r.close("winner_position", wpos, -1.0)
    r.close("median", model.unweighted_median(sc, truthful), 0.0)
    r.close("delta", metrics.delta(sc, truthful), 1.0)
    r.check(
        "nearest_proxy_agrees", model.nearest_proxy_to_median(sc, truthful) == wid
    )
    _diff_expected(r)
    return r


def replicate_example2() -> ReplicationReport:
    r = ReplicationReport("example2")
    sc = example1_scenario()
    truthful = sc.truthful_state()
    for eps in (0.25, 0.5, 1.0):
        cand = 1.0 - eps
        state = [truthful[0], cand]
        wid, wpos = model.wm_winner(sc, state)
        r.check(f"eps_{eps}_proxy2_wins", wid == 1, f"winner {wid + 1} at {wpos}")
        r.close(f"eps_{eps}_outcome", wpos, cand)
        r.check(
            f"eps_{eps}_strict_improvement",
            manip.is_better_response(sc, truthful, 1, cand),
        )
    _diff_expected(r)
    return r


def replicate_theorem2_fig2() -> ReplicationReport:
    r = ReplicationReport("theorem2_fig2")
    sc = example1_scenario()
    verdict = manip.characterize_truthful_manipulability(sc)
    r.check("manipulable", verdict.manipulable)
    r.check("witness_is_proxy_2", verdict.witness_proxy == 1)
    r.close("witness_position_is_median", verdict.witness_position, 0.0)
    r.check(
        "witness_improves",
        manip.is_better_response(sc, sc.truthful_state(), verdict.witness_proxy, verdict.witness_position),
    )
    state = sc.truthful_state()
    state[verdict.witness_proxy] = verdict.witness_position
    r.close("outcome_after_witness", model.wm_winner(sc, state)[1], 0.0)
    _diff_expected(r)
    return r


def replicate_fig3_one_side() -> ReplicationReport:
    r = ReplicationReport("fig3_one_side")
    sc = fig3_scenario()
    med = metrics.true_median(sc)
    r.close("median", med, 0.0)
    r.check("all_proxies_left", all(p < med for p in sc.proxy_peaks))
    verdict = manip.characterize_truthful_manipulability(sc)
    r.check("not_manipulable", not verdict.manipulable)
    r.check("truthful_is_pne", manip.is_pne(sc, sc.truthful_state()))
    policies = [PolicySpec(PolicyKind.MONOTONE_BETTER_RESPONSE, truth_oriented=True)] * 4
    trace = dyn.run_dynamics(sc, Scheduler.round_robin(), policies, max_steps=10)
    r.check("immediate_pne", trace.stop_reason == StopReason.PNE and not trace.records)
    r.close("outcome_unchanged", trace.final_outcome(), model.wm_winner(sc, sc.truthful_state())[1])
    _diff_expected(r)
    return r


def replicate_fig5_metamove() -> ReplicationReport:
    r = ReplicationReport("fig5_metamove")
    sc = fig5_scenario()
    policies = [
        PolicySpec(PolicyKind.SCRIPTED),
        PolicySpec(PolicyKind.SCRIPTED, positions=(2.0, 3.0)),
    ]
    trace = dyn.run_dynamics(sc, Scheduler.scripted([1, 1]), policies, max_steps=2)
    r.close("initial_delta", trace.initial_delta, 4.0)
    deltas = [rec.delta_after for rec in trace.records]
    r.check("delta_sequence", deltas == [2.0, 3.0], f"got {deltas}")
    segments = dyn.detect_meta_moves(trace)
    r.check("one_segment", len(segments) == 1, f"got {len(segments)}")
    seg = segments[0]
    r.check("segment_length_1", seg.length == 1, f"length {seg.length}")
    r.check("exit_above_inside", seg.exit_delta > deltas[0], f"{seg.exit_delta} vs {deltas[0]}")
    r.check("exit_below_entry", seg.exit_delta < seg.entry_delta)
    r.check("trace_monotone", dyn.trace_is_monotone(trace))
    _diff_expected(r)
    return r


def replicate_example3() -> ReplicationReport:
    r = ReplicationReport("example3")
    sc = example1_scenario()
    base_delta = metrics.delta(sc, sc.truthful_state())
    policies = [PolicySpec(PolicyKind.OSCILLATING_ALPHA, alpha1=base_delta / 4, decay=0.5)] * 2
    trace = dyn.run_dynamics(sc, Scheduler.round_robin(), policies, max_steps=200)
    r.check("oscillation_detected", trace.stop_reason == StopReason.OSCILLATION_DETECTED,
            f"stopped {trace.stop_reason.value} after {len(trace.records)} moves")
    r.check("within_200_steps", len(trace.records) <= 200)
    r.close("limit_delta", trace.limit_delta or math.nan, base_delta / 2, 1e-6)
    last_two = sorted(rec.wm_after for rec in trace.records[-2:])
    r.close("oscillation_low", last_two[0], -0.5, 1e-6)
    r.close("oscillation_high", last_two[1], 0.5, 1e-6)
    r.check("not_pne", trace.stop_reason != StopReason.PNE)
    _diff_expected(r)
    return r


def appendix_a_policies() -> list[PolicySpec]:
    return [
        PolicySpec(PolicyKind.SCRIPTED, positions=(4.0,)),
        PolicySpec(PolicyKind.SCRIPTED, positions=(9.0,)),
        PolicySpec(PolicyKind.SCRIPTED, positions=(8.0,)),
        PolicySpec(PolicyKind.SCRIPTED, positions=(7.0,)),
        PolicySpec(PolicyKind.SCRIPTED, positions=(10.0, 5.0)),
    ]


def replicate_appendix_a() -> ReplicationReport:
    r = ReplicationReport("appendix_a")
    sc = appendix_a_scenario()
    trace = dyn.run_dynamics(
        sc, Scheduler.scripted([4, 1, 2, 3, 0, 4]), appendix_a_policies(), max_steps=20
    )
    r.check("stop_pne", trace.stop_reason == StopReason.PNE, trace.stop_reason.value)
    r.close("initial_outcome", trace.initial_outcome(), -11.0)
    r.close("final_outcome", trace.final_outcome(), 5.0)
    r.close("sc_truthful", metrics.social_cost(sc, trace.initial_outcome()), 84.0)
    r.close("sc_final", metrics.social_cost(sc, trace.final_outcome()), 86.0)
    r.check("first_move_to_10", trace.records[0].mover == 4 and trace.records[0].to_pos == 10.0)
    r.check("is_pne_discrete", manip.is_pne(sc, trace.final_declared))
    continuous = sc.with_space(Space.continuous())
    r.check("not_pne_continuous", not manip.is_pne(continuous, trace.final_declared))
    brs = manip.better_response_set(continuous, trace.final_declared, 4)
    r.check(
        "winner_has_continuous_br",
        not brs.is_empty() and brs.contains(5.5),
        f"winner BR {brs}",
    )
    r.check("bound_invariant", dyn.check_bound_invariant(trace))
    _diff_expected(r)
    return r


def appendix_b_opening(sc: Scenario):
    """Replay the two published moves and return (state, belief, trace)."""
    policies = [
        PolicySpec(PolicyKind.SCRIPTED, positions=(25.0,)),
        PolicySpec(PolicyKind.SCRIPTED, positions=(29.0,)),
    ]
    trace = dyn.run_dynamics(
        sc, Scheduler.scripted([1, 0]), policies, max_steps=2, mode="partial_info"
    )
    declared = list(trace.initial_declared)
    belief = pinfo.init_belief(pinfo.observe(sc, declared))
    for rec in trace.records:
        declared[rec.mover] = rec.to_pos
        belief = pinfo.update_belief(belief, rec, pinfo.observe(sc, declared))
    return declared, belief, trace


def replicate_appendix_b() -> ReplicationReport:
    r = ReplicationReport("appendix_b")
    sc = appendix_b_scenario()
    declared, belief, trace = appendix_b_opening(sc)
    ivs = trace.interval_history
    r.check("three_intervals", len(ivs) == 3, f"got {len(ivs)}")
    r.check("i0_unbounded_left", math.isinf(ivs[0].lo) and ivs[0].lo < 0)
    r.close("i0_hi", ivs[0].hi, 30.0)
    r.close("i1_lo", ivs[1].lo, -0.5)
    r.close("i1_hi", ivs[1].hi, 30.0)
    r.close("i2_lo", ivs[2].lo, -0.5)
    r.close("i2_hi", ivs[2].hi, 27.0)
    r.check("i1_lo_open", ivs[1].lo_open, "tie at -0.5 goes to proxy 1, not the winner")
    r.close("initial_outcome", trace.initial_outcome(), -30.0)
    r.close("outcome_s3", trace.final_outcome(), 25.0)
    r.close("sc_truthful", metrics.social_cost(sc, -30.0), 210.0)
    r.close("sc_final", metrics.social_cost(sc, 25.0), 235.0)

    dom2 = pinfo.dominating_set_nonwinner(belief, 1, sc.proxy_peaks[1])
    r.check(
        "dominating_p2_is_25_29",
        len(dom2.intervals) == 1
        and dom2.intervals[0].lo == 25.0
        and dom2.intervals[0].hi == 29.0
        and dom2.intervals[0].lo_open
        and dom2.intervals[0].hi_open,
        f"got {dom2}",
    )
    dom1 = pinfo.dominating_set_winner(belief, sc.proxy_peaks[0])
    r.check("dominating_p1_empty", dom1.is_empty(), f"got {dom1}")

    # regret-averse tail: proxy 2 walks the shrinking upper bound, outcome pinned
    policies = [PolicySpec(PolicyKind.MINIMAX_REGRET)] * 2
    tail = dyn.run_dynamics(
        sc,
        Scheduler.round_robin(),
        policies,
        max_steps=80,
        mode="partial_info",
        initial_declared=declared,
        initial_belief=belief,
    )
    r.close("limit_outcome", tail.final_outcome(), 25.0, 1e-6)
    r.check("proxy1_never_moves", all(rec.mover != 0 for rec in tail.records))
    moves2 = [rec.to_pos for rec in tail.records if rec.mover == 1]
    r.check("proxy2_monotone_decreasing", all(a > b for a, b in zip(moves2, moves2[1:])))
    r.check("first_tail_move_27", bool(moves2) and moves2[0] == 27.0, f"got {moves2[:3]}")
    med = metrics.true_median(sc)
    r.check("intervals_sound", all(iv.contains(med) for iv in ivs))
    _diff_expected(r)
    return r


def replicate_footnote_sc_vs_median(k: int = 10) -> ReplicationReport:
    r = ReplicationReport("footnote_sc_vs_median")
    near_two, reverse = footnote_scenarios(k)
    med = metrics.true_median(near_two)
    r.close("median", med, 1.0)

    wid, wpos = model.wm_winner(near_two, near_two.truthful_state())
    r.check("winner_is_far_proxy", wid == 1, f"winner {wid + 1} at {wpos}")
    sc_winner = metrics.social_cost(near_two, wpos)
    sc_other = metrics.social_cost(near_two, near_two.proxy_peaks[0])
    r.check("winner_sc_exceeds_other", sc_winner > sc_other, f"{sc_winner} vs {sc_other}")
    r.values["sc_winner"] = sc_winner
    r.values["sc_other"] = sc_other
    r.check("winner_sc_order_3k_vs_k", sc_winner > 2.5 * k > 1.5 * k > sc_other)

    wid2, wpos2 = model.wm_winner(reverse, reverse.truthful_state())
    r.check("reverse_winner_is_near_proxy", wid2 == 1, f"winner {wid2 + 1} at {wpos2}")
    sc_low = metrics.social_cost(reverse, reverse.proxy_peaks[0])
    sc_high = metrics.social_cost(reverse, reverse.proxy_peaks[1])
    r.check("reverse_low_sc_proxy_is_0", sc_low < sc_high, f"{sc_low} vs {sc_high}")
    d_low = abs(reverse.proxy_peaks[0] - med)
    d_high = abs(reverse.proxy_peaks[1] - med)
    r.check("low_sc_proxy_farther_from_median", d_low > d_high, f"{d_low} vs {d_high}")
    _diff_expected(r)
    return r


def replicate_fig7_indistinguishable() -> ReplicationReport:
    r = ReplicationReport("fig7_indistinguishable")
    top, bottom = fig7_scenarios()
    obs_top = pinfo.observe(top, top.truthful_state())
    obs_bottom = pinfo.observe(bottom, bottom.truthful_state())
    r.check("identical_observations", obs_top == obs_bottom, f"{obs_top} vs {obs_bottom}")
    r.check("winner_is_proxy_2", obs_top.winner_id == 1)
    _diff_expected(r)
    return r


REPLICATIONS = {
    "example1": replicate_example1,
    "example2": replicate_example2,
    "theorem2_fig2": replicate_theorem2_fig2,
    "fig3_one_side": replicate_fig3_one_side,
    "fig5_metamove": replicate_fig5_metamove,
    "example3": replicate_example3,
    "appendix_a": replicate_appendix_a,
    "appendix_b": replicate_appendix_b,
    "footnote_sc_vs_median": replicate_footnote_sc_vs_median,
    "fig7_indistinguishable": replicate_fig7_indistinguishable,
}


def replicate(name: str) -> ReplicationReport:
    if name not in REPLICATIONS:
        raise KeyError(name)
    return REPLICATIONS[name]()
