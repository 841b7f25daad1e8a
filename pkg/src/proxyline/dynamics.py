"""Iterative play: policies, scheduling, traces, meta-moves, bounds.

One proxy moves per step. A policy proposes a report; the engine accepts
it only if it is a strict better response (full information) or a genuine
position change (partial information, where dominating moves may leave
the outcome unchanged). A full round of passes ends the run.

Built-in policies only ever propose reports that win strictly (never by
an index tie) and, for non-winners, sit strictly closer to the current
median than the reigning winner. Boundary reports that win only through
tie-breaking stay available to the analysis in
:mod:`proxyline.manipulation` but are not played, which keeps the
distance-contraction laws of monotone play intact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import ConfigurationError
from .intervals import Interval
from .manipulation import is_better_response, outcome_pieces
from .metrics import delta, true_median
from .model import Scenario, unweighted_median, wm_winner
from .partial_info import BeliefState, init_belief, minimax_regret_strategy, observe, update_belief

OSCILLATION_TOL = 1e-9


class PolicyKind(enum.Enum):
    MONOTONE_BETTER_RESPONSE = "monotone_better_response"
    DISCRETE_BEST_RESPONSE = "discrete_best_response"
    OSCILLATING_ALPHA = "oscillating_alpha"
    MINIMAX_REGRET = "minimax_regret"
    SCRIPTED = "scripted"


@dataclass(frozen=True)
class PolicySpec:
    """Declarative description of one proxy's strategy rule."""

    kind: PolicyKind
    fraction: float = 0.5
    alpha1: float = 0.25
    decay: float = 0.5
    positions: tuple[float, ...] = ()
    truth_oriented: bool = False

    def validate(self, scenario: Scenario, mode: str) -> None:
        if self.kind == PolicyKind.OSCILLATING_ALPHA and scenario.space.is_discrete:
            raise ConfigurationError("oscillating_alpha requires continuous space")
        if self.kind == PolicyKind.DISCRETE_BEST_RESPONSE and not scenario.space.is_discrete:
            raise ConfigurationError("discrete_best_response requires discrete space")
        if self.kind == PolicyKind.MINIMAX_REGRET and mode != "partial_info":
            raise ConfigurationError("minimax_regret requires partial_info mode")
        if self.kind == PolicyKind.MONOTONE_BETTER_RESPONSE and not 0 < self.fraction <= 1:
            raise ConfigurationError("fraction must be in (0, 1]")
        if self.kind == PolicyKind.OSCILLATING_ALPHA and not (
            self.alpha1 > 0 and 0 < self.decay < 1
        ):
            raise ConfigurationError("alpha1 must be positive and decay in (0, 1)")
        if self.kind == PolicyKind.SCRIPTED and scenario.space.is_discrete:
            for p in self.positions:
                if not scenario.space.on_grid(p):
                    raise ConfigurationError(f"scripted position {p} off grid")


class SchedulerKind(enum.Enum):
    ROUND_ROBIN = "round_robin"
    SCRIPTED = "scripted"


@dataclass(frozen=True)
class Scheduler:
    """Turn order. A scripted order falls back to round-robin afterwards,
    so every proxy keeps getting turns (no starvation) and a full passing
    round can certify a PNE."""

    kind: SchedulerKind = SchedulerKind.ROUND_ROBIN
    order: tuple[int, ...] = ()

    @staticmethod
    def round_robin() -> "Scheduler":
        return Scheduler(SchedulerKind.ROUND_ROBIN)

    @staticmethod
    def scripted(order: list[int]) -> "Scheduler":
        return Scheduler(SchedulerKind.SCRIPTED, tuple(order))

    def proxy_at(self, turn: int, num_proxies: int) -> int:
        if self.kind == SchedulerKind.SCRIPTED and turn < len(self.order):
            return self.order[turn]
        offset = turn - (len(self.order) if self.kind == SchedulerKind.SCRIPTED else 0)
        return offset % num_proxies

    def validate(self, num_proxies: int) -> None:
        for j in self.order:
            if not 0 <= j < num_proxies:
                raise ConfigurationError(f"scheduler order references unknown proxy {j}")


@dataclass(frozen=True)
class MoveRecord:
    t: int  # 1-based accepted-move index
    mover: int
    from_pos: float
    to_pos: float
    winner_before: int
    winner_after: int
    wm_before: float
    wm_after: float
    median_after: float
    delta_after: float


class StopReason(enum.Enum):
    PNE = "pne"
    MAX_STEPS = "max_steps"
    OSCILLATION_DETECTED = "oscillation_detected"


@dataclass(frozen=True)
class MetaSegment:
    """A winning arrival plus its consecutive winning continuations."""

    start: int  # record index of the arrival
    length: int  # number of continuation records (0 = lone arrival)
    mover: int
    entry_delta: float
    exit_delta: float


@dataclass
class DynamicsTrace:
    scenario: Scenario
    initial_declared: list[float]
    records: list[MoveRecord]
    final_declared: list[float]
    stop_reason: StopReason
    limit_delta: float | None = None
    interval_history: list[Interval] = field(default_factory=list)  # partial mode

    @property
    def initial_delta(self) -> float:
        return delta(self.scenario, self.initial_declared)

    @property
    def final_delta(self) -> float:
        if self.records:
            return self.records[-1].delta_after
        return self.initial_delta

    def final_outcome(self) -> float:
        return wm_winner(self.scenario, self.final_declared)[1]

    def initial_outcome(self) -> float:
        return wm_winner(self.scenario, self.initial_declared)[1]


# ---------------------------------------------------------------------------
# policy proposal logic


def _moves_by(records: list[MoveRecord], mover: int) -> int:
    return sum(1 for r in records if r.mover == mover)


def _best_grid_in_open(a: float, b: float, target: float, step: float) -> float | None:
    """Grid point in the open interval (a, b) nearest to target."""
    if a >= b:
        return None
    k_lo = math.ceil(a / step - 1e-9)
    if abs(k_lo * step - a) <= 1e-9 * max(1.0, abs(a)):
        k_lo += 1
    k_hi = math.floor(b / step + 1e-9)
    if abs(k_hi * step - b) <= 1e-9 * max(1.0, abs(b)):
        k_hi -= 1
    if k_lo > k_hi:
        return None
    k = min(max(round(target / step), k_lo), k_hi)
    return k * step


def _propose_monotone(
    scenario: Scenario, declared: list[float], mover: int, spec: PolicySpec
) -> float | None:
    peak = scenario.proxy_peaks[mover]
    cur = declared[mover]
    med = unweighted_median(scenario, declared)
    winner_id, wm = wm_winner(scenario, declared)
    dlt = abs(med - wm)
    space = scenario.space

    if mover == winner_id:
        # meta-continuation: edge toward the peak while still winning strictly
        if peak == cur:
            return None
        pieces = outcome_pieces(scenario, declared, mover)
        if peak > cur:
            limit = min(pieces.right_edge, 2.0 * peak - cur)
            if peak >= med and limit > cur:
                x = cur + spec.fraction * (limit - cur)
                if x >= limit:
                    x = (cur + limit) / 2.0
                if space.is_discrete:
                    return _best_grid_in_open(cur, limit, x, space.step)
                return x
        else:
            limit = max(pieces.left_edge, 2.0 * peak - cur)
            if peak <= med and limit < cur:
                x = cur - spec.fraction * (cur - limit)
                if x <= limit:
                    x = (cur + limit) / 2.0
                if space.is_discrete:
                    return _best_grid_in_open(limit, cur, x, space.step)
                return x
        return None

    if peak == med:
        return peak if cur != peak else None
    own = 1.0 if peak > med else -1.0
    dist_peak = abs(peak - med)
    if dist_peak < dlt:
        return peak if cur != peak else None  # peak wins outright and is optimal
    if own * (wm - med) > 0:
        return None  # winner already on this side and closer: no monotone gain
    if dlt == 0:
        return None
    target = (1.0 - spec.fraction) * dlt
    if space.is_discrete:
        target = space.snap_down(target)
    x = med + own * target
    return x if x != cur else None


def _grid_below(edge: float, target: float, step: float) -> float:
    """Grid point strictly below ``edge`` nearest to ``target``."""
    k_max = math.floor(edge / step + 1e-9)
    if abs(k_max * step - edge) <= 1e-9 * max(1.0, abs(edge)):
        k_max -= 1
    return min(round(target / step), k_max) * step


def _grid_above(edge: float, target: float, step: float) -> float:
    k_min = math.ceil(edge / step - 1e-9)
    if abs(k_min * step - edge) <= 1e-9 * max(1.0, abs(edge)):
        k_min += 1
    return max(round(target / step), k_min) * step


def _propose_discrete_best(
    scenario: Scenario, declared: list[float], mover: int
) -> float | None:
    peak = scenario.proxy_peaks[mover]
    cur = declared[mover]
    step = scenario.space.step
    _, wm = wm_winner(scenario, declared)
    cur_d = abs(wm - peak)
    if cur_d == 0:
        return None
    pieces = outcome_pieces(scenario, declared, mover)

    candidates: list[tuple[float, float, float]] = []  # (outcome dist, |x-cur|, x)
    # identity stretch (strict wins only: open interval, tie boundaries skipped)
    a = max(pieces.left_edge, peak - cur_d)
    b = min(pieces.right_edge, peak + cur_d)
    if math.isinf(a) and math.isinf(b):
        x: float | None = peak  # single proxy: anything wins; the peak is optimal
        if x != cur:
            candidates.append((0.0, abs(x - cur), x))
    else:
        x = _best_grid_in_open(a, b, peak, step)
        if x is not None and x != cur:
            candidates.append((abs(x - peak), abs(x - cur), x))
    # constant tails: outcome does not depend on where in the tail we stand
    if pieces.left_const is not None and math.isfinite(pieces.left_edge):
        if abs(pieces.left_const - peak) < cur_d:
            x = _grid_below(pieces.left_edge, peak, step)
            if x != cur:
                candidates.append((abs(pieces.left_const - peak), abs(x - cur), x))
    if pieces.right_const is not None and math.isfinite(pieces.right_edge):
        if abs(pieces.right_const - peak) < cur_d:
            x = _grid_above(pieces.right_edge, peak, step)
            if x != cur:
                candidates.append((abs(pieces.right_const - peak), abs(x - cur), x))
    if not candidates:
        return None
    candidates.sort()
    return candidates[0][2]


def _propose_oscillating(
    scenario: Scenario,
    declared: list[float],
    mover: int,
    spec: PolicySpec,
    records: list[MoveRecord],
) -> float | None:
    peak = scenario.proxy_peaks[mover]
    med = unweighted_median(scenario, declared)
    _, wm = wm_winner(scenario, declared)
    dlt = abs(med - wm)
    alpha = spec.alpha1 * (spec.decay ** len(records))
    if peak == med or alpha >= dlt:
        return None
    sign = 1.0 if med > peak else -1.0
    x = med - sign * (dlt - alpha)
    return x if x != declared[mover] else None


def _propose_scripted(
    declared: list[float], mover: int, spec: PolicySpec, records: list[MoveRecord]
) -> float | None:
    k = _moves_by(records, mover)
    if k >= len(spec.positions):
        return None
    x = spec.positions[k]
    return x if x != declared[mover] else None


def _propose_minimax(
    scenario: Scenario, declared: list[float], mover: int, belief: BeliefState
) -> float | None:
    decision = minimax_regret_strategy(belief, mover, scenario.proxy_peaks[mover])
    return decision.chosen if decision.chosen != declared[mover] else None


def _truth_override(scenario: Scenario, declared: list[float], mover: int) -> float | None:
    """The truth-oriented rule: report the peak when it is an improving
    report that is weakly best among all improving reports."""
    peak = scenario.proxy_peaks[mover]
    if declared[mover] == peak:
        return None
    _, wm = wm_winner(scenario, declared)
    cur_d = abs(wm - peak)
    if cur_d == 0:
        return None
    pieces = outcome_pieces(scenario, declared, mover)
    at_peak = abs(pieces.outcome(peak) - peak)
    if at_peak >= cur_d:
        return None  # truth is not even improving
    if at_peak == 0:
        return peak  # outcome lands on the peak: unbeatable
    # exact infimum of |outcome - peak| over all improving reports
    best = at_peak
    a = max(pieces.left_edge, peak - cur_d)
    b = min(pieces.right_edge, peak + cur_d)
    if a < b:  # winning stretch: outcome equals the report
        if a < peak < b:
            best = 0.0
        else:
            best = min(best, abs(a - peak), abs(b - peak))
    for value in (
        pieces.left_edge_outcome,
        pieces.right_edge_outcome,
        pieces.left_const,
        pieces.right_const,
    ):
        if value is not None and abs(value - peak) < cur_d:
            best = min(best, abs(value - peak))
    return peak if at_peak <= best else None


def propose(
    scenario: Scenario,
    declared: list[float],
    mover: int,
    spec: PolicySpec,
    records: list[MoveRecord],
    belief: BeliefState | None,
    mode: str,
) -> float | None:
    if spec.truth_oriented and mode == "full_info":
        override = _truth_override(scenario, declared, mover)
        if override is not None:
            return override
    if spec.kind == PolicyKind.MONOTONE_BETTER_RESPONSE:
        return _propose_monotone(scenario, declared, mover, spec)
    if spec.kind == PolicyKind.DISCRETE_BEST_RESPONSE:
        return _propose_discrete_best(scenario, declared, mover)
    if spec.kind == PolicyKind.OSCILLATING_ALPHA:
        return _propose_oscillating(scenario, declared, mover, spec, records)
    if spec.kind == PolicyKind.SCRIPTED:
        return _propose_scripted(declared, mover, spec, records)
    if spec.kind == PolicyKind.MINIMAX_REGRET:
        if belief is None:
            raise ConfigurationError("minimax_regret needs a belief (partial_info mode)")
        return _propose_minimax(scenario, declared, mover, belief)
    raise ConfigurationError(f"unknown policy kind {spec.kind}")


def step(
    scenario: Scenario,
    declared: list[float],
    mover: int,
    spec: PolicySpec,
    records: list[MoveRecord] | None = None,
    belief: BeliefState | None = None,
    mode: str = "full_info",
) -> MoveRecord | None:
    """One proxy's turn: propose, validate, and build the move record.

    Returns None when the proxy passes (no proposal, or a proposal that
    is not acceptable under the mode's rules).
    """
    records = records if records is not None else []
    proposal = propose(scenario, declared, mover, spec, records, belief, mode)
    if proposal is None or proposal == declared[mover]:
        return None
    if scenario.space.is_discrete and not scenario.space.on_grid(proposal):
        return None
    if mode == "full_info" and not is_better_response(scenario, declared, mover, proposal):
        return None
    winner_before, wm_before = wm_winner(scenario, declared)
    after = list(declared)
    after[mover] = proposal
    winner_after, wm_after = wm_winner(scenario, after)
    med_after = unweighted_median(scenario, after)
    return MoveRecord(
        t=len(records) + 1,
        mover=mover,
        from_pos=declared[mover],
        to_pos=proposal,
        winner_before=winner_before,
        winner_after=winner_after,
        wm_before=wm_before,
        wm_after=wm_after,
        median_after=med_after,
        delta_after=abs(med_after - wm_after),
    )


def _detect_oscillation(records: list[MoveRecord], window: int) -> bool:
    if len(records) < window or window < 4:
        return False
    tail = records[-window:]
    wm = [r.wm_after for r in tail]
    dl = [r.delta_after for r in tail]
    for i in range(2, window):
        if abs(wm[i] - wm[i - 2]) > OSCILLATION_TOL:
            return False
        if abs(dl[i] - dl[i - 2]) > OSCILLATION_TOL:
            return False
    return True


def run_dynamics(
    scenario: Scenario,
    scheduler: Scheduler,
    policies: list[PolicySpec],
    max_steps: int,
    oscillation_window: int = 16,
    mode: str = "full_info",
    initial_declared: list[float] | None = None,
    initial_belief: BeliefState | None = None,
) -> DynamicsTrace:
    """Iterate single-proxy moves until PNE, step budget, or oscillation.

    The default initial state is truthful. PNE is certified by a full
    round of passes; the oscillation detector looks for a settled
    2-cycle of winner positions.
    """
    if max_steps < 1:
        raise ConfigurationError("max_steps must be >= 1")
    if mode not in ("full_info", "partial_info"):
        raise ConfigurationError(f"unknown mode {mode!r}")
    if len(policies) != scenario.num_proxies:
        raise ConfigurationError("one policy per proxy required")
    for spec in policies:
        spec.validate(scenario, mode)
    scheduler.validate(scenario.num_proxies)

    declared = list(initial_declared) if initial_declared is not None else scenario.truthful_state()
    belief: BeliefState | None = None
    interval_history: list[Interval] = []
    if mode == "partial_info":
        belief = initial_belief if initial_belief is not None else init_belief(observe(scenario, declared))
        interval_history.append(belief.interval)

    records: list[MoveRecord] = []
    passed: set[int] = set()  # proxies that passed since the last accepted move
    turn = 0
    stop = StopReason.MAX_STEPS
    limit_delta: float | None = None

    while True:
        if len(records) >= max_steps:
            stop = StopReason.MAX_STEPS
            break
        mover = scheduler.proxy_at(turn, scenario.num_proxies)
        turn += 1
        rec = step(scenario, declared, mover, policies[mover], records, belief, mode)
        if rec is None:
            passed.add(mover)
            if len(passed) == scenario.num_proxies:
                stop = StopReason.PNE
                break
            continue
        passed.clear()
        declared[mover] = rec.to_pos
        records.append(rec)
        if mode == "partial_info":
            assert belief is not None
            belief = update_belief(belief, rec, observe(scenario, declared))
            interval_history.append(belief.interval)
        if _detect_oscillation(records, oscillation_window):
            stop = StopReason.OSCILLATION_DETECTED
            limit_delta = records[-1].delta_after
            break

    return DynamicsTrace(
        scenario=scenario,
        initial_declared=(
            list(initial_declared) if initial_declared is not None else scenario.truthful_state()
        ),
        records=records,
        final_declared=declared,
        stop_reason=stop,
        limit_delta=limit_delta,
        interval_history=interval_history,
    )


# ---------------------------------------------------------------------------
# trace analysis


def detect_meta_moves(trace: DynamicsTrace) -> list[MetaSegment]:
    """Maximal runs of consecutive winning moves by one proxy.

    A segment starts where a non-winner's move makes it the winner;
    its length counts only the continuation moves that follow.
    """
    records = trace.records
    base = delta(trace.scenario, trace.initial_declared)
    segments = []
    i = 0
    while i < len(records):
        rec = records[i]
        if rec.mover != rec.winner_before and rec.winner_after == rec.mover:
            j = i + 1
            while (
                j < len(records)
                and records[j].mover == rec.mover
                and records[j].winner_after == rec.mover
            ):
                j += 1
            entry = records[i - 1].delta_after if i > 0 else base
            segments.append(
                MetaSegment(
                    start=i,
                    length=j - i - 1,
                    mover=rec.mover,
                    entry_delta=entry,
                    exit_delta=records[j - 1].delta_after,
                )
            )
            i = j
        else:
            i += 1
    return segments


@dataclass(frozen=True)
class MetaStepLabel:
    start: int
    length: int
    entry_delta: float
    exit_delta: float
    big: bool


def classify_meta_steps(trace: DynamicsTrace, alpha: float) -> list[MetaStepLabel]:
    """Label every meta-move and lone move Big/Small at contraction rate alpha."""
    if not 0 < alpha < 1:
        raise ConfigurationError("alpha must be in (0, 1)")
    base = delta(trace.scenario, trace.initial_declared)
    segments = {seg.start: seg for seg in detect_meta_moves(trace)}
    labels = []
    i = 0
    records = trace.records
    while i < len(records):
        if i in segments:
            seg = segments[i]
            labels.append(
                MetaStepLabel(
                    seg.start, seg.length, seg.entry_delta, seg.exit_delta,
                    big=seg.exit_delta < alpha * seg.entry_delta,
                )
            )
            i += seg.length + 1
        else:
            entry = records[i - 1].delta_after if i > 0 else base
            exit_ = records[i].delta_after
            labels.append(MetaStepLabel(i, 0, entry, exit_, big=exit_ < alpha * entry))
            i += 1
    return labels


def check_bound_invariant(trace: DynamicsTrace, tol: float = 1e-9) -> bool:
    """Medians and outcomes stay within the truthful Δ-ball around the
    true median, and no mover ever declares across the far bound."""
    scenario = trace.scenario
    med0 = true_median(scenario)
    dlt0 = delta(scenario, scenario.truthful_state())
    lo, hi = med0 - dlt0 - tol, med0 + dlt0 + tol
    for rec in trace.records:
        if not lo <= rec.median_after <= hi:
            return False
        if not lo <= rec.wm_after <= hi:
            return False
        peak = scenario.proxy_peaks[rec.mover]
        if peak < med0 and rec.to_pos > hi:
            return False
        if peak > med0 and rec.to_pos < lo:
            return False
        if peak == med0 and not lo <= rec.to_pos <= hi:
            return False
    return True


def monotone_median_check(trace: DynamicsTrace) -> bool:
    """True iff the unweighted median never moves along the trace."""
    med0 = unweighted_median(trace.scenario, trace.initial_declared)
    return all(rec.median_after == med0 for rec in trace.records)


def trace_is_monotone(trace: DynamicsTrace) -> bool:
    """Every move stays on the mover's own side of the true median."""
    med0 = true_median(trace.scenario)
    if not monotone_median_check(trace):
        return False
    for rec in trace.records:
        peak = trace.scenario.proxy_peaks[rec.mover]
        if peak < med0 and rec.to_pos > med0:
            return False
        if peak > med0 and rec.to_pos < med0:
            return False
    return True


def replay_consistent(trace: DynamicsTrace) -> bool:
    """Recompute every derived field of a trace from scratch."""
    declared = list(trace.initial_declared)
    for rec in trace.records:
        wb, wmb = wm_winner(trace.scenario, declared)
        if (wb, wmb) != (rec.winner_before, rec.wm_before):
            return False
        if declared[rec.mover] != rec.from_pos:
            return False
        declared[rec.mover] = rec.to_pos
        wa, wma = wm_winner(trace.scenario, declared)
        med = unweighted_median(trace.scenario, declared)
        if (wa, wma) != (rec.winner_after, rec.wm_after):
            return False
        if med != rec.median_after or abs(med - wma) != rec.delta_after:
            return False
    return declared == trace.final_declared
