"""Partial information: winner-only polls, median intervals, regret play.

Only the declared positions and the winner's identity are public. The
median interval tracks every follower-median position consistent with the
announcements so far; dominating sets and the minimax-regret rule are
computed from that interval alone, never from hidden follower positions.

Interval bounds carry tie-aware closure flags: a midpoint median is
consistent exactly when the announced winner also wins the distance tie
there, which the fixed lower-index rule decides.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import InconsistentObservationError, SamplingBudgetError
from .intervals import INF, Interval, IntervalSet
from .model import Scenario, wm_winner


@dataclass(frozen=True)
class ObservedState:
    """Everything the winner-only poll reveals: (declared vector, winner)."""

    declared: tuple[float, ...]
    winner_id: int

    @property
    def winner_position(self) -> float:
        return self.declared[self.winner_id]


@dataclass(frozen=True)
class Neighbor:
    position: float
    proxy_id: int


@dataclass(frozen=True)
class BeliefState:
    observed: ObservedState
    interval: Interval
    left_neighbor: Neighbor | None
    right_neighbor: Neighbor | None

    @property
    def winner_position(self) -> float:
        return self.observed.winner_position


def observe(scenario: Scenario, declared: list[float]) -> ObservedState:
    """The winner-only poll: declared positions plus the winner's identity."""
    winner_id, _ = wm_winner(scenario, declared)
    return ObservedState(tuple(declared), winner_id)


def _neighbors(observed: ObservedState) -> tuple[Neighbor | None, Neighbor | None]:
    w = observed.winner_position
    left: Neighbor | None = None
    right: Neighbor | None = None
    for k, pos in enumerate(observed.declared):
        if pos < w and (left is None or pos > left.position):
            left = Neighbor(pos, k)
        if pos > w and (right is None or pos < right.position):
            right = Neighbor(pos, k)
    return left, right


def _midpoint_interval(observed: ObservedState) -> Interval:
    """Medians under which the announced winner really wins.

    Bounds sit at the midpoints toward the nearest declared neighbors; a
    bound is closed iff the winner also wins the exact-distance tie there
    (lower proxy index).
    """
    w = observed.winner_position
    wid = observed.winner_id
    left, right = _neighbors(observed)
    if left is None:
        lo, lo_open = -INF, True
    else:
        lo = (left.position + w) / 2.0
        lo_open = not wid < left.proxy_id
    if right is None:
        hi, hi_open = INF, True
    else:
        hi = (right.position + w) / 2.0
        hi_open = not wid < right.proxy_id
    return Interval(lo, hi, lo_open, hi_open)


def init_median_interval(observed: ObservedState) -> Interval:
    """The interval of consistent medians at the truthful first poll."""
    return _midpoint_interval(observed)


def init_belief(observed: ObservedState) -> BeliefState:
    left, right = _neighbors(observed)
    return BeliefState(observed, init_median_interval(observed), left, right)


def update_median_interval(
    belief: BeliefState,
    move,  # MoveRecord-like: .mover, .from_pos, .to_pos, .winner_before
    observed_after: ObservedState,
) -> Interval:
    """Shrink the median interval after one observed move.

    A mover that was not the reigning winner triggers the midpoint rule
    around the current (post-move) winner. A reigning winner that moved
    and kept winning reveals the median's side of its new position.
    """
    meta_move = (
        move.mover == move.winner_before and observed_after.winner_id == move.mover
    )
    if meta_move:
        if move.to_pos > move.from_pos:
            fresh = Interval(move.to_pos, INF, False, True)
        else:
            fresh = Interval(-INF, move.to_pos, True, False)
    else:
        fresh = _midpoint_interval(observed_after)
    new = belief.interval.intersect(fresh)
    if new is None:
        raise InconsistentObservationError(
            f"median interval became empty: {belief.interval} ∩ {fresh}"
        )
    return new


def update_belief(belief: BeliefState, move, observed_after: ObservedState) -> BeliefState:
    interval = update_median_interval(belief, move, observed_after)
    left, right = _neighbors(observed_after)
    return BeliefState(observed_after, interval, left, right)


def dominating_set_nonwinner(belief: BeliefState, proxy_id: int, peak: float) -> IntervalSet:
    """Strong-monotone dominating reports for a proxy that is not winning.

    Open interval between the winner and the farther of (nearest same-side
    neighbor, reflection of the relevant interval bound), additionally
    clamped at the reflection of the proxy's peak so a winning report can
    never land farther from the peak than the status quo.
    """
    if proxy_id == belief.observed.winner_id:
        raise ValueError("proxy is the current winner; use dominating_set_winner")
    w = belief.winner_position
    iv = belief.interval
    if peak <= w:
        ell = iv.lo
        if ell >= w:
            return IntervalSet.empty()
        parts = [w - 2.0 * abs(w - ell)]
        if belief.left_neighbor is not None:
            parts.append(belief.left_neighbor.position)
        lower = max(min(parts), 2.0 * peak - w)
        if lower >= w:
            return IntervalSet.empty()
        return IntervalSet([Interval(lower, w, True, True)])
    r = iv.hi
    if r <= w:
        return IntervalSet.empty()
    parts = [w + 2.0 * abs(r - w)]
    if belief.right_neighbor is not None:
        parts.append(belief.right_neighbor.position)
    upper = min(max(parts), 2.0 * peak - w)
    if upper <= w:
        return IntervalSet.empty()
    return IntervalSet([Interval(w, upper, True, True)])


def dominating_set_winner(belief: BeliefState, peak: float) -> IntervalSet:
    """Dominating meta-moves for the reigning winner.

    Nonempty only when the winner sits strictly between its peak and the
    median interval and the far-side neighbor is farther from the far
    bound than the winner is; the safe stretch is bounded by the
    reflection of that neighbor across the far bound.
    """
    w = belief.winner_position
    iv = belief.interval
    if peak < w < iv.lo:
        if belief.right_neighbor is None or not math.isfinite(iv.hi):
            return IntervalSet.empty()
        r, s_r = iv.hi, belief.right_neighbor.position
        if not abs(r - s_r) > abs(r - w):
            return IntervalSet.empty()
        lower = max(r - abs(r - s_r), 2.0 * peak - w)
        if lower >= w:
            return IntervalSet.empty()
        return IntervalSet([Interval(lower, w, True, True)])
    if peak > w > iv.hi:
        if belief.left_neighbor is None or not math.isfinite(iv.lo):
            return IntervalSet.empty()
        ell, s_l = iv.lo, belief.left_neighbor.position
        if not abs(ell - s_l) > abs(ell - w):
            return IntervalSet.empty()
        upper = min(ell + abs(ell - s_l), 2.0 * peak - w)
        if upper <= w:
            return IntervalSet.empty()
        return IntervalSet([Interval(w, upper, True, True)])
    return IntervalSet.empty()


def _max_regret_left(ell: float, w: float, interval: Interval, candidate: float) -> float:
    """Worst-case regret for a proxy with peak left of the winner."""
    if not math.isfinite(ell):
        return INF
    g = abs(w - ell)
    if candidate <= ell - g:
        return 2.0 * g
    if candidate >= w:
        return 2.0 * g
    # interior: sup over medians m in the interval; for m >= w regret is 0,
    # for m < w the ex-post optimum is 2m - w and the regret is piecewise
    # linear and decreasing in m on both branches.
    sup = 0.0
    mid = (candidate + w) / 2.0
    lo = interval.lo
    if not math.isfinite(lo):
        return INF
    if lo < mid:  # medians where the report wins: regret = report - optimum
        sup = max(sup, candidate + w - 2.0 * lo)
    seg_b_lo = max(lo, mid)
    b_nonempty = (
        interval.hi > mid or (interval.hi == mid and not interval.hi_open)
    ) and seg_b_lo < w
    if b_nonempty:  # medians where the outcome stays put: regret = winner - optimum
        sup = max(sup, 2.0 * (w - seg_b_lo))
    return sup


def max_regret(belief: BeliefState, proxy_id: int, candidate: float, peak: float) -> float:
    """Maximal ex-post regret of a report, over all consistent medians."""
    if not math.isfinite(candidate):
        raise ValueError("candidate must be finite")
    if proxy_id == belief.observed.winner_id:
        raise ValueError("max_regret is defined for non-winning proxies")
    w = belief.winner_position
    iv = belief.interval
    if peak <= w:
        return _max_regret_left(iv.lo, w, iv, candidate)
    # mirror the right-peaked case through the winner position
    mirrored = Interval(2 * w - iv.hi, 2 * w - iv.lo, iv.hi_open, iv.lo_open)
    return _max_regret_left(2 * w - iv.hi, w, mirrored, 2 * w - candidate)


@dataclass(frozen=True)
class MinimaxDecision:
    argmin: IntervalSet
    chosen: float


def minimax_regret_strategy(belief: BeliefState, proxy_id: int, peak: float) -> MinimaxDecision:
    """Report minimizing worst-case regret over the median interval.

    The reigning winner stays put (at its peak this is optimal outright;
    off-peak any move risks handing the win to a worse position). A
    non-winner moves to the relevant interval bound, or keeps its report
    when the whole far half-line is regret-free.
    """
    declared = belief.observed.declared[proxy_id]
    if proxy_id == belief.observed.winner_id:
        return MinimaxDecision(IntervalSet([Interval.point(declared)]), declared)
    w = belief.winner_position
    iv = belief.interval
    if peak == w:
        return MinimaxDecision(IntervalSet([Interval.point(declared)]), declared)
    bound = iv.lo if peak < w else iv.hi
    if not math.isfinite(bound):
        return MinimaxDecision(IntervalSet([Interval.point(declared)]), declared)
    g = abs(bound - w)
    if g > 0:
        return MinimaxDecision(IntervalSet([Interval.point(bound)]), bound)
    if peak < w:
        argmin = IntervalSet([Interval(-INF, bound, True, True)])
    else:
        argmin = IntervalSet([Interval(bound, INF, True, True)])
    chosen = declared if argmin.contains(declared) else bound
    return MinimaxDecision(argmin, chosen)


def sample_consistent_profile(
    observed: ObservedState,
    n: int,
    rng_seed: int,
    box: tuple[float, float] | None = None,
    budget: int = 20_000,
) -> tuple[float, ...]:
    """Rejection-sample follower positions reproducing the observed winner."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    declared = list(observed.declared)
    if box is None:
        lo, hi = min(declared), max(declared)
        span = max(hi - lo, 1.0)
        box = (lo - span, hi + span)
    rng = random.Random(rng_seed)
    probe = Scenario(proxy_peaks=tuple(declared))
    for _ in range(budget):
        followers = tuple(rng.uniform(box[0], box[1]) for _ in range(n))
        trial = probe.with_followers(followers)
        winner_id, _ = wm_winner(trial, declared)
        if winner_id == observed.winner_id:
            return followers
    raise SamplingBudgetError("no consistent profile found in budget")
