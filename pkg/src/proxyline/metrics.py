"""Outcome-quality measures: social cost and distance to the true median."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Scenario, unweighted_median, wm_winner


@dataclass(frozen=True)
class OutcomeReport:
    outcome: float
    distance_to_true_median: float
    social_cost: float


def social_cost(scenario: Scenario, outcome: float) -> float:
    """Sum of distances of all voters' TRUE positions to the outcome.

    Proxies count at their peaks, never at declared positions.
    """
    if not math.isfinite(outcome):
        raise ValueError("outcome must be finite")
    return sum(abs(p - outcome) for p in scenario.all_positions())


def delta(scenario: Scenario, declared: list[float]) -> float:
    """|unweighted median - weighted-median winner position| at a state."""
    med = unweighted_median(scenario, declared)
    _, wm = wm_winner(scenario, declared)
    return abs(med - wm)


def true_median(scenario: Scenario) -> float:
    """Median of the full truthful population."""
    return unweighted_median(scenario, scenario.truthful_state())


def outcome_report(scenario: Scenario, outcome: float) -> OutcomeReport:
    med = true_median(scenario)
    return OutcomeReport(
        outcome=outcome,
        distance_to_true_median=abs(outcome - med),
        social_cost=social_cost(scenario, outcome),
    )
