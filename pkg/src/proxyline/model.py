"""Ground-truth types, Tullock delegation, and the weighted-median rule.

Proxy ids are 0-based throughout the API; the CLI adds 1 when reporting.
All functions here are pure and deterministic: ties are broken by fixed
rules carried in :class:`TieBreakRule`, never by randomness or history.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import EmptyElectorateError, ScenarioValidationError


class DelegationTie(enum.Enum):
    """Tie rule for a follower equidistant from two proxies."""

    LOWER_PROXY_INDEX = "lower_proxy_index"


class WmTie(enum.Enum):
    """Tie rule among qualifying weighted-median elements."""

    POSITION_THEN_INDEX = "position_then_index"


@dataclass(frozen=True)
class TieBreakRule:
    delegation_tie: DelegationTie = DelegationTie.LOWER_PROXY_INDEX
    wm_tie: WmTie = WmTie.POSITION_THEN_INDEX


class SpaceKind(enum.Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


@dataclass(frozen=True)
class Space:
    kind: SpaceKind = SpaceKind.CONTINUOUS
    step: float = 1.0

    @staticmethod
    def continuous() -> "Space":
        return Space(SpaceKind.CONTINUOUS)

    @staticmethod
    def discrete(step: float = 1.0) -> "Space":
        if step <= 0:
            raise ScenarioValidationError("space.step", "step must be positive")
        return Space(SpaceKind.DISCRETE, step)

    @property
    def is_discrete(self) -> bool:
        return self.kind == SpaceKind.DISCRETE

    def on_grid(self, x: float) -> bool:
        if not self.is_discrete:
            return True
        q = x / self.step
        return abs(q - round(q)) <= 1e-9

    def snap_down(self, x: float) -> float:
        """Largest grid point <= x (identity in continuous space)."""
        if not self.is_discrete:
            return x
        return math.floor(x / self.step + 1e-9) * self.step


@dataclass(frozen=True)
class Scenario:
    """Immutable ground truth: peaks, follower positions, space, tie rules."""

    proxy_peaks: tuple[float, ...]
    follower_positions: tuple[float, ...] = ()
    space: Space = field(default_factory=Space.continuous)
    tie_break: TieBreakRule = field(default_factory=TieBreakRule)

    def __post_init__(self):
        object.__setattr__(self, "proxy_peaks", tuple(float(p) for p in self.proxy_peaks))
        object.__setattr__(
            self, "follower_positions", tuple(float(p) for p in self.follower_positions)
        )
        if not self.proxy_peaks:
            raise ScenarioValidationError("scenario.proxies", "at least one proxy required")
        if self.space.is_discrete:
            for i, p in enumerate(self.proxy_peaks):
                if not self.space.on_grid(p):
                    raise ScenarioValidationError(
                        f"scenario.proxies[{i}]", f"{p} is not a multiple of step {self.space.step}"
                    )
            for i, p in enumerate(self.follower_positions):
                if not self.space.on_grid(p):
                    raise ScenarioValidationError(
                        f"scenario.followers[{i}]",
                        f"{p} is not a multiple of step {self.space.step}",
                    )

    @property
    def num_proxies(self) -> int:
        return len(self.proxy_peaks)

    @property
    def num_followers(self) -> int:
        return len(self.follower_positions)

    def truthful_state(self) -> list[float]:
        return list(self.proxy_peaks)

    def all_positions(self) -> list[float]:
        return list(self.proxy_peaks) + list(self.follower_positions)

    def bounding_box(self) -> tuple[float, float]:
        """Generous scan box: population span padded by itself on each side."""
        pts = self.all_positions()
        lo, hi = min(pts), max(pts)
        span = max(hi - lo, 1.0)
        return lo - span, hi + span

    def with_space(self, space: Space) -> "Scenario":
        return Scenario(self.proxy_peaks, self.follower_positions, space, self.tie_break)

    def with_followers(self, followers: tuple[float, ...]) -> "Scenario":
        return Scenario(self.proxy_peaks, followers, self.space, self.tie_break)


def _check_state(scenario: Scenario, declared: list[float]) -> None:
    if len(declared) != scenario.num_proxies:
        raise ScenarioValidationError(
            "state", f"expected {scenario.num_proxies} declared positions, got {len(declared)}"
        )


def delegate(scenario: Scenario, declared: list[float]) -> list[int]:
    """Map each follower to its nearest declared proxy (Tullock delegation).

    Exact distance ties go to the lower proxy index.
    """
    _check_state(scenario, declared)
    out = []
    for fp in scenario.follower_positions:
        best_j, best_d = 0, abs(declared[0] - fp)
        for j in range(1, len(declared)):
            d = abs(declared[j] - fp)
            if d < best_d:
                best_j, best_d = j, d
        out.append(best_j)
    return out


def weighted_median(
    values: list[float],
    weights: list[float],
    tie_break: TieBreakRule | None = None,
) -> tuple[int, float]:
    """Weighted median element of ``values``.

    Returns the (index, value) of an element whose strictly-smaller
    complement weight and strictly-larger complement weight are each at
    most half the total. Among qualifying elements the smallest
    (value, index) pair wins.
    """
    if not values:
        raise EmptyElectorateError("empty electorate")
    if len(values) != len(weights):
        raise ValueError("values and weights must have equal length")
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be positive")
    total = sum(weights)
    order = sorted(range(len(values)), key=lambda i: (values[i], i))
    # prefix[k] = weight of elements sorted strictly before rank k
    below = 0.0
    best: tuple[float, int] | None = None
    k = 0
    n = len(order)
    while k < n:
        v = values[order[k]]
        run = [order[k]]
        w_run = weights[order[k]]
        k += 1
        while k < n and values[order[k]] == v:
            run.append(order[k])
            w_run += weights[order[k]]
            k += 1
        above = total - below - w_run
        # each element of the run shares the same strict-complement sums,
        # except that equal-valued siblings never count as strictly smaller
        if below <= total / 2 and above <= total / 2:
            idx = min(run)
            if best is None or (v, idx) < best:
                best = (v, idx)
        below += w_run
    if best is None:  # unreachable: some element always qualifies
        raise EmptyElectorateError("no qualifying weighted-median element")
    return best[1], best[0]


def unweighted_median(scenario: Scenario, declared: list[float]) -> float:
    """Median of the combined multiset (declared proxies + followers).

    Even-sized multisets resolve to the lower of the two middle elements
    (that is what the position-first tie rule yields with unit weights).
    """
    _check_state(scenario, declared)
    pool = list(declared) + list(scenario.follower_positions)
    _, value = weighted_median(pool, [1.0] * len(pool), scenario.tie_break)
    return value


def delegation_weights(scenario: Scenario, declared: list[float]) -> list[float]:
    """w_j = (# followers delegating to j) + 1."""
    weights = [1.0] * scenario.num_proxies
    for j in delegate(scenario, declared):
        weights[j] += 1.0
    return weights


def wm_winner(scenario: Scenario, declared: list[float]) -> tuple[int, float]:
    """Winner under the weighted-median rule: (proxy id, winning position)."""
    _check_state(scenario, declared)
    weights = delegation_weights(scenario, declared)
    return weighted_median(declared, weights, scenario.tie_break)


def nearest_proxy_to_median(scenario: Scenario, declared: list[float]) -> int:
    """Winner via the median-voter route: nearest proxy to the full median.

    Distance ties resolve like a delegation tie (lower proxy index): an
    argmin tie here is exactly the median voter's delegation tie, which is
    what keeps this route identical to :func:`wm_winner`.
    """
    _check_state(scenario, declared)
    med = unweighted_median(scenario, declared)
    best_j, best_d = 0, abs(declared[0] - med)
    for j in range(1, len(declared)):
        d = abs(declared[j] - med)
        if d < best_d:
            best_j, best_d = j, d
    return best_j


class DeclaredState:
    """A declared position vector with lazily computed derived quantities."""

    def __init__(self, scenario: Scenario, declared: list[float]):
        _check_state(scenario, declared)
        self.scenario = scenario
        self.declared = list(declared)

    @property
    def assignment(self) -> list[int]:
        return delegate(self.scenario, self.declared)

    @property
    def weights(self) -> list[float]:
        return delegation_weights(self.scenario, self.declared)

    @property
    def winner_id(self) -> int:
        return wm_winner(self.scenario, self.declared)[0]

    @property
    def winner_position(self) -> float:
        return wm_winner(self.scenario, self.declared)[1]

    @property
    def median(self) -> float:
        return unweighted_median(self.scenario, self.declared)

    def replace(self, proxy_id: int, position: float) -> "DeclaredState":
        declared = list(self.declared)
        declared[proxy_id] = position
        return DeclaredState(self.scenario, declared)
