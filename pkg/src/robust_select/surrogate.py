"""Set-function oracles over a scenario.

``SurrogateOracle`` is the truncated-average objective used by the saturating
solver: the mean over agents of min(agent value, gamma). Capping each agent at
gamma makes the average monotone and submodular even though the plain minimum
over agents is not, and the cap is exactly what the outer bisection searches.

``MinObjectiveOracle`` wraps the raw worst-agent objective behind the same
interface so baselines can greedily optimize it directly.

Caching and accounting contract shared by both:

* every logical evaluation of the reduced objective charges one count per
  agent, even when the result is known trivially (gamma == 0);
* ``marginal_gain`` keeps the last base set pinned, so scanning many
  candidates against one base pays a single new evaluation per candidate;
* cached and from-scratch paths agree bit for bit: per-agent values are
  running maxima of distances (exact in IEEE arithmetic) and both paths
  reduce them in agent order with identical code.
"""

from __future__ import annotations

import math
import warnings
from typing import Iterable

from .scenario import EvaluationCounter, Scenario

# Curvature needs f on the full set minus each element; refuse huge grounds.
CURVATURE_GROUND_CAP = 20

# Clamps beyond this are reported; below it they are floating-point dust.
_CLAMP_TOL = 1e-9

_CacheSlot = tuple[frozenset, tuple, float]


class _ProximityOracleBase:
    """Evaluation machinery shared by the surrogate and min oracles."""

    def __init__(self, scenario: Scenario, counter: EvaluationCounter | None = None) -> None:
        self.scenario = scenario
        self.counter = EvaluationCounter() if counter is None else counter
        self._base: _CacheSlot | None = None
        self._ext: _CacheSlot | None = None

    # -- subclass hook -------------------------------------------------
    def _reduce(self, agent_values: tuple[float, ...]) -> float:
        raise NotImplementedError

    # -- shared machinery ----------------------------------------------
    def _charge(self) -> None:
        self.counter.add(self.scenario.n_agents)

    def _agent_values(self, subset: frozenset) -> tuple[float, ...]:
        values = []
        for row in self.scenario.distances:
            best = 0.0
            for j in subset:
                if row[j] > best:
                    best = row[j]
            values.append(best)
        return tuple(values)

    def _cached(self, subset: frozenset) -> _CacheSlot | None:
        for slot in (self._base, self._ext):
            if slot is not None and slot[0] == subset:
                return slot
        return None

    def evaluate(self, subset: Iterable[int]) -> float:
        chosen = frozenset(subset)
        self._charge()
        hit = self._cached(chosen)
        if hit is not None:
            return hit[2]
        values = self._agent_values(chosen)
        out = self._reduce(values)
        self._base = (chosen, values, out)
        return out

    def marginal_gain(self, subset: Iterable[int], element: int) -> float:
        """Value of adding ``element`` to ``subset``; 0 when already present.

        The base set's evaluation is reused from the pinned cache when it
        matches, costing only the one new evaluation of the extended set.
        """
        chosen = frozenset(subset)
        if element in chosen:
            return 0.0
        base = self._cached(chosen)
        if base is None:
            self._charge()
            values = self._agent_values(chosen)
            base = (chosen, values, self._reduce(values))
        self._base = base
        row_index = element
        ext_values = tuple(
            max(v, row[row_index]) for v, row in zip(base[1], self.scenario.distances)
        )
        self._charge()
        ext_value = self._reduce(ext_values)
        self._ext = (chosen | {element}, ext_values, ext_value)
        return ext_value - base[2]


class SurrogateOracle(_ProximityOracleBase):
    """Truncated-average surrogate at saturation level ``gamma``.

    Values lie in [0, gamma]; the empty set evaluates to 0; equality with
    gamma means every agent is saturated. gamma == 0 short-circuits to 0
    without touching the per-agent objectives but still pays the standard
    charge so evaluation counts stay comparable.
    """

    def __init__(
        self,
        scenario: Scenario,
        gamma: float,
        counter: EvaluationCounter | None = None,
    ) -> None:
        if not isinstance(gamma, (int, float)) or not math.isfinite(gamma) or gamma < 0:
            raise ValueError(f"gamma must be finite and >= 0, got {gamma!r}")
        super().__init__(scenario, counter)
        self.gamma = float(gamma)

    def _reduce(self, agent_values: tuple[float, ...]) -> float:
        g = self.gamma
        total = 0.0
        for v in agent_values:
            total += min(v, g)
        return total / len(agent_values)

    def evaluate(self, subset: Iterable[int]) -> float:
        if self.gamma == 0.0:
            self._charge()
            return 0.0
        return super().evaluate(subset)

    def marginal_gain(self, subset: Iterable[int], element: int) -> float:
        if self.gamma == 0.0:
            if element in frozenset(subset):
                return 0.0
            self._charge()
            return 0.0
        return super().marginal_gain(subset, element)


class MinObjectiveOracle(_ProximityOracleBase):
    """The raw worst-agent objective behind the oracle interface. Monotone
    but not submodular; useful for direct greedy baselines and reporting."""

    def _reduce(self, agent_values: tuple[float, ...]) -> float:
        return min(agent_values)


def compute_curvature(oracle, ground: Iterable[int]) -> float:
    """Curvature in [0, 1] of the monotone set function behind ``oracle``
    over the given ground ids: one minus the worst ratio of an element's
    marginal value at the full set to its singleton value, taken over
    elements with positive singleton value. A function with no positive
    singleton is flat; its curvature is defined as 0 here.

    Results are clamped to [0, 1]; clamps beyond floating-point dust raise
    a RuntimeWarning (the oracle is probably not monotone submodular).
    """
    ids = sorted(set(ground))
    if len(ids) > CURVATURE_GROUND_CAP:
        raise ValueError(
            f"curvature computation limited to ground sets of size <= {CURVATURE_GROUND_CAP}, got {len(ids)}"
        )
    full = frozenset(ids)
    f_full = oracle.evaluate(full)
    worst_ratio = None
    for a in ids:
        f_single = oracle.evaluate(frozenset((a,)))
        if f_single <= 0.0:
            continue
        ratio = (f_full - oracle.evaluate(full - {a})) / f_single
        if worst_ratio is None or ratio < worst_ratio:
            worst_ratio = ratio
    if worst_ratio is None:
        return 0.0
    raw = 1.0 - worst_ratio
    if raw < -_CLAMP_TOL or raw > 1.0 + _CLAMP_TOL:
        warnings.warn(
            f"curvature {raw!r} outside [0, 1]; clamped. Is the oracle monotone submodular?",
            RuntimeWarning,
            stacklevel=2,
        )
    return min(1.0, max(0.0, raw))
