"""Problem instances: agent/action geometry, per-agent proximity objectives,
and the worst-case (minimum over agents) system objective.

Each agent values an action set by the largest distance from itself to any
selected action; the system is scored by its worst agent, which is exactly
what an attacker removing the best agent's contribution leaves behind.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from .matroid import Matroid, matroid_from_dict, matroid_to_dict


class Point2(NamedTuple):
    """A planar location."""

    x: float
    y: float


class EvaluationCounter:
    """Tally of objective evaluations: computing one agent's objective on one
    set counts 1. Divide by the agent count (``f_equivalent``) to compare
    algorithms that evaluate the averaged surrogate against ones that touch
    individual objectives directly. Counts never decrease."""

    __slots__ = ("individual_evals",)

    def __init__(self) -> None:
        self.individual_evals = 0

    def add(self, n: int = 1) -> None:
        if n < 0:
            raise ValueError("evaluation counts only grow")
        self.individual_evals += n

    def f_equivalent(self, n_agents: int) -> float:
        return self.individual_evals / n_agents

    def __repr__(self) -> str:
        return f"EvaluationCounter({self.individual_evals})"


@dataclass(frozen=True)
class Scenario:
    """Immutable problem instance: agent and action locations plus the
    selection constraint over action ids 0..M-1. Safe to share across
    threads; all mutable run state lives in per-run counters."""

    agents: tuple[Point2, ...]
    actions: tuple[Point2, ...]
    matroid: Matroid

    def __post_init__(self) -> None:
        if len(self.agents) < 1:
            raise ValueError("scenario needs at least one agent")
        for label, points in (("agents", self.agents), ("actions", self.actions)):
            for p in points:
                if not (math.isfinite(p.x) and math.isfinite(p.y)):
                    raise ValueError(f"scenario {label}: coordinates must be finite")
        if self.matroid.n_actions != len(self.actions):
            raise ValueError("matroid ground set size does not match the action count")

    @classmethod
    def from_coords(
        cls,
        agents: Iterable[tuple[float, float]],
        actions: Iterable[tuple[float, float]],
        matroid: Matroid,
    ) -> "Scenario":
        return cls(
            agents=tuple(Point2(float(x), float(y)) for x, y in agents),
            actions=tuple(Point2(float(x), float(y)) for x, y in actions),
            matroid=matroid,
        )

    @property
    def n_agents(self) -> int:
        return len(self.agents)

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    @cached_property
    def distances(self) -> tuple[tuple[float, ...], ...]:
        """Agent-to-action distance matrix, one row per agent."""
        return tuple(
            tuple(euclidean_distance(a, p) for p in self.actions) for a in self.agents
        )


def euclidean_distance(p: Point2, q: Point2) -> float:
    return math.dist(p, q)


def proximity_objective(
    scenario: Scenario,
    agent: int,
    subset: Iterable[int],
    counter: EvaluationCounter | None = None,
) -> float:
    """Agent ``agent``'s value of ``subset``: the largest distance from the
    agent to any selected action, 0 for the empty set."""
    if not 0 <= agent < scenario.n_agents:
        raise IndexError(f"agent index {agent} out of range [0, {scenario.n_agents})")
    if counter is not None:
        counter.add(1)
    row = scenario.distances[agent]
    n = scenario.n_actions
    best = 0.0
    for j in subset:
        if not 0 <= j < n:
            raise IndexError(f"action id {j} outside ground set [0, {n})")
        if row[j] > best:
            best = row[j]
    return best


def min_objective(
    scenario: Scenario,
    subset: Iterable[int],
    counter: EvaluationCounter | None = None,
) -> float:
    """Worst agent's value of ``subset``; evaluates every agent."""
    chosen = frozenset(subset)
    return min(
        proximity_objective(scenario, i, chosen, counter)
        for i in range(scenario.n_agents)
    )


def worst_case_attack(
    scenario: Scenario,
    subset: Iterable[int],
    counter: EvaluationCounter | None = None,
) -> tuple[int, float]:
    """The agent an optimal attacker reduces the system to, with its value:
    (argmin over agents, min over agents). Ties go to the lowest index."""
    chosen = frozenset(subset)
    worst_agent = 0
    worst_value = proximity_objective(scenario, 0, chosen, counter)
    for i in range(1, scenario.n_agents):
        value = proximity_objective(scenario, i, chosen, counter)
        if value < worst_value:
            worst_agent, worst_value = i, value
    return worst_agent, worst_value


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "agents": [[p.x, p.y] for p in scenario.agents],
        "actions": [[p.x, p.y] for p in scenario.actions],
        "matroid": matroid_to_dict(scenario.matroid),
    }


def scenario_from_dict(data: object) -> Scenario:
    if not isinstance(data, dict):
        raise ValueError("scenario config: top level must be an object")
    agents = _coord_field(data, "agents", minimum=1)
    actions = _coord_field(data, "actions", minimum=0)
    if "matroid" not in data:
        raise ValueError("scenario config: field 'matroid' is missing")
    matroid = matroid_from_dict(data["matroid"], n_actions=len(actions))
    return Scenario(agents=agents, actions=actions, matroid=matroid)


def _coord_field(data: dict, name: str, minimum: int) -> tuple[Point2, ...]:
    if name not in data:
        raise ValueError(f"scenario config: field '{name}' is missing")
    raw = data[name]
    if not isinstance(raw, list) or len(raw) < minimum:
        raise ValueError(
            f"scenario config: field '{name}' must be a list of at least {minimum} [x, y] pairs"
        )
    points = []
    for entry in raw:
        ok = (
            isinstance(entry, (list, tuple))
            and len(entry) == 2
            and all(isinstance(c, (int, float)) and math.isfinite(c) for c in entry)
        )
        if not ok:
            raise ValueError(f"scenario config: field '{name}' must contain finite [x, y] pairs")
        points.append(Point2(float(entry[0]), float(entry[1])))
    return tuple(points)


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValueError(f"scenario config {path}: invalid JSON ({exc})") from None
    return scenario_from_dict(data)


def save_scenario(scenario: Scenario, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(scenario_to_dict(scenario), handle)
        handle.write("\n")
