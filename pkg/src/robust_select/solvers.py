"""Selection algorithms.

The headline solver, ``saturate_robust``, maximizes the worst agent's value
under a matroid constraint by bisecting on a saturation level gamma: at each
gamma it greedily maximizes the truncated-average surrogate with a descending
acceptance threshold (no per-step argmax scans), keeps the candidate set when
its surrogate value clears gamma / (1 + c + delta), and tightens the bisection
bracket accordingly. Baselines (`simple_greedy`, `ratio_greedy_baseline`) and
exhaustive oracles (`brute_force_maxmin`, `brute_force_surrogate_max`) share
the same scenario/matroid types so benchmark trials stay paired.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Iterator

from .matroid import Matroid
from .scenario import EvaluationCounter, Scenario, min_objective
from .surrogate import MinObjectiveOracle, SurrogateOracle

# Exhaustive enumeration of independent sets; refuse beyond this many actions.
BRUTE_FORCE_CAP = 20


@dataclass(frozen=True)
class SolverParams:
    """Solver tunables.

    delta: threshold shrink factor for the inner greedy (> 0).
    epsilon: absolute bisection stopping gap; None means one thousandth of
        the instance's initial upper bound.
    curvature: the c value used in the saturation acceptance test
        value >= gamma / (1 + c + delta). 1.0 is always safe; smaller values
        tighten the test and are only sound when they bound the surrogate's
        true curvature.
    """

    delta: float = 1e-3
    epsilon: float | None = None
    curvature: float = 1.0

    def __post_init__(self) -> None:
        if not (isinstance(self.delta, (int, float)) and math.isfinite(self.delta) and self.delta > 0):
            raise ValueError(f"delta must be finite and > 0, got {self.delta!r}")
        if self.epsilon is not None and not (
            isinstance(self.epsilon, (int, float)) and math.isfinite(self.epsilon) and self.epsilon > 0
        ):
            raise ValueError(f"epsilon must be finite and > 0, got {self.epsilon!r}")
        if not (
            isinstance(self.curvature, (int, float))
            and math.isfinite(self.curvature)
            and 0.0 <= self.curvature <= 1.0
        ):
            raise ValueError(f"curvature must lie in [0, 1], got {self.curvature!r}")


@dataclass(frozen=True)
class Solution:
    """One solver run: the selected action ids (ascending), the worst agent's
    value of that set recomputed fresh, and the run's cost accounting."""

    algorithm: str
    selected: tuple[int, ...]
    min_value: float
    individual_evals: int
    f_evaluations: float
    wall_time_s: float
    params: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "selected": list(self.selected),
            "min_value": self.min_value,
            "evaluations": self.f_evaluations,
            "wall_time_ms": self.wall_time_s * 1000.0,
            "params": dict(self.params),
        }


@dataclass(frozen=True)
class GreedyStep:
    """One accepted element in a threshold-greedy run: the acceptance
    threshold in force, the element, its gain, and the set it was added to."""

    threshold: float
    element: int
    gain: float
    base: frozenset


def threshold_greedy(
    oracle,
    matroid: Matroid,
    delta: float,
    trace: list | None = None,
    stats: dict | None = None,
) -> set[int]:
    """Maximize a monotone submodular oracle under a matroid constraint with
    a descending acceptance threshold.

    The threshold starts at the best singleton value F and shrinks by
    1/(1+delta) per pass; each pass scans the non-selected elements in
    ascending id order and immediately inserts any feasible element whose
    (freshly evaluated) marginal gain clears the threshold. The loop ends
    when the selection is a basis or the threshold falls below delta * F.

    A pass that inserts nothing cannot change any gain, so instead of
    rescanning at every intermediate threshold the loop replays the division
    sequence down to the largest surviving gain (or termination). The output
    and the per-candidate evaluations are exactly those of the literal
    pass-by-pass loop; only the no-op rescans are skipped.

    ``trace`` (optional list) receives a GreedyStep per insertion;
    ``stats`` (optional dict) receives scan-pass and threshold bookkeeping.
    """
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta!r}")
    n = matroid.n_actions
    selected: set[int] = set()
    passes = 0
    initial = 0.0
    threshold = 0.0
    if n > 0:
        empty = frozenset()
        for e in range(n):
            gain = oracle.marginal_gain(empty, e)
            if gain > initial:
                initial = gain
        threshold = initial
        floor = delta * initial
        while initial > 0 and threshold >= floor and not matroid.is_basis(selected):
            passes += 1
            inserted = False
            best_remaining = 0.0
            for e in range(n):
                if e in selected or not matroid.can_extend(selected, e):
                    continue
                gain = oracle.marginal_gain(frozenset(selected), e)
                if gain >= threshold:
                    if trace is not None:
                        trace.append(GreedyStep(threshold, e, gain, frozenset(selected)))
                    selected.add(e)
                    inserted = True
                elif gain > best_remaining:
                    best_remaining = gain
            if inserted:
                threshold /= 1.0 + delta
            elif best_remaining > 0.0:
                while threshold >= floor and threshold > best_remaining:
                    threshold /= 1.0 + delta
            else:
                break
    if stats is not None:
        stats["passes"] = passes
        stats["initial_threshold"] = initial
        stats["final_threshold"] = threshold
    return selected


def saturate_robust(
    scenario: Scenario,
    params: SolverParams | None = None,
    bisection_trace: list | None = None,
) -> Solution:
    """Bisection on the saturation level around the threshold greedy.

    The bracket starts at [0, worst agent's value of the full ground set].
    Each iteration probes the midpoint gamma with a fresh surrogate (no value
    reuse across gammas, so evaluation counts stay honest), keeps the greedy
    set as the incumbent when its surrogate value reaches
    gamma / (1 + curvature + delta), and halves the bracket until its width
    is at most epsilon. The incumbent's worst-agent value is guaranteed to be
    within a 1/(1 + curvature + delta) factor of the optimum, minus epsilon.

    ``bisection_trace`` (optional list) receives the (lower, upper) bracket
    after every iteration.
    """
    if params is None:
        params = SolverParams()
    started = time.perf_counter()
    counter = EvaluationCounter()
    everything = frozenset(range(scenario.n_actions))
    upper_init = min_objective(scenario, everything, counter)
    lower, upper = 0.0, upper_init
    epsilon = params.epsilon if params.epsilon is not None else 1e-3 * upper_init
    divisor = 1.0 + params.curvature + params.delta
    best: set[int] = set()
    iterations = 0
    if upper_init > 0.0:
        while upper - lower > epsilon:
            gamma = 0.5 * (upper + lower)
            oracle = SurrogateOracle(scenario, gamma, counter)
            candidate = threshold_greedy(oracle, scenario.matroid, params.delta)
            if oracle.evaluate(candidate) < gamma / divisor:
                upper = gamma
            else:
                lower = gamma
                best = candidate
            iterations += 1
            if bisection_trace is not None:
                bisection_trace.append((lower, upper))
    value = min_objective(scenario, best, counter)
    return Solution(
        algorithm="fast",
        selected=tuple(sorted(best)),
        min_value=value,
        individual_evals=counter.individual_evals,
        f_evaluations=counter.f_equivalent(scenario.n_agents),
        wall_time_s=time.perf_counter() - started,
        params={
            "delta": params.delta,
            "epsilon": epsilon,
            "curvature": params.curvature,
            "lower": lower,
            "upper": upper,
            "iterations": iterations,
        },
    )


def simple_greedy(scenario: Scenario, gamma: float | None = None) -> Solution:
    """Conventional greedy: repeatedly add the feasible element of maximum
    marginal gain (lowest id on ties) until the selection is a basis or no
    gain is positive. Runs on the truncated-average surrogate when ``gamma``
    is given, otherwise directly on the worst-agent objective."""
    started = time.perf_counter()
    counter = EvaluationCounter()
    if gamma is None:
        oracle = MinObjectiveOracle(scenario, counter)
    else:
        oracle = SurrogateOracle(scenario, gamma, counter)
    matroid = scenario.matroid
    n = scenario.n_actions
    selected: set[int] = set()
    while not matroid.is_basis(selected):
        best_element = None
        best_gain = 0.0
        base = frozenset(selected)
        for e in range(n):
            if e in selected or not matroid.can_extend(selected, e):
                continue
            gain = oracle.marginal_gain(base, e)
            if gain > best_gain:
                best_element, best_gain = e, gain
        if best_element is None:
            break
        selected.add(best_element)
    value = min_objective(scenario, selected, counter)
    return Solution(
        algorithm="greedy",
        selected=tuple(sorted(selected)),
        min_value=value,
        individual_evals=counter.individual_evals,
        f_evaluations=counter.f_equivalent(scenario.n_agents),
        wall_time_s=time.perf_counter() - started,
        params={"gamma": gamma},
    )


def ratio_greedy_baseline(scenario: Scenario) -> Solution:
    """Ratio-based greedy baseline (reconstruction).

    Each round scores every feasible candidate by the worst, over agents, of
    the candidate's contribution to that agent normalized by the best
    contribution the agent could still get from the feasible pool, and adds
    the highest-scoring candidate (lowest id on ties). Under a
    largest-distance objective an action's contribution to an agent is its
    distance to that agent, so scores stay positive and rounds normally run
    until the selection is a basis; they also stop if every score is zero
    (0/0 counts as 0).

    The normalizer is re-derived by scanning the whole feasible pool for
    every (candidate, agent) score evaluation, and every per-agent
    contribution computed that way is charged to the counter. That full-scan
    cost profile, dominated by re-finding each agent's maximum available
    contribution over and over, is the baseline the fast solver's
    evaluation counts are judged against.
    """
    started = time.perf_counter()
    counter = EvaluationCounter()
    matroid = scenario.matroid
    n = scenario.n_actions
    n_agents = scenario.n_agents
    distances = scenario.distances
    selected: set[int] = set()
    while True:
        feasible = [e for e in range(n) if e not in selected and matroid.can_extend(selected, e)]
        if not feasible:
            break
        best_element = None
        best_score = 0.0
        for e in feasible:
            score = math.inf
            for i in range(n_agents):
                row = distances[i]
                counter.add(1)
                contribution = row[e]
                normalizer = 0.0
                for other in feasible:
                    counter.add(1)
                    if row[other] > normalizer:
                        normalizer = row[other]
                ratio = 0.0 if normalizer <= 0.0 else contribution / normalizer
                if ratio < score:
                    score = ratio
            if score > best_score:
                best_element, best_score = e, score
        if best_element is None:
            break
        selected.add(best_element)
    value = min_objective(scenario, selected, counter)
    return Solution(
        algorithm="ratio",
        selected=tuple(sorted(selected)),
        min_value=value,
        individual_evals=counter.individual_evals,
        f_evaluations=counter.f_equivalent(scenario.n_agents),
        wall_time_s=time.perf_counter() - started,
        params={},
    )


def iter_independent_sets(matroid: Matroid) -> Iterator[frozenset]:
    """Every independent set, exactly once, in ascending-prefix order.
    Relies on downward closure: any independent set is reachable by adding
    its elements in ascending order through independent prefixes."""
    n = matroid.n_actions

    def grow(prefix: list[int], start: int) -> Iterator[frozenset]:
        yield frozenset(prefix)
        for e in range(start, n):
            if matroid.can_extend(prefix, e):
                prefix.append(e)
                yield from grow(prefix, e + 1)
                prefix.pop()

    yield from grow([], 0)


def _improves(value: float, selected: tuple[int, ...], best_value: float, best_selected: tuple[int, ...]) -> bool:
    # Tie order: higher value, then fewer elements, then lexicographic ids.
    if value != best_value:
        return value > best_value
    if len(selected) != len(best_selected):
        return len(selected) < len(best_selected)
    return selected < best_selected


def brute_force_maxmin(scenario: Scenario) -> Solution:
    """Exact max-min reference: enumerate every independent set and keep the
    one with the best worst-agent value (ties: fewer elements, then
    lexicographic ids). Exponential; refuses more than BRUTE_FORCE_CAP
    actions."""
    if scenario.n_actions > BRUTE_FORCE_CAP:
        raise ValueError(
            f"brute force limited to instances with <= {BRUTE_FORCE_CAP} actions, got {scenario.n_actions}"
        )
    started = time.perf_counter()
    counter = EvaluationCounter()
    best_selected = ()
    best_value = -math.inf
    for subset in iter_independent_sets(scenario.matroid):
        value = min_objective(scenario, subset, counter)
        ordered = tuple(sorted(subset))
        if _improves(value, ordered, best_value, best_selected):
            best_value, best_selected = value, ordered
    return Solution(
        algorithm="brute",
        selected=best_selected,
        min_value=best_value,
        individual_evals=counter.individual_evals,
        f_evaluations=counter.f_equivalent(scenario.n_agents),
        wall_time_s=time.perf_counter() - started,
        params={},
    )


def brute_force_surrogate_max(oracle, matroid: Matroid) -> frozenset:
    """Exact surrogate reference: the independent set maximizing the oracle,
    with the same tie order as ``brute_force_maxmin``."""
    if matroid.n_actions > BRUTE_FORCE_CAP:
        raise ValueError(
            f"brute force limited to instances with <= {BRUTE_FORCE_CAP} actions, got {matroid.n_actions}"
        )
    best_selected: tuple[int, ...] = ()
    best_value = -math.inf
    for subset in iter_independent_sets(matroid):
        value = oracle.evaluate(subset)
        ordered = tuple(sorted(subset))
        if _improves(value, ordered, best_value, best_selected):
            best_value, best_selected = value, ordered
    return frozenset(best_selected)
