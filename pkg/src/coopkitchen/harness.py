"""Scenario-based robustness tests: load suites, run seeded rollouts,
score success rates, and aggregate per-category reports.

A scenario pins a layout, a set of initial-state variants, a partner spec,
a success predicate, and a tick budget. Scoring runs a fixed number of
seeded rollouts per variant; the score is the fraction of successes. Child
seeds derive deterministically from (base seed, scenario id, variant,
rollout), so reports are reproducible and independent of parallelism.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from coopkitchen import __version__
from coopkitchen.core import (
    Layout,
    WorldState,
    bundled_layout,
    deserialize_state,
    serialize_state,
)
from coopkitchen.core.state import OBJECT_PLACED, SOUP_DELIVERED
from coopkitchen.policies import (
    PolicyError,
    PolicyHandle,
    describe_handle,
    parse_agent_spec,
    run_rollout,
    stable_seed,
)

CATEGORIES = ("SR", "AR", "AMR")

MEMORY_PARTNER_KINDS = ("stationary_after", "random_after")


class SchemaError(ValueError):
    pass


class InvalidStateSnapshot(ValueError):
    pass


class UnknownPartnerKind(ValueError):
    pass


class DuplicateId(ValueError):
    pass


PREDICATE_KINDS = (
    "delivered_within",
    "holds_object_within",
    "cell_vacated_within",
    "pot_contains_within",
    "counter_object_removed_within",
    "dropped_held_within",
    "reward_at_least_within",
)


@dataclass(frozen=True)
class SuccessPredicate:
    """Decidable success check over a rollout prefix of `ticks` steps."""

    kind: str
    ticks: int
    object: Optional[str] = None
    cell: Optional[tuple[int, int]] = None
    onions: Optional[int] = None
    points: Optional[int] = None

    def __post_init__(self):
        if self.kind not in PREDICATE_KINDS:
            raise SchemaError(f"unknown predicate kind {self.kind!r}")
        if self.ticks < 1:
            raise SchemaError("predicate ticks must be positive")
        needs = {
            "holds_object_within": ("object",),
            "cell_vacated_within": ("cell",),
            "pot_contains_within": ("cell", "onions"),
            "counter_object_removed_within": ("cell",),
            "reward_at_least_within": ("points",),
        }
        for attr in needs.get(self.kind, ()):
            if getattr(self, attr) is None:
                raise SchemaError(f"predicate {self.kind} needs {attr}")

    def to_dict(self) -> dict:
        data = {"kind": self.kind, "ticks": self.ticks}
        for key in ("object", "onions", "points"):
            if getattr(self, key) is not None:
                data[key] = getattr(self, key)
        if self.cell is not None:
            data["cell"] = list(self.cell)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "SuccessPredicate":
        try:
            return cls(
                kind=data["kind"],
                ticks=int(data["ticks"]),
                object=data.get("object"),
                cell=tuple(data["cell"]) if "cell" in data else None,
                onions=data.get("onions"),
                points=data.get("points"),
            )
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed predicate: {exc}") from None


class PredicateTracker:
    """Feeds rollout steps to a predicate and reports success as soon as it
    is decided."""

    def __init__(self, predicate: SuccessPredicate, tested_index: int, initial: WorldState):
        self.p = predicate
        self.i = tested_index
        self.reward_total = 0
        self.success = self._check_state(initial)

    def _check_state(self, state: WorldState) -> bool:
        p = self.p
        if p.kind == "holds_object_within":
            return state.players[self.i].held == p.object
        if p.kind == "cell_vacated_within":
            return state.players[self.i].position != p.cell
        if p.kind == "pot_contains_within":
            pot = state.pots.get(p.cell)
            return pot is not None and pot.onions >= p.onions
        if p.kind == "counter_object_removed_within":
            return p.cell not in state.counter_objects
        return False

    def observe(self, outcome, state_after: WorldState) -> bool:
        """Returns True once success is decided (never reverts)."""
        if self.success:
            return True
        p = self.p
        self.reward_total += outcome.reward
        if p.kind == "delivered_within":
            self.success = any(
                e.kind == SOUP_DELIVERED and e.player == self.i for e in outcome.events
            )
        elif p.kind == "dropped_held_within":
            self.success = any(
                e.kind == OBJECT_PLACED and e.player == self.i for e in outcome.events
            )
        elif p.kind == "reward_at_least_within":
            self.success = self.reward_total >= p.points
        else:
            self.success = self._check_state(state_after)
        return self.success


@dataclass(frozen=True)
class Scenario:
    id: str
    layout_name: str
    category: str
    tested_agent_index: int
    partner_spec: str
    predicate: SuccessPredicate
    horizon: int
    variants: tuple[str, ...]  # canonical state snapshots
    rollouts_per_variant: int = 50
    layout_grid: Optional[tuple[str, ...]] = None  # embedded for non-bundled layouts

    def layout(self) -> Layout:
        if self.layout_grid is not None:
            from coopkitchen.core import parse_layout

            return parse_layout("\n".join(self.layout_grid), name=self.layout_name)
        return bundled_layout(self.layout_name)

    def validate(self) -> list[str]:
        """Full schema check; returns non-fatal warnings."""
        if self.category not in CATEGORIES:
            raise SchemaError(f"{self.id}: unknown category {self.category!r}")
        if not self.variants:
            raise SchemaError(f"{self.id}: empty variants list")
        if self.tested_agent_index not in (0, 1):
            raise SchemaError(f"{self.id}: tested_agent_index must be 0 or 1")
        if self.horizon < 1 or self.rollouts_per_variant < 1:
            raise SchemaError(f"{self.id}: horizon and rollouts must be positive")
        if self.predicate.ticks > self.horizon:
            raise SchemaError(
                f"{self.id}: predicate budget {self.predicate.ticks} exceeds horizon {self.horizon}"
            )
        try:
            partner = parse_agent_spec(self.partner_spec)
        except ValueError as exc:
            raise UnknownPartnerKind(f"{self.id}: {exc}") from None
        layout = self.layout()
        for k, text in enumerate(self.variants):
            try:
                deserialize_state(text, layout)
            except ValueError as exc:
                raise InvalidStateSnapshot(f"{self.id} variant {k}: {exc}") from None
        warnings = []
        if self.category == "AMR":
            kind = getattr(partner, "kind", None)
            if kind not in MEMORY_PARTNER_KINDS:
                raise SchemaError(
                    f"{self.id}: AMR scenarios need a history-dependent partner, got {self.partner_spec!r}"
                )
            if kind == "stationary_after" and getattr(partner, "t", None) == 0:
                warnings.append(
                    f"{self.id}: partner is stationary from tick 0; memory is not actually required"
                )
        return warnings

    def to_json(self) -> str:
        data = {
            "id": self.id,
            "layout": self.layout_name,
            "category": self.category,
            "tested_agent_index": self.tested_agent_index,
            "partner": self.partner_spec,
            "predicate": self.predicate.to_dict(),
            "horizon": self.horizon,
            "rollouts_per_variant": self.rollouts_per_variant,
            "variants": list(self.variants),
        }
        if self.layout_grid is not None:
            data["layout_grid"] = list(self.layout_grid)
        return json.dumps(data, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str, source: str = "<memory>") -> "Scenario":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{source}: not valid JSON: {exc}") from None
        try:
            return cls(
                id=data["id"],
                layout_name=data["layout"],
                category=data["category"],
                tested_agent_index=int(data["tested_agent_index"]),
                partner_spec=data["partner"],
                predicate=SuccessPredicate.from_dict(data["predicate"]),
                horizon=int(data["horizon"]),
                variants=tuple(data["variants"]),
                rollouts_per_variant=int(data.get("rollouts_per_variant", 50)),
                layout_grid=tuple(data["layout_grid"]) if "layout_grid" in data else None,
            )
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"{source}: missing or malformed field: {exc}") from None


def bundled_suite_dir():
    from importlib import resources

    return resources.files("coopkitchen") / "data" / "suite"


def load_suite(path=None) -> tuple[list[Scenario], list[str]]:
    """Load and validate all .scenario files under `path` (bundled suite by
    default). Returns (scenarios sorted by id, warnings)."""
    base = bundled_suite_dir() if path is None else Path(path)
    try:
        files = sorted(
            (p for p in base.iterdir() if p.name.endswith(".scenario")), key=lambda p: p.name
        )
    except (FileNotFoundError, NotADirectoryError):
        raise SchemaError(f"no scenario directory at {base}") from None
    if not files:
        raise SchemaError(f"no .scenario files under {base}")
    scenarios = []
    warnings: list[str] = []
    seen = set()
    for f in files:
        scenario = Scenario.from_json(f.read_text(), source=f.name)
        if scenario.id in seen:
            raise DuplicateId(f"duplicate scenario id {scenario.id!r}")
        seen.add(scenario.id)
        warnings.extend(scenario.validate())
        scenarios.append(scenario)
    scenarios.sort(key=lambda s: s.id)
    return scenarios, warnings


@dataclass
class RolloutRecord:
    variant: int
    rollout: int
    seed: int
    success: bool
    ticks: int
    error: Optional[str] = None


@dataclass
class ScenarioResult:
    scenario_id: str
    category: str
    layout_name: str
    score: float
    records: list[RolloutRecord]

    @property
    def error_count(self) -> int:
        return sum(1 for r in self.records if r.error)

    def variant_scores(self) -> dict[int, float]:
        byv: dict[int, list[bool]] = {}
        for r in self.records:
            byv.setdefault(r.variant, []).append(r.success)
        return {v: sum(oks) / len(oks) for v, oks in sorted(byv.items())}


def run_variant_rollouts(
    scenario: Scenario, tested: PolicyHandle, base_seed: int, variant: int
) -> list[RolloutRecord]:
    layout = scenario.layout()
    start = deserialize_state(scenario.variants[variant], layout)
    partner_handle = parse_agent_spec(scenario.partner_spec)
    ti = scenario.tested_agent_index
    budget = min(scenario.horizon, scenario.predicate.ticks)
    records = []
    for r in range(scenario.rollouts_per_variant):
        child = stable_seed(base_seed, scenario.id, variant, r)
        built = []
        try:
            policies = [None, None]
            policies[ti] = tested.build(layout, ti, child)
            built.append(policies[ti])
            policies[1 - ti] = partner_handle.build(layout, 1 - ti, child)
            built.append(policies[1 - ti])
            tracker = PredicateTracker(scenario.predicate, ti, start)
            if tracker.success:
                records.append(RolloutRecord(variant, r, child, True, 0))
                continue
            rollout = run_rollout(
                layout,
                policies,
                horizon=budget,
                start=start,
                stop_when=lambda t, outcome, s: tracker.observe(outcome, s),
            )
            built = []  # run_rollout closed them
            records.append(
                RolloutRecord(variant, r, child, tracker.success, len(rollout.trajectory.actions))
            )
        except PolicyError as exc:
            records.append(RolloutRecord(variant, r, child, False, 0, error=str(exc)))
        finally:
            for policy in built:
                try:
                    policy.close()
                except Exception:
                    pass
    return records


def run_scenario(scenario: Scenario, tested: PolicyHandle, base_seed: int) -> ScenarioResult:
    records: list[RolloutRecord] = []
    for variant in range(len(scenario.variants)):
        records.extend(run_variant_rollouts(scenario, tested, base_seed, variant))
    score = sum(1 for r in records if r.success) / len(records)
    return ScenarioResult(
        scenario_id=scenario.id,
        category=scenario.category,
        layout_name=scenario.layout_name,
        score=score,
        records=records,
    )


@dataclass
class TestReport:
    __test__ = False  # not a pytest class, despite the name

    base_seed: int
    tested: str
    results: list[ScenarioResult]
    wall_clock_seconds: Optional[float] = None  # excluded from the canonical file

    def category_means(self) -> dict[str, Optional[float]]:
        means = {}
        for cat in CATEGORIES:
            scores = [r.score for r in self.results if r.category == cat]
            means[cat] = sum(scores) / len(scores) if scores else None
        return means

    def layout_means(self) -> dict[str, float]:
        by: dict[str, list[float]] = {}
        for r in self.results:
            by.setdefault(r.layout_name, []).append(r.score)
        return {k: sum(v) / len(v) for k, v in sorted(by.items())}

    @property
    def error_rollouts(self) -> int:
        return sum(r.error_count for r in self.results)

    @property
    def total_rollouts(self) -> int:
        return sum(len(r.records) for r in self.results)

    def to_dict(self) -> dict:
        return {
            "version": __version__,
            "base_seed": self.base_seed,
            "tested": self.tested,
            "categories": self.category_means(),
            "layouts": self.layout_means(),
            "error_rollouts": self.error_rollouts,
            "total_rollouts": self.total_rollouts,
            "scenarios": [
                {
                    "id": r.scenario_id,
                    "category": r.category,
                    "layout": r.layout_name,
                    "score": r.score,
                    "errors": r.error_count,
                    "variants": {str(k): v for k, v in r.variant_scores().items()},
                }
                for r in sorted(self.results, key=lambda r: r.scenario_id)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def table(self) -> str:
        lines = [f"tested agent: {self.tested}    base seed: {self.base_seed}"]
        means = self.category_means()
        lines.append("")
        lines.append(f"{'category':<10}{'scenarios':>10}{'mean':>8}")
        for cat in CATEGORIES:
            n = sum(1 for r in self.results if r.category == cat)
            mean = means[cat]
            lines.append(f"{cat:<10}{n:>10}{'n/a' if mean is None else f'{mean:.2f}':>8}")
        lines.append("")
        lines.append(f"{'scenario':<40}{'cat':<6}{'score':>7}{'errors':>8}")
        for r in sorted(self.results, key=lambda r: r.scenario_id):
            lines.append(f"{r.scenario_id:<40}{r.category:<6}{r.score:>7.2f}{r.error_count:>8}")
        if self.error_rollouts:
            lines.append("")
            lines.append(f"error rollouts: {self.error_rollouts}/{self.total_rollouts}")
        if self.wall_clock_seconds is not None:
            lines.append("")
            lines.append(f"wall clock: {self.wall_clock_seconds:.1f}s")
        return "\n".join(lines) + "\n"


def _variant_job(args):
    scenario, tested, base_seed, variant = args
    return (scenario.id, variant, run_variant_rollouts(scenario, tested, base_seed, variant))


def run_suite(
    suite: list[Scenario],
    tested: PolicyHandle,
    base_seed: int,
    parallelism: int = 1,
) -> TestReport:
    """Score every scenario; the report is identical for any parallelism."""
    if not suite:
        raise SchemaError("empty suite")
    import time

    t0 = time.perf_counter()
    jobs = [(s, tested, base_seed, v) for s in suite for v in range(len(s.variants))]
    results_map: dict[tuple[str, int], list[RolloutRecord]] = {}
    if parallelism > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            for sid, variant, records in pool.map(_variant_job, jobs, chunksize=1):
                results_map[(sid, variant)] = records
    else:
        for job in jobs:
            sid, variant, records = _variant_job(job)
            results_map[(sid, variant)] = records

    results = []
    for scenario in sorted(suite, key=lambda s: s.id):
        records: list[RolloutRecord] = []
        for v in range(len(scenario.variants)):
            records.extend(results_map[(scenario.id, v)])
        score = sum(1 for r in records if r.success) / len(records)
        results.append(
            ScenarioResult(
                scenario_id=scenario.id,
                category=scenario.category,
                layout_name=scenario.layout_name,
                score=score,
                records=records,
            )
        )
    return TestReport(
        base_seed=base_seed,
        tested=describe_handle(tested),
        results=results,
        wall_clock_seconds=time.perf_counter() - t0,
    )


def capture_scenario(
    layout: Layout,
    state: WorldState,
    category: str,
    partner_spec: str,
    predicate: SuccessPredicate,
    scenario_id: str,
    out_dir,
    tested_agent_index: int = 0,
    horizon: Optional[int] = None,
    rollouts_per_variant: int = 50,
) -> Path:
    """Write a one-variant scenario file capturing a live state."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{scenario_id}.scenario"
    if path.exists():
        raise DuplicateId(f"scenario file {path} already exists")
    try:
        from coopkitchen.core import validate_state

        validate_state(layout, state)
    except ValueError as exc:
        raise InvalidStateSnapshot(str(exc)) from None
    from dataclasses import replace as _replace

    from coopkitchen.core import bundled_layout_names

    snapshot = _replace(state, tick=0)
    grid = None
    if layout.name not in bundled_layout_names():
        grid = tuple(layout.as_text().split("\n"))
    scenario = Scenario(
        id=scenario_id,
        layout_name=layout.name,
        category=category,
        tested_agent_index=tested_agent_index,
        partner_spec=partner_spec,
        predicate=predicate,
        horizon=horizon if horizon is not None else predicate.ticks,
        variants=(serialize_state(snapshot),),
        rollouts_per_variant=rollouts_per_variant,
        layout_grid=grid,
    )
    scenario.validate()
    path.write_text(scenario.to_json())
    return path
