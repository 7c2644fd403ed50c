import random
from collections import Counter

import pytest

from coopkitchen.core import bundled_layout, initial_state
from coopkitchen.evaluation import (
    EmptyPool,
    EvalConfig,
    LayoutMismatch,
    StartStatePool,
    build_start_pool,
    default_validation_population,
    episode_return,
    sample_start,
    validation_reward,
)
from coopkitchen.policies import ScriptedHandle, ToMHandle, Trajectory, record_rollout

LAYOUT = bundled_layout("room")


def fake_trajectory(rewards):
    return Trajectory(
        layout_name="room",
        initial_state_text="",
        actions=[("STAY", "STAY")] * len(rewards),
        rewards=list(rewards),
    )


class TestEpisodeReturn:
    def test_final_reward_undiscounted(self):
        traj = fake_trajectory([0] * 19 + [20])
        assert episode_return(traj, gamma=1.0) == 20

    def test_discounted_single_reward(self):
        traj = fake_trajectory([0, 0, 20])
        assert episode_return(traj, gamma=0.5) == pytest.approx(5.0)

    def test_matches_loop_oracle_on_random_sequences(self):
        rng = random.Random(3)
        for _ in range(200):
            rewards = [rng.choice([0, 0, 0, 20, 40]) for _ in range(rng.randrange(1, 50))]
            gamma = rng.uniform(0.05, 1.0)
            traj = fake_trajectory(rewards)
            expected = 0.0
            discount = 1.0
            for r in rewards:
                expected += discount * r
                discount *= gamma
            assert episode_return(traj, gamma) == pytest.approx(expected, rel=1e-12)

    def test_gamma_one_is_20_times_deliveries(self):
        traj = record_rollout(
            LAYOUT, ToMHandle(preset="max_capability"), ToMHandle(preset="max_capability"), 200, seed=3
        )
        deliveries = sum(r // 20 for r in traj.rewards)
        assert episode_return(traj, 1.0) == 20 * deliveries


class TestValidationReward:
    def test_population_composition(self):
        pop = default_validation_population(LAYOUT)
        assert len(pop.members) == 20
        kinds = Counter(type(m).__name__ for m in pop.members)
        assert kinds == {"ReplayHandle": 10, "ToMHandle": 10}

    def test_breakdown_rows_and_aggregation(self):
        pop = default_validation_population(LAYOUT)
        config = EvalConfig(episodes_per_member=1, horizon=30, seed=5)
        report = validation_reward(LAYOUT, ScriptedHandle(kind="stationary"), pop, config)
        assert len(report.members) == 20
        member_weighted = sum(m.mean * len(m.returns) for m in report.members) / sum(
            len(m.returns) for m in report.members
        )
        assert report.mean == pytest.approx(member_weighted)

    def test_reproducible_given_seed(self):
        pop = default_validation_population(LAYOUT)
        config = EvalConfig(episodes_per_member=1, horizon=60, seed=9)
        a = validation_reward(LAYOUT, ToMHandle(preset="mle_like"), pop, config)
        b = validation_reward(LAYOUT, ToMHandle(preset="mle_like"), pop, config)
        assert a.to_json() == b.to_json()

    def test_stationary_zero_on_corridor_layout(self):
        layout = bundled_layout("bottleneck")
        pop = default_validation_population(layout)
        config = EvalConfig(episodes_per_member=1, horizon=120, seed=2)
        report = validation_reward(layout, ScriptedHandle(kind="stationary"), pop, config)
        assert report.mean == 0.0

    def test_capable_beats_random(self):
        pop = default_validation_population(LAYOUT)
        config = EvalConfig(episodes_per_member=2, horizon=150, seed=4)
        strong = validation_reward(LAYOUT, ToMHandle(preset="max_capability"), pop, config)
        weak = validation_reward(LAYOUT, ScriptedHandle(kind="random"), pop, config)
        assert strong.mean > weak.mean

    def test_std_error_decreases_with_more_episodes(self):
        from coopkitchen.policies import Population

        # a stochastic matchup: capable tested agent, varied partners
        pop = Population([ToMHandle(preset="v02"), ToMHandle(preset="v09")])
        tested = ToMHandle(preset="max_capability")
        few = validation_reward(
            LAYOUT, tested, pop, EvalConfig(episodes_per_member=5, horizon=150, seed=11)
        )
        many = validation_reward(
            LAYOUT, tested, pop, EvalConfig(episodes_per_member=30, horizon=150, seed=11)
        )
        assert few.std_error > 0
        assert many.std_error < few.std_error


class TestStartPool:
    def _trajectory(self, horizon=200, seed=5):
        return record_rollout(
            LAYOUT, ToMHandle(preset="mle_like"), ToMHandle(preset="mle_like"), horizon, seed=seed
        )

    def test_pool_size_stride(self):
        traj = self._trajectory(horizon=400)
        pool = build_start_pool([traj], LAYOUT, stride=10)
        assert len(pool.snapshots) == 41  # initial + every 10th of 400

    def test_snapshots_reset_tick_and_validate(self):
        pool = build_start_pool([self._trajectory()], LAYOUT, stride=10)
        assert all(s.tick == 0 for s in pool.snapshots)

    def test_sampling_uniform(self):
        traj = self._trajectory(horizon=390)
        pool = build_start_pool([traj], LAYOUT, stride=10)
        assert len(pool.snapshots) == 40
        rng = random.Random(17)
        n = 10_000
        counts = Counter(id(sample_start(pool, rng)) for _ in range(n))
        for snap in pool.snapshots:
            assert abs(counts[id(snap)] / n - 1 / 40) < 0.005 + 1e-9

    def test_singleton_pool(self):
        pool = StartStatePool(layout_name="room", snapshots=[initial_state(LAYOUT)])
        assert sample_start(pool, random.Random(0)) == initial_state(LAYOUT)

    def test_sampling_reproducible(self):
        pool = build_start_pool([self._trajectory()], LAYOUT, stride=10)
        seq1 = [sample_start(pool, random.Random(9)) for _ in range(5)]
        seq2 = [sample_start(pool, random.Random(9)) for _ in range(5)]
        assert seq1 == seq2

    def test_layout_mismatch(self):
        other = bundled_layout("bottleneck")
        with pytest.raises(LayoutMismatch):
            build_start_pool([self._trajectory()], other)

    def test_empty_pool_rejected(self):
        with pytest.raises(EmptyPool):
            StartStatePool(layout_name="room", snapshots=[])

    def test_save_load_round_trip(self, tmp_path):
        pool = build_start_pool([self._trajectory(horizon=100)], LAYOUT, stride=10)
        path = tmp_path / "starts.pool"
        pool.save(path)
        again = StartStatePool.load(path, LAYOUT)
        assert again.snapshots == pool.snapshots
        with pytest.raises(LayoutMismatch):
            StartStatePool.load(path, bundled_layout("bottleneck"))

    def test_diverse_starts_config(self):
        pool = build_start_pool([self._trajectory(horizon=100)], LAYOUT, stride=10)
        pop = default_validation_population(LAYOUT)
        config = EvalConfig(episodes_per_member=1, horizon=20, seed=1, diverse_starts=True)
        report = validation_reward(LAYOUT, ScriptedHandle(kind="stationary"), pop, config, start_pool=pool)
        assert len(report.members) == 20
        with pytest.raises(ValueError):
            validation_reward(LAYOUT, ScriptedHandle(kind="stationary"), pop, config, start_pool=None)
