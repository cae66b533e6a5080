"""Selection, clock advance, stepping, and whole runs."""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest
from scipy import stats

from kmcsim import actions as act
from kmcsim.agents import build_world
from kmcsim.engine import (
    Clock,
    NoEnabledEventsError,
    RateTable,
    advance_clock,
    run,
    select_event,
    step,
)

from conftest import archetype_doc, config_doc, group, load, normal


def tiny_world(rates_per_agent, seed=0, **kw):
    """Agents doing cash_in only, one per entry of rates_per_agent."""
    archetypes = [archetype_doc(name=f"a{i}",
                                rates={"cash_in": normal(r)},
                                amounts={"cash_in": normal(10.0)})
                  for i, r in enumerate(rates_per_agent)]
    doc = config_doc(archetypes,
                     [group(f"a{i}") for i in range(len(rates_per_agent))],
                     **kw)
    config = load(doc)
    return config, build_world(config, np.random.default_rng(seed))


class TestRateTable:
    def test_filters_zeros_and_keeps_indices(self):
        flat = np.array([0.0, 2.0, 0.0, 0.0, 3.0, 5.0])
        table = RateTable.from_flat(flat)
        assert list(table.indices) == [1, 4, 5]
        assert list(table.rates) == [2.0, 3.0, 5.0]
        assert table.total_rate == 10.0
        assert len(table) == 3

    def test_cumulative_is_normalised(self):
        table = RateTable.from_flat(np.array([1.0, 3.0]))
        assert list(table.cumulative) == [0.25, 1.0]
        assert table.cumulative[-1] == 1.0

    def test_all_zero_raises(self):
        with pytest.raises(NoEnabledEventsError):
            RateTable.from_flat(np.zeros(4))


class TestSelection:
    def test_boundary_hits_lower_candidate(self):
        # cum = [0.25, 1.0]; the smallest index with cum >= u1 wins, so
        # u1 = 0.25 exactly selects the first candidate.
        table = RateTable.from_flat(np.array([1.0, 3.0]))
        assert select_event(table, 0.25) == 0
        assert select_event(table, 0.2500001) == 1
        assert select_event(table, 1.0) == 1
        assert select_event(table, 1e-12) == 0

    def test_frequencies_match_rates(self):
        table = RateTable.from_flat(np.array([1.0, 3.0]))
        rng = np.random.default_rng(7)
        n = 100_000
        wins = sum(select_event(table, 1.0 - rng.random()) == 0
                   for _ in range(n))
        assert abs(wins / n - 0.25) < 0.01


class TestClock:
    def test_known_waiting_time(self):
        clock = advance_clock(Clock(0.0, 10.0), 2.0, math.exp(-1.0))
        assert clock.sim_time == pytest.approx(0.5, rel=1e-12)

    def test_u2_of_one_gives_zero_wait(self):
        clock = advance_clock(Clock(3.0, 10.0), 5.0, 1.0)
        assert clock.sim_time == 3.0

    def test_faster_total_rate_shortens_wait(self):
        u2 = 0.37
        slow = advance_clock(Clock(0.0, 10.0), 1.0, u2)
        fast = advance_clock(Clock(0.0, 10.0), 10.0, u2)
        assert fast.sim_time == pytest.approx(slow.sim_time / 10.0, rel=1e-12)

    @pytest.mark.parametrize("bad_rate", [0.0, -1.0])
    def test_nonpositive_rate_rejected(self, bad_rate):
        with pytest.raises(ValueError):
            advance_clock(Clock(0.0, 10.0), bad_rate, 0.5)

    def test_expired(self):
        assert not Clock(0.0, 1.0).expired
        assert Clock(1.0, 1.0).expired
        assert Clock(2.0, 1.0).expired

    def test_waiting_times_are_exponential(self):
        rng = np.random.default_rng(101)
        gaps = [advance_clock(Clock(0.0, np.inf), 1.0,
                              1.0 - rng.random()).sim_time
                for _ in range(20_000)]
        assert stats.kstest(gaps, "expon").pvalue > 0.01
        assert abs(np.mean(gaps) - 1.0) < 0.025


class TestStep:
    def test_single_candidate_world(self):
        _, world = tiny_world([2.0])
        rng = np.random.default_rng(3)
        clock, event, info = step(world, Clock(0.0, 10.0), rng)
        assert event.action == act.CASH_IN
        assert event.numeric_id == 0
        assert event.sim_time == clock.sim_time > 0.0
        assert info.selected == act.COLUMN[act.CASH_IN]
        assert info.total_rate == 2.0
        assert 0.0 < info.u1 <= 1.0 and 0.0 < info.u2 <= 1.0

    def test_initiator_frequencies_follow_rates(self):
        _, world = tiny_world([9.0, 1.0])
        rng = np.random.default_rng(5)
        clock = Clock(0.0, np.inf)
        hits = 0
        n = 10_000
        for _ in range(n):
            clock, event, _ = step(world, clock, rng)
            hits += event.numeric_id == 0
        assert abs(hits / n - 0.9) < 0.02

    def test_raises_when_nothing_enabled(self):
        _, world = tiny_world([0.0])
        with pytest.raises(NoEnabledEventsError):
            step(world, Clock(0.0, 10.0), np.random.default_rng(1))


class TestRun:
    def test_rejection_free(self):
        config, _ = tiny_world([1.0, 2.0], max_time_days=20.0)
        result = run(config)
        assert result.steps == len(result.events) > 0

    def test_timestamps_nondecreasing_and_cross_horizon(self):
        config, _ = tiny_world([1.0, 2.0], max_time_days=20.0)
        result = run(config)
        times = [e.sim_time for e in result.events]
        assert all(b >= a for a, b in zip(times, times[1:]))
        assert result.termination == "max_time"
        assert result.final_sim_time >= 20.0
        assert times[-1] == result.final_sim_time

    def test_deterministic_for_fixed_seed(self):
        config, _ = tiny_world([1.0, 2.0], max_time_days=10.0)
        assert run(config).events == run(config).events

    def test_seed_override(self):
        config, _ = tiny_world([1.0, 2.0], max_time_days=10.0)
        a, b = run(config, seed=123), run(config, seed=124)
        assert a.seed == 123
        assert a.events == run(config, seed=123).events
        assert a.events != b.events

    def test_zero_horizon_yields_empty_log(self):
        config, _ = tiny_world([1.0], max_time_days=5.0)
        config = dataclasses.replace(config, max_time_days=0.0)
        result = run(config)
        assert result.events == []
        assert result.steps == 0
        assert result.termination == "max_time"

    def test_dead_world_terminates_cleanly(self):
        quiet = archetype_doc(name="quiet", rates={}, amounts={})
        config = load(config_doc([quiet], [group("quiet")],
                                 max_time_days=10.0))
        result = run(config)
        assert result.termination == "no_enabled_events"
        assert result.events == []

    def test_event_mix_tracks_rates(self):
        # Agents at rates 1, 3, 6: initiator shares converge to
        # 0.1 / 0.3 / 0.6.
        config, _ = tiny_world([1.0, 3.0, 6.0], max_time_days=400.0)
        result = run(config)
        counts = np.bincount([e.numeric_id for e in result.events],
                             minlength=3)
        shares = counts / counts.sum()
        assert np.allclose(shares, [0.1, 0.3, 0.6], atol=0.03)


class TestRateScaling:
    def test_tenfold_rates_reproduce_the_sequence_ten_times_faster(self):
        base, _ = tiny_world([1.0, 3.0, 6.0], max_time_days=200.0)
        fast = dataclasses.replace(base, max_time_days=20.0)
        fast = dataclasses.replace(
            fast,
            archetype_specs={
                name: dataclasses.replace(
                    spec,
                    rates={a: dataclasses.replace(d, mean=d.mean * 10.0)
                           for a, d in spec.rates.items()})
                for name, spec in base.archetype_specs.items()})

        res_a, res_b = run(base), run(fast)
        assert res_a.steps == res_b.steps > 1000
        key = [(e.numeric_id, e.action, e.value_cents) for e in res_a.events]
        assert key == [(e.numeric_id, e.action, e.value_cents)
                       for e in res_b.events]
        ratio = res_a.final_sim_time / res_b.final_sim_time
        assert ratio == pytest.approx(10.0, rel=1e-12)
