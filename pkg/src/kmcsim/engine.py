"""Rejection-free kinetic Monte Carlo core.

Each step rebuilds the candidate rate table from current state, selects
one event by inverse-transform sampling on the normalised cumulative
rate array, advances the clock by an exponential waiting time and
executes the event.  The total rate is the *sum* of the candidate
rates, so the mean waiting time is ``1 / sum(r_i)``: adding candidates
shortens waits.  (This is the summation rule, not a harmonic
combination of per-candidate timescales.)

Determinism contract
--------------------
One seeded generator drives an entire run.  Consumption order is fixed:
world construction first (agents in id order; per agent one rate draw
per free action in column order, then the p2p threshold, then the loan
principal), then per step ``u1`` (selection), ``u2`` (waiting time),
then the selected action's own draws (p2p: receiver then amount).
``u1`` and ``u2`` are mapped into (0, 1] so a zero can never reach the
logarithm.  Identical config and seed give an identical event sequence.

Every completed step emits exactly one record; there are no rejected
or empty steps.  A step may carry the clock past ``max_time`` (its
record is kept, and the loop then stops), so a log contains at most one
record past the horizon.  An empty rate table ends the run early with
the ``no_enabled_events`` diagnostic: with a total rate of zero, no
further event can ever occur.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import actions as act
from . import scheduler
from .agents import World, build_world, execute_action, sample_agent

if TYPE_CHECKING:
    from .config import SimulationConfig


class NoEnabledEventsError(RuntimeError):
    """Raised when no candidate has a positive rate."""


@dataclass(frozen=True)
class Clock:
    """Simulation time in days since the epoch, plus the horizon."""

    sim_time: float
    max_time: float

    @property
    def expired(self) -> bool:
        return self.sim_time >= self.max_time


@dataclass(frozen=True)
class RateTable:
    """Zero-filtered candidate rates with their cumulative distribution.

    ``indices`` maps table positions back to flat candidate ids
    (agent-major action columns, with the arrival process last when
    enabled).  ``cumulative`` is normalised; its final entry is exactly
    1.0, and ``total_rate`` is the plain float sum of the entries.
    """

    indices: np.ndarray
    rates: np.ndarray
    cumulative: np.ndarray
    total_rate: float

    @classmethod
    def from_flat(cls, flat: np.ndarray) -> "RateTable":
        nz = np.flatnonzero(flat)
        if nz.size == 0:
            raise NoEnabledEventsError("no enabled events: all rates are zero")
        vals = flat[nz]
        cum = np.cumsum(vals)
        total = float(cum[-1])
        return cls(indices=nz, rates=vals, cumulative=cum / total,
                   total_rate=total)

    def __len__(self) -> int:
        return int(self.indices.size)


def select_event(table: RateTable, u1: float) -> int:
    """Position of the selected candidate: smallest i with cum[i] >= u1."""
    if len(table) == 0:
        raise NoEnabledEventsError("no enabled events: empty rate table")
    return int(np.searchsorted(table.cumulative, u1, side="left"))


def advance_clock(clock: Clock, total_rate: float, u2: float) -> Clock:
    """Advance by an exponential waiting time with mean 1/total_rate."""
    if total_rate <= 0.0:
        raise ValueError(f"total rate must be positive, got {total_rate}")
    dt = -math.log(u2) / total_rate
    return Clock(sim_time=clock.sim_time + dt, max_time=clock.max_time)


@dataclass(frozen=True)
class EngineStep:
    """Diagnostics for one loop iteration."""

    u1: float
    u2: float
    selected: int          # flat candidate id
    dt: float
    total_rate: float


@dataclass(frozen=True)
class SimEvent:
    """One executed event, ready for the log writer."""

    sim_time: float
    numeric_id: int
    action: str            # internal action name
    value_cents: int | None = None
    success: bool | None = None
    receiver_id: int | None = None


def _uniform_01_closed(rng: np.random.Generator) -> float:
    # rng.random() is [0, 1); flip to (0, 1] so log() is always finite.
    return 1.0 - rng.random()


def _execute_candidate(world: World, candidate: int, sim_time: float,
                       rng: np.random.Generator) -> SimEvent:
    n_cells = world.n_agents * act.N_COLUMNS
    if candidate == n_cells:
        return _execute_arrival(world, sim_time, rng)
    i, a = divmod(candidate, act.N_COLUMNS)
    action = act.ALL_ACTIONS[a]
    outcome = execute_action(world, i, action, rng)
    if action in act.SCHEDULE_INDEX:
        scheduler.fire_and_reset(world, i, action)
    receiver = (world.agents[outcome.receiver].numeric_id
                if outcome.receiver is not None else None)
    return SimEvent(
        sim_time=sim_time,
        numeric_id=world.agents[i].numeric_id,
        action=action,
        value_cents=outcome.value_cents,
        success=outcome.success,
        receiver_id=receiver,
    )


def _execute_arrival(world: World, sim_time: float,
                     rng: np.random.Generator) -> SimEvent:
    # Draw order: group (one uniform), bad flag (one uniform), then the
    # usual sample_agent draws.
    cum = np.cumsum(world.arrival_weights)
    g = int(np.searchsorted(cum, rng.random(), side="right"))
    spec, bad_fraction = world.arrival_specs[g]
    is_bad = bool(rng.random() < bad_fraction)
    numeric_id = world.n_agents
    agent = sample_agent(
        spec, numeric_id, rng,
        is_bad_actor=is_bad,
        overrides=world.bad_actor_overrides,
        joined_at=sim_time,
        initial_cash_cents=world.initial_cash_cents,
    )
    world.add_agent(agent)
    return SimEvent(sim_time=sim_time, numeric_id=numeric_id,
                    action=act.CUSTOMER_JOIN)


def step(world: World, clock: Clock, rng: np.random.Generator
         ) -> tuple[Clock, SimEvent, EngineStep]:
    """One loop iteration: rate update, select, advance, execute.

    Raises NoEnabledEventsError when nothing can fire.  The returned
    event is stamped with the post-advance time.
    """
    flat = scheduler.update_rates(world, clock.sim_time)
    table = RateTable.from_flat(flat)
    u1 = _uniform_01_closed(rng)
    position = select_event(table, u1)
    candidate = int(table.indices[position])
    u2 = _uniform_01_closed(rng)
    new_clock = advance_clock(clock, table.total_rate, u2)
    event = _execute_candidate(world, candidate, new_clock.sim_time, rng)
    info = EngineStep(u1=u1, u2=u2, selected=candidate,
                      dt=new_clock.sim_time - clock.sim_time,
                      total_rate=table.total_rate)
    return new_clock, event, info


@dataclass
class RunResult:
    """Everything a finished run hands back to callers."""

    events: list[SimEvent]
    steps: int
    final_sim_time: float
    termination: str       # "max_time" or "no_enabled_events"
    world: World
    seed: int


def run(config: "SimulationConfig", seed: int | None = None) -> RunResult:
    """Simulate from the epoch until the clock crosses the horizon.

    ``seed`` overrides the config's seed when given.  The loop body
    runs only while sim_time < max_time, so a zero horizon yields an
    empty log; the final step's record may carry a time past the
    horizon.
    """
    effective_seed = config.seed if seed is None else seed
    rng = np.random.default_rng(effective_seed)
    world = build_world(config, rng)
    clock = Clock(sim_time=0.0, max_time=config.max_time_days)

    events: list[SimEvent] = []
    steps = 0
    termination = "max_time"
    while clock.sim_time < clock.max_time:
        try:
            clock, event, _ = step(world, clock, rng)
        except NoEnabledEventsError:
            termination = "no_enabled_events"
            break
        events.append(event)
        steps += 1

    return RunResult(events=events, steps=steps,
                     final_sim_time=clock.sim_time,
                     termination=termination, world=world,
                     seed=effective_seed)
