"""Rate table maintenance: gating, scheduled payments, arrivals.

Scheduled actions (rent, paycheques, loan instalments) ride the same
selection machinery as everything else.  When an agent's next due time
has passed, that action's rate is set to ``boost_multiplier`` times the
current sum of all non-boosted rates, which makes the probability of
anything else firing first at most ``1 / boost_multiplier`` per step.
The boost is recomputed every step while armed, so simultaneously due
events stay equally likely and uniformly scaling the free rates leaves
the selection sequence unchanged.

Time in a kinetic Monte Carlo run only advances when events fire, so a
world whose only candidates are scheduled payments that are not yet due
has an empty table and the run ends early; some background activity is
needed to carry the clock to the next due date.

A due payment the agent cannot fund at all is skipped: no record, and
the due time moves one full period, preserving the original cadence.
"""

from __future__ import annotations

import numpy as np

from . import actions as act
from .agents import MIN_TRANSFER_CENTS, World

# Schedule-kind order matches actions.SCHEDULED_ACTIONS.
_PERIODS = np.array([act.SCHEDULE_PERIOD[k] for k in act.SCHEDULED_ACTIONS])
_RENT, _PAYCHEQUE, _LOAN = (act.SCHEDULE_INDEX[k] for k in act.SCHEDULED_ACTIONS)
_SCHED_COLS = np.array([act.COLUMN[k] for k in act.SCHEDULED_ACTIONS])


def update_rates(world: World, sim_time: float) -> np.ndarray:
    """Recompute every candidate's rate; returns the flat rate vector.

    Called exactly once per engine step.  Layout: agent-major rows of
    ``actions.ALL_ACTIONS`` columns, flattened, with one trailing entry
    for the new-customer arrival process when enabled.  Zero entries
    mean "not currently possible" and are dropped by table construction.
    """
    cash = world.cash
    rates = world.base_rates.copy()

    # Gating for free actions, mirroring agents.eligible_actions.
    has_cash = cash >= MIN_TRANSFER_CENTS
    rates[:, act.COLUMN[act.CASH_OUT]] *= has_cash
    if world.n_agents > 1:
        rates[:, act.COLUMN[act.P2P_SEND]] *= cash > world.threshold
    else:
        rates[:, act.COLUMN[act.P2P_SEND]] = 0.0
    rates[:, act.COLUMN[act.ID_VERIFICATION]] *= ~world.verified
    rates[:, act.COLUMN[act.BTC_BUY]] *= (
        world.verified & ~world.business & has_cash
    )

    # Scheduled payments: arm what is due and payable, skip one cycle
    # for due-but-unfundable outflows (keeps every step record-bearing).
    pending = world.sched_active & (world.next_due <= sim_time)
    payable = pending.copy()
    payable[:, _RENT] &= has_cash
    payable[:, _LOAN] &= has_cash
    skipped = pending & ~payable
    if skipped.any():
        world.next_due[skipped] += np.broadcast_to(
            _PERIODS, skipped.shape
        )[skipped]

    free_sum = float(rates.sum()) + world.new_customer_rate
    boost = world.boost_multiplier * (free_sum if free_sum > 0.0 else 1.0)
    if payable.any():
        idx_agent, idx_kind = np.nonzero(payable)
        rates[idx_agent, _SCHED_COLS[idx_kind]] = boost

    flat = rates.ravel()
    if world.new_customer_rate > 0.0:
        flat = np.append(flat, world.new_customer_rate)
    return flat


def fire_and_reset(world: World, i: int, kind: str) -> None:
    """Bookkeeping after a scheduled event fired for agent *i*.

    The due time advances by exactly one period from where it was, so
    the cadence never drifts with firing latency.  Loan schedules stay
    active only while a balance remains.
    """
    k = act.SCHEDULE_INDEX[kind]
    world.next_due[i, k] += _PERIODS[k]
    if kind == act.REPAY_LOAN and world.loan[i] <= 0:
        world.sched_active[i, k] = False


def boosted_mask(world: World, sim_time: float) -> np.ndarray:
    """(n_agents, n_scheduled) mask of candidates armed at *sim_time*."""
    pending = world.sched_active & (world.next_due <= sim_time)
    cash_ok = world.cash >= MIN_TRANSFER_CENTS
    pending[:, _RENT] &= cash_ok
    pending[:, _LOAN] &= cash_ok
    return pending
