"""Log replay: rebuild state from a log and check the books balance.

Replaying applies every record to a fresh copy of the initial
population (rebuilt from config and seed, which reproduces the same
sampling draws as the original run).  Because the log carries amounts
in exact cents and the simulator applies the same quantised amounts,
replayed cash and loan balances must match the final simulation state
to the cent, and BTC balances bit-for-bit (same float operations in the
same order).

The replay also enforces the structural rules a well-formed log obeys:
no balance ever goes negative, nobody buys BTC before passing an
identity check, business accounts never pay rent, repay loans or buy
BTC, and loan balances never increase.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from . import actions as act
from .agents import BUSINESS, World, build_world
from .config import SimulationConfig
from .logio import LogRecord, token_for


class ReplayError(ValueError):
    """Raised when a log breaks a replay invariant."""


class ReplayState:
    """Account state reconstructed purely from a log."""

    def __init__(self) -> None:
        self.cash: dict[str, int] = {}
        self.btc: dict[str, float] = {}
        self.loan: dict[str, int] = {}
        self.verified: dict[str, bool] = {}
        self.business: dict[str, bool] = {}
        # Accounts opened by join records: kind and loan terms unknown.
        self.arrived: set[str] = set()

    def open_account(self, token: str, *, cash_cents: int, loan_cents: int,
                     is_business: bool) -> None:
        self.cash[token] = cash_cents
        self.btc[token] = 0.0
        self.loan[token] = loan_cents
        self.verified[token] = False
        self.business[token] = is_business


def initial_state(config: SimulationConfig, seed: int | None = None
                  ) -> tuple[ReplayState, World]:
    """Rebuild the initial population exactly as the run did."""
    rng = np.random.default_rng(config.seed if seed is None else seed)
    world = build_world(config, rng)
    state = ReplayState()
    for agent in world.agents:
        state.open_account(
            token_for(agent.numeric_id),
            cash_cents=agent.cash_cents,
            loan_cents=agent.loan_cents,
            is_business=agent.kind == BUSINESS,
        )
    return state, world


def replay_records(state: ReplayState, records: Iterable[LogRecord],
                   *, btc_price: float, initial_cash_cents: int = 0) -> None:
    """Apply records in order, enforcing replay invariants."""
    p2p = act.log_name(act.P2P_SEND)
    for n, rec in enumerate(records, start=1):
        tok = rec.token
        if rec.action == act.CUSTOMER_JOIN:
            if tok in state.cash:
                raise ReplayError(f"record {n}: duplicate join for {tok}")
            state.open_account(tok, cash_cents=initial_cash_cents,
                               loan_cents=0, is_business=False)
            state.arrived.add(tok)
            continue
        if tok not in state.cash:
            raise ReplayError(f"record {n}: unknown account {tok}")

        if state.business[tok] and rec.action in (
            act.PAY_RENT, act.REPAY_LOAN, act.BTC_BUY
        ):
            raise ReplayError(
                f"record {n}: business account {tok} performed {rec.action}"
            )

        if rec.action == act.ID_VERIFICATION:
            if state.verified[tok]:
                raise ReplayError(
                    f"record {n}: {tok} attempted verification after success"
                )
            if rec.id_check_passed:
                state.verified[tok] = True
            continue

        value = rec.value_cents
        if rec.action in (act.CASH_IN, act.DEPOSIT_PAYCHEQUE):
            state.cash[tok] += value
        elif rec.action in (act.CASH_OUT, act.PAY_RENT):
            state.cash[tok] -= value
        elif rec.action == p2p:
            recv = rec.receiving_token
            if recv not in state.cash:
                raise ReplayError(f"record {n}: unknown receiver {recv}")
            state.cash[tok] -= value
            state.cash[recv] += value
        elif rec.action == act.BTC_BUY:
            if not state.verified[tok]:
                raise ReplayError(
                    f"record {n}: {tok} bought BTC before verification"
                )
            state.cash[tok] -= value
            state.btc[tok] += (value / 100.0) / btc_price
        elif rec.action == act.REPAY_LOAN:
            if tok not in state.arrived:
                if value > state.loan[tok]:
                    raise ReplayError(
                        f"record {n}: loan payment {value} exceeds balance "
                        f"{state.loan[tok]} for {tok}"
                    )
                state.loan[tok] -= value
            state.cash[tok] -= value
        else:
            raise ReplayError(f"record {n}: unreplayable action {rec.action}")

        if state.cash[tok] < 0:
            raise ReplayError(
                f"record {n}: cash balance of {tok} went negative"
            )
    # Loan balances only ever decrease (checked per payment above) and
    # cash non-negativity is checked as soon as each record lands.


def replay(config: SimulationConfig, records: Iterable[LogRecord],
           seed: int | None = None) -> ReplayState:
    """Full replay from a config: rebuild, apply, return final state."""
    state, world = initial_state(config, seed)
    replay_records(state, records, btc_price=world.btc_price,
                   initial_cash_cents=world.initial_cash_cents)
    return state


def diff_against_world(state: ReplayState, world: World) -> list[str]:
    """Mismatch descriptions between replayed state and a finished world."""
    problems: list[str] = []
    for i, agent in enumerate(world.agents):
        tok = token_for(agent.numeric_id)
        if state.cash.get(tok) != int(world.cash[i]):
            problems.append(
                f"{tok}: cash {state.cash.get(tok)} != {int(world.cash[i])}"
            )
        if state.btc.get(tok) != float(world.btc[i]):
            problems.append(
                f"{tok}: btc {state.btc.get(tok)!r} != {float(world.btc[i])!r}"
            )
        # Loan principals of agents who joined mid-run never appear in
        # the log, so their balances cannot be reconstructed.
        if tok not in state.arrived and state.loan.get(tok) != int(world.loan[i]):
            problems.append(
                f"{tok}: loan {state.loan.get(tok)} != {int(world.loan[i])}"
            )
    return problems
