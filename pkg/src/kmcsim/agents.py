"""Agents, archetype sampling and action execution.

State layout
------------
``Agent`` carries the parameters sampled once per agent (rates, amount
distributions, threshold, identity-check success probability) plus the
initial balances.  ``World`` packs the *mutable* per-agent state into
flat numpy arrays so the engine's once-per-step rate update stays
vectorised; the ``Agent`` list remains the authority for static
parameters.  Exactly one agent's mutable state changes per event (two
for a p2p transfer), so execution works on scalars.

Money is held in integer cents.  Every amount drawn from a Normal
distribution is quantised to cents and clamped before it is applied, so
replaying the two-decimal log reproduces balances exactly and no
balance can go negative.  BTC balances accumulate as floats in event
order; a replay that repeats the same operations reproduces them
bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from . import actions as act

if TYPE_CHECKING:
    from .config import SimulationConfig

INDIVIDUAL = "individual"
BUSINESS = "business"
AGENT_KINDS = (INDIVIDUAL, BUSINESS)

# Smallest representable transfer: one cent.
MIN_TRANSFER_CENTS = 1


def cents(amount: float) -> int:
    """Quantise a currency amount to integer cents."""
    return int(round(amount * 100.0))


@dataclass(frozen=True)
class NormalSpec:
    """Parameters of a Normal draw (currency units or events/day)."""

    mean: float
    std: float

    def draw(self, rng: np.random.Generator) -> float:
        return float(rng.normal(self.mean, self.std))


@dataclass(frozen=True)
class BadActorOverrides:
    """Parameter substitutions applied to agents flagged as bad actors."""

    id_success_prob: float
    p2p_amount: NormalSpec
    p2p_threshold: NormalSpec


@dataclass(frozen=True)
class ArchetypeSpec:
    """Behavioural template an agent population is sampled from."""

    name: str
    kind: str
    rates: dict[str, NormalSpec]            # events/day, free actions only
    amounts: dict[str, NormalSpec]          # currency, per money action
    p2p_threshold: NormalSpec               # currency; send only above this
    id_success_prob: float
    receives_paycheque: bool = False
    pays_rent: bool = False
    has_loan: bool = False
    loan_original: NormalSpec | None = None
    loan_repayment_fraction: float | None = None

    @property
    def allowed_actions(self) -> frozenset[str]:
        allowed = set(self.rates)
        if self.pays_rent:
            allowed.add(act.PAY_RENT)
        if self.receives_paycheque:
            allowed.add(act.DEPOSIT_PAYCHEQUE)
        if self.has_loan:
            allowed.add(act.REPAY_LOAN)
        return frozenset(allowed)


@dataclass
class Agent:
    """One customer account: sampled parameters plus initial state."""

    numeric_id: int
    kind: str
    archetype: str
    is_bad_actor: bool
    cash_cents: int
    btc_balance: float
    loan_original_cents: int
    loan_cents: int
    id_verified: bool
    joined_at: float
    rates: dict[str, float]                 # events/day per free action
    amount_params: dict[str, NormalSpec]    # currency
    p2p_threshold_cents: int
    id_success_prob: float
    receives_paycheque: bool
    pays_rent: bool
    has_loan: bool
    loan_payment_cents: int


def sample_agent(
    spec: ArchetypeSpec,
    numeric_id: int,
    rng: np.random.Generator,
    *,
    is_bad_actor: bool = False,
    overrides: BadActorOverrides | None = None,
    joined_at: float = 0.0,
    initial_cash_cents: int = 0,
) -> Agent:
    """Draw one agent from an archetype.

    Rates are Normal draws clamped at zero (a zero-variance spec yields
    identical agents).  The p2p threshold is drawn per agent; amount
    parameters are taken from the archetype verbatim so event amounts
    follow the configured distribution directly.  Draw order is fixed:
    one rate per free action in column order, then the threshold, then
    the loan principal.
    """
    amount_params = dict(spec.amounts)
    threshold_dist = spec.p2p_threshold
    id_success = spec.id_success_prob
    if is_bad_actor and overrides is not None:
        amount_params[act.P2P_SEND] = overrides.p2p_amount
        threshold_dist = overrides.p2p_threshold
        id_success = overrides.id_success_prob

    rates: dict[str, float] = {}
    for action in act.FREE_ACTIONS:
        dist = spec.rates.get(action)
        if dist is None:
            continue
        if spec.kind == BUSINESS and action in act.BUSINESS_EXCLUDED:
            continue
        rates[action] = max(0.0, dist.draw(rng))

    threshold_cents = max(0, cents(threshold_dist.draw(rng)))

    loan_original_cents = 0
    loan_payment_cents = 0
    has_loan = spec.has_loan and spec.kind != BUSINESS
    if has_loan:
        loan_original_cents = max(0, cents(spec.loan_original.draw(rng)))
        loan_payment_cents = cents(
            spec.loan_repayment_fraction * (loan_original_cents / 100.0)
        )
        # A sub-cent instalment would fire forever moving nothing.
        if loan_original_cents > 0:
            loan_payment_cents = max(MIN_TRANSFER_CENTS, loan_payment_cents)

    return Agent(
        numeric_id=numeric_id,
        kind=spec.kind,
        archetype=spec.name,
        is_bad_actor=is_bad_actor,
        cash_cents=initial_cash_cents,
        btc_balance=0.0,
        loan_original_cents=loan_original_cents,
        loan_cents=loan_original_cents,
        id_verified=False,
        joined_at=joined_at,
        rates=rates,
        amount_params=amount_params,
        p2p_threshold_cents=threshold_cents,
        id_success_prob=id_success,
        receives_paycheque=spec.receives_paycheque,
        pays_rent=spec.pays_rent and spec.kind != BUSINESS,
        has_loan=has_loan,
        loan_payment_cents=loan_payment_cents,
    )


class World:
    """All simulation state: agent list plus packed mutable arrays."""

    def __init__(
        self,
        *,
        unverified_cap_cents: int,
        btc_price: float,
        boost_multiplier: float,
        new_customer_rate: float,
        initial_cash_cents: int,
    ) -> None:
        self.unverified_cap_cents = unverified_cap_cents
        self.btc_price = btc_price
        self.boost_multiplier = boost_multiplier
        self.new_customer_rate = new_customer_rate
        self.initial_cash_cents = initial_cash_cents

        self.agents: list[Agent] = []
        n, a, s = 0, act.N_COLUMNS, len(act.SCHEDULED_ACTIONS)
        self.cash = np.zeros(n, dtype=np.int64)
        self.btc = np.zeros(n, dtype=np.float64)
        self.loan = np.zeros(n, dtype=np.int64)
        self.loan_payment = np.zeros(n, dtype=np.int64)
        self.verified = np.zeros(n, dtype=bool)
        self.business = np.zeros(n, dtype=bool)
        self.threshold = np.zeros(n, dtype=np.int64)
        self.base_rates = np.zeros((n, a), dtype=np.float64)
        self.sched_active = np.zeros((n, s), dtype=bool)
        self.next_due = np.zeros((n, s), dtype=np.float64)

        # Arrival sampling context, set by build_world when enabled.
        self.arrival_specs: list[tuple[ArchetypeSpec, float]] = []
        self.arrival_weights: np.ndarray | None = None
        self.bad_actor_overrides: BadActorOverrides | None = None

    @property
    def n_agents(self) -> int:
        return len(self.agents)

    def add_agent(self, agent: Agent) -> int:
        """Append an agent and grow every state array; returns its index."""
        i = len(self.agents)
        self.agents.append(agent)

        row = np.zeros(act.N_COLUMNS)
        for action, rate in agent.rates.items():
            row[act.COLUMN[action]] = rate

        active = np.zeros(len(act.SCHEDULED_ACTIONS), dtype=bool)
        due = np.full(len(act.SCHEDULED_ACTIONS), np.inf)
        for kind, k in act.SCHEDULE_INDEX.items():
            enabled = (
                (kind == act.PAY_RENT and agent.pays_rent)
                or (kind == act.DEPOSIT_PAYCHEQUE and agent.receives_paycheque)
                or (kind == act.REPAY_LOAN and agent.has_loan and agent.loan_cents > 0)
            )
            if enabled:
                active[k] = True
                due[k] = agent.joined_at + act.SCHEDULE_FIRST_DUE[kind]

        self.cash = np.append(self.cash, agent.cash_cents)
        self.btc = np.append(self.btc, agent.btc_balance)
        self.loan = np.append(self.loan, agent.loan_cents)
        self.loan_payment = np.append(self.loan_payment, agent.loan_payment_cents)
        self.verified = np.append(self.verified, agent.id_verified)
        self.business = np.append(self.business, agent.kind == BUSINESS)
        self.threshold = np.append(self.threshold, agent.p2p_threshold_cents)
        self.base_rates = np.vstack([self.base_rates, row[None, :]])
        self.sched_active = np.vstack([self.sched_active, active[None, :]])
        self.next_due = np.vstack([self.next_due, due[None, :]])
        return i

    def scale_rates(self, factor: float) -> None:
        """Multiply every free-action rate by a positive constant."""
        self.base_rates *= factor


def build_world(config: "SimulationConfig", rng: np.random.Generator) -> World:
    """Instantiate the initial population described by a config.

    Population groups are sampled in file order, agents in id order, so
    the RNG consumption is reproducible.  Within each group the first
    ``round(count * bad_actor_fraction)`` agents are flagged bad; the
    flag assignment itself consumes no randomness, which keeps labels
    derivable from the config alone.
    """
    world = World(
        unverified_cap_cents=cents(config.unverified_cap),
        btc_price=config.btc_price,
        boost_multiplier=config.boost_multiplier,
        new_customer_rate=config.new_customer_rate,
        initial_cash_cents=cents(config.initial_cash_balance),
    )
    world.bad_actor_overrides = config.bad_actor_overrides

    numeric_id = 0
    for group in config.population:
        spec = config.archetype_specs[group.archetype]
        n_bad = int(round(group.count * group.bad_actor_fraction))
        for j in range(group.count):
            agent = sample_agent(
                spec,
                numeric_id,
                rng,
                is_bad_actor=j < n_bad,
                overrides=config.bad_actor_overrides,
                joined_at=0.0,
                initial_cash_cents=cents(config.initial_cash_balance),
            )
            world.add_agent(agent)
            numeric_id += 1

    if config.new_customer_rate > 0:
        world.arrival_specs = [
            (config.archetype_specs[g.archetype], g.bad_actor_fraction)
            for g in config.population
        ]
        weights = np.array([g.count for g in config.population], dtype=np.float64)
        world.arrival_weights = weights / weights.sum()
    return world


def eligible_actions(world: World, i: int, sim_time: float = 0.0) -> set[str]:
    """Actions agent *i* could initiate right now.

    Mirrors the gating applied in the vectorised rate update: outflows
    need at least one cent of balance, p2p additionally needs the
    balance strictly above the agent's threshold and someone to send
    to, btc_buy needs a verified individual, and identity checks stop
    once verified.  Scheduled kinds appear only while due and payable.
    """
    agent = world.agents[i]
    cash = int(world.cash[i])
    out: set[str] = set()
    for action, rate in agent.rates.items():
        if rate <= 0.0:
            continue
        if action == act.ID_VERIFICATION:
            if not world.verified[i]:
                out.add(action)
        elif action == act.CASH_IN:
            out.add(action)
        elif action == act.CASH_OUT:
            if cash >= MIN_TRANSFER_CENTS:
                out.add(action)
        elif action == act.P2P_SEND:
            if cash > agent.p2p_threshold_cents and world.n_agents > 1:
                out.add(action)
        elif action == act.BTC_BUY:
            if (
                world.verified[i]
                and not world.business[i]
                and cash >= MIN_TRANSFER_CENTS
            ):
                out.add(action)
    for kind, k in act.SCHEDULE_INDEX.items():
        if not world.sched_active[i, k] or world.next_due[i, k] > sim_time:
            continue
        if kind == act.DEPOSIT_PAYCHEQUE or cash >= MIN_TRANSFER_CENTS:
            out.add(kind)
    return out


@dataclass(frozen=True)
class ActionOutcome:
    """What one executed action did, ready to be logged.

    ``value_cents`` is set for money movements, ``success`` for identity
    checks, ``receiver`` for p2p transfers; unused fields stay None.
    """

    action: str
    value_cents: int | None = None
    success: bool | None = None
    receiver: int | None = None


def _draw_amount_cents(agent: Agent, action: str, rng: np.random.Generator,
                       lo: int, hi: int | None) -> int:
    """Draw an amount, quantise to cents and clamp to [lo, hi]."""
    raw = cents(agent.amount_params[action].draw(rng))
    if hi is not None and raw > hi:
        raw = hi
    if raw < lo:
        raw = lo
    return raw


def attempt_id_verification(world: World, i: int, rng: np.random.Generator) -> bool:
    """One identity-check attempt; marks the agent verified on success."""
    success = bool(rng.random() < world.agents[i].id_success_prob)
    if success:
        world.verified[i] = True
    return success


def p2p_send(world: World, sender: int, receiver: int,
             rng: np.random.Generator) -> int:
    """Move a drawn amount from sender to receiver; returns cents moved."""
    amount = _draw_amount_cents(
        world.agents[sender], act.P2P_SEND, rng,
        MIN_TRANSFER_CENTS, int(world.cash[sender]),
    )
    world.cash[sender] -= amount
    world.cash[receiver] += amount
    return amount


def execute_action(world: World, i: int, action: str,
                   rng: np.random.Generator) -> ActionOutcome:
    """Carry out one selected event for agent *i* and mutate state.

    Gating has already guaranteed the action is currently possible, so
    every call changes state and yields a loggable outcome.  Per-action
    draw order (part of the determinism contract): p2p draws receiver
    then amount; identity checks draw one uniform; every other money
    action draws one amount.
    """
    agent = world.agents[i]
    cash = int(world.cash[i])

    if action == act.CASH_IN:
        cap = None if world.verified[i] else world.unverified_cap_cents
        amount = _draw_amount_cents(agent, action, rng, MIN_TRANSFER_CENTS, cap)
        world.cash[i] += amount
        return ActionOutcome(action, value_cents=amount)

    if action == act.CASH_OUT:
        cap = cash if world.verified[i] else min(cash, world.unverified_cap_cents)
        amount = _draw_amount_cents(agent, action, rng, MIN_TRANSFER_CENTS, cap)
        world.cash[i] -= amount
        return ActionOutcome(action, value_cents=amount)

    if action == act.P2P_SEND:
        r = int(rng.integers(0, world.n_agents - 1))
        if r >= i:
            r += 1
        amount = p2p_send(world, i, r, rng)
        return ActionOutcome(action, value_cents=amount, receiver=r)

    if action == act.ID_VERIFICATION:
        return ActionOutcome(action, success=attempt_id_verification(world, i, rng))

    if action == act.BTC_BUY:
        amount = _draw_amount_cents(agent, action, rng, MIN_TRANSFER_CENTS, cash)
        world.cash[i] -= amount
        world.btc[i] += (amount / 100.0) / world.btc_price
        return ActionOutcome(action, value_cents=amount)

    if action == act.PAY_RENT:
        amount = _draw_amount_cents(agent, action, rng, MIN_TRANSFER_CENTS, cash)
        world.cash[i] -= amount
        return ActionOutcome(action, value_cents=amount)

    if action == act.DEPOSIT_PAYCHEQUE:
        amount = _draw_amount_cents(agent, action, rng, MIN_TRANSFER_CENTS, None)
        world.cash[i] += amount
        return ActionOutcome(action, value_cents=amount)

    if action == act.REPAY_LOAN:
        amount = min(int(world.loan_payment[i]), int(world.loan[i]), cash)
        world.cash[i] -= amount
        world.loan[i] -= amount
        return ActionOutcome(action, value_cents=amount)

    raise ValueError(f"unknown action: {action}")
