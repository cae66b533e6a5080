"""Action vocabulary shared by the simulator, the log writer and the
feature extractor.

Every candidate event in the rate table is an (agent, action) pair.  The
column order below is fixed: it determines both the layout of the rate
matrix and the order in which per-agent rates are sampled, so it is part
of the determinism contract.
"""

from __future__ import annotations

# Free-running actions: each has a continuous per-agent rate.
CASH_IN = "cash_in"
CASH_OUT = "cash_out"
P2P_SEND = "p2p_send"
ID_VERIFICATION = "id_verification"
BTC_BUY = "btc_buy"

# Scheduled actions: fire on a fixed cadence via the rate-boost mechanism.
PAY_RENT = "pay_rent"
DEPOSIT_PAYCHEQUE = "deposit_paycheque"
REPAY_LOAN = "repay_loan"

# World-level event: a new customer joining the platform (optional).
CUSTOMER_JOIN = "customer_join"

FREE_ACTIONS = (CASH_IN, CASH_OUT, P2P_SEND, ID_VERIFICATION, BTC_BUY)
SCHEDULED_ACTIONS = (PAY_RENT, DEPOSIT_PAYCHEQUE, REPAY_LOAN)
ALL_ACTIONS = FREE_ACTIONS + SCHEDULED_ACTIONS

# Rate-matrix column index per action.
COLUMN = {name: i for i, name in enumerate(ALL_ACTIONS)}
N_COLUMNS = len(ALL_ACTIONS)

# Cadence (days) and first-due offset from the agent's join time (days).
# Rent is due at the start of each 30-day cycle; paycheques and loan
# instalments arrive one full period after joining.
SCHEDULE_PERIOD = {PAY_RENT: 30.0, DEPOSIT_PAYCHEQUE: 14.0, REPAY_LOAN: 7.0}
SCHEDULE_FIRST_DUE = {PAY_RENT: 0.0, DEPOSIT_PAYCHEQUE: 14.0, REPAY_LOAN: 7.0}
SCHEDULE_INDEX = {name: i for i, name in enumerate(SCHEDULED_ACTIONS)}

# Actions a business account is never allowed to perform.
BUSINESS_EXCLUDED = frozenset((PAY_RENT, REPAY_LOAN, BTC_BUY))

# Spelling used in the log file; everything else is logged under its
# internal name.  The log is the compatibility contract, so the past
# tense for p2p is deliberate.
LOG_NAME = {P2P_SEND: "p2p_sent"}


def log_name(action: str) -> str:
    """Name under which *action* appears in the CSV log."""
    return LOG_NAME.get(action, action)
