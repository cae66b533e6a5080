"""
Guaranteed payments on a noisy calendar
=======================================

Rent (30 days), paycheques (14 days) and loan instalments (7 days) ride
the same selection machinery as everything else: when a payment comes
due, its rate is boosted so high that it wins the very next step.  The
clock only moves when events fire, so a little background activity
carries the world from one due date to the next.
"""

import numpy as np

from kmcsim import run
from kmcsim.config import parse_config_text

CONFIG = """
{
  "schema_version": 1,
  "seed": 30,
  "epoch": "2022-09-01 00:00:00",
  "max_time_days": 45.0,
  "initial_cash_balance": 5000.0,
  "archetypes": [
    {"name": "settled", "kind": "individual", "id_success_prob": 0.75,
     "rates": {"cash_in": {"mean": 20.0, "std": 0.0}},
     "amounts": {"cash_in": {"mean": 40.0, "std": 10.0},
                 "pay_rent": {"mean": 1200.0, "std": 0.0},
                 "deposit_paycheque": {"mean": 2000.0, "std": 0.0}},
     "p2p_min_balance_threshold": {"mean": 0.0, "std": 0.0},
     "pays_rent": true, "receives_paycheque": true,
     "has_loan": true,
     "loan": {"original": {"mean": 400.0, "std": 0.0},
              "repayment_fraction": 0.25}}
  ],
  "population": [
    {"archetype": "settled", "count": 1, "bad_actor_fraction": 0.0}
  ]
}
"""

config = parse_config_text(CONFIG)
result = run(config)

# Pull out just the scheduled events and show when they landed.  Rent
# is due at days 0/30/..., paycheques at 14/28/..., loan instalments at
# 7/14/21/28 and then never again because the balance hits zero.
print(f"{len(result.events)} events over "
      f"{result.final_sim_time:.1f} simulated days\n")
print(f"{'day':>7}  {'action':<18} {'amount':>9}")
for e in result.events:
    if e.action in ("pay_rent", "deposit_paycheque", "repay_loan"):
        print(f"{e.sim_time:7.3f}  {e.action:<18} {e.value_cents/100:9.2f}")

loan_left = int(result.world.loan[0])
print(f"\nremaining loan balance: {loan_left / 100:.2f}")

gaps = np.diff([e.sim_time for e in result.events
                if e.action == "deposit_paycheque"])
print(f"paycheque gaps: {np.round(gaps, 3)} days (period 14)")
