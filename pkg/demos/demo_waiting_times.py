"""
Waiting times are exponential
=============================

Between events the clock jumps by dt = -ln(u)/R where R is the total
system rate.  Holding R fixed at 1/day and collecting many jumps gives
a textbook Exp(1) sample; this script checks the first two moments and
saves a histogram against the exact density.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from kmcsim import Clock, build_world, step
from kmcsim.config import parse_config_text

CONFIG = """
{
  "schema_version": 1,
  "seed": 2022,
  "epoch": "2022-09-01 00:00:00",
  "max_time_days": 1.0,
  "archetypes": [
    {"name": "metronome", "kind": "individual", "id_success_prob": 0.75,
     "rates": {"cash_in": {"mean": 1.0, "std": 0.0}},
     "amounts": {"cash_in": {"mean": 10.0, "std": 0.0}},
     "p2p_min_balance_threshold": {"mean": 0.0, "std": 0.0}}
  ],
  "population": [
    {"archetype": "metronome", "count": 1, "bad_actor_fraction": 0.0}
  ]
}
"""

config = parse_config_text(CONFIG)
rng = np.random.default_rng(config.seed)
world = build_world(config, rng)
clock = Clock(sim_time=0.0, max_time=np.inf)

n = 50_000
gaps = np.empty(n)
for i in range(n):
    clock, _, info = step(world, clock, rng)
    gaps[i] = info.dt

print(f"{n} waiting times at total rate 1/day")
print(f"  mean {gaps.mean():.4f} days   (exponential: 1.0)")
print(f"  std  {gaps.std(ddof=1):.4f} days   (exponential: 1.0)")

# Histogram against the exact Exp(1) density.
fig, ax = plt.subplots(figsize=(6, 4))
ax.hist(gaps, bins=80, range=(0, 8), density=True, alpha=0.6,
        label="simulated")
t = np.linspace(0, 8, 400)
ax.plot(t, np.exp(-t), "k-", label="exp(-t)")
ax.set_xlabel("waiting time (days)")
ax.set_ylabel("density")
ax.legend()
fig.tight_layout()
fig.savefig("waiting_times.png", dpi=120)
print("wrote waiting_times.png")
