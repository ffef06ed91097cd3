"""How many experimental settings does it take to learn a qutrit channel?

Standard tomography needs nine probe states. A maximally entangled ancilla
needs one. A merely correlated state of operator Schmidt rank k needs
ceil(9 / k) local preprocessing channels.
"""

import numpy as np

from capt import ExperimentPlan, osr, random_channel, run_experiment, theorem1_channel_set
from capt.states import maximally_entangled_state, random_density_matrix, random_state_with_osr

d = 3
hidden = random_channel(d, seed=42, kraus_rank=2)

# standard tomography: d² random probe states
probes = [random_density_matrix(d, seed) for seed in range(d * d)]
res = run_experiment(ExperimentPlan("SPT", probes=probes), hidden)
print(f"SPT   settings={d * d}  exact={res.exact}  choi_error={res.choi_error:.1e}")

res = run_experiment(ExperimentPlan("AAPT", state=maximally_entangled_state(d)), hidden)
print(f"AAPT  settings=1  exact={res.exact}  choi_error={res.choi_error:.1e}")

for k in (1, 2, 3, 5, 9):
    rho = random_state_with_osr((d, d), k, seed=k)
    channels = theorem1_channel_set(rho)
    plan = ExperimentPlan("CAPT", state=rho, channels=channels)
    res = run_experiment(plan, hidden)
    print(f"CAPT  osr={osr(rho)}  settings={len(channels)}  exact={res.exact}  choi_error={res.choi_error:.1e}")

# without the preprocessing channels the same state only reveals k directions
rho = random_state_with_osr((d, d), 3, seed=3)
res = run_experiment(ExperimentPlan("AAPT", state=rho), hidden)
print(f"\nosr-3 state alone: determined {res.determined_dim} of {d * d} directions")
