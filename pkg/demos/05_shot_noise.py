"""Finite statistics: the reconstruction error falls like 1/sqrt(shots)."""

import numpy as np

from capt import ExperimentPlan, random_channel, run_experiment
from capt.states import maximally_entangled_state

hidden = random_channel(2, seed=11)
for shots in (10**3, 10**4, 10**5, 10**6, 10**7):
    errs = [run_experiment(ExperimentPlan("AAPT", state=maximally_entangled_state(2), seed=s), hidden, shots=shots).choi_error
            for s in range(20)]
    print(f"shots={shots:>9d}  median choi_error={np.median(errs):.2e}  x sqrt(shots)={np.median(errs) * np.sqrt(shots):.2f}")

# an unconstrained estimate need not be a channel; the optional projection fixes that
res = run_experiment(ExperimentPlan("AAPT", state=maximally_entangled_state(2), seed=0), hidden, shots=100)
proj = run_experiment(ExperimentPlan("AAPT", state=maximally_entangled_state(2), seed=0), hidden, shots=100, project=True)
print(f"\n100 shots: raw estimate CP={res.estimated.is_completely_positive()}, "
      f"projected CPTP={proj.estimated.is_channel()}, error {res.choi_error:.3f} -> {proj.choi_error:.3f}")
