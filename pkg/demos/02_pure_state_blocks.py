"""Pure probe-ancilla states: block unitaries on the Schmidt support.

A pure state of Schmidt rank k reaches only a k x k corner of the operator
space; ceil(d/k)² local unitaries shuffle and superpose the blocks until
every corner is covered.
"""

import math

from capt import ExperimentPlan, random_channel, run_experiment
from capt.constructions import theorem3_state_unitaries
from capt.faithfulness import local_span_dim
from capt.states import pure_state, random_pure_vector

for d, k in [(2, 1), (4, 2), (5, 2), (6, 3), (6, 6)]:
    psi = random_pure_vector((d, d), seed=d * 10 + k, schmidt_rank=k)
    rho = pure_state(psi, (d, d))
    Us = theorem3_state_unitaries(psi, (d, d))
    alone = local_span_dim([rho]).span_dim
    res = run_experiment(ExperimentPlan("CAPT", state=rho, unitaries=Us), random_channel(d, seed=1))
    print(f"d={d} k={k}: state alone spans {alone:2d}/{d * d}; "
          f"{len(Us)} = ceil(d/k)^2 = {math.ceil(d / k) ** 2} unitaries -> "
          f"exact={res.exact}, choi_error={res.choi_error:.1e}")
