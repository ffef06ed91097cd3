"""Two settings suffice for a qubit probe exactly when the state has discord.

For a classical-quantum state every local operator in its decomposition is
diagonal in one basis, and one extra rotation leaves the Bloch vectors in a
plane: three of the four directions at best.
"""

import numpy as np

from capt import ExperimentPlan, qubit_discord_test, qubit_discord_unitary, random_channel, run_experiment
from capt.operator_algebra import random_haar_unitary
from capt.states import classical_quantum_qubit_state, random_bipartite_state, werner_state

hidden = random_channel(2, seed=7)

for name, rho in [("random mixed", random_bipartite_state((2, 2), 3)),
                  ("Werner p=0.2", werner_state(0.2))]:
    U = qubit_discord_unitary(rho)
    res = run_experiment(ExperimentPlan("CAPT", state=rho, unitaries=[np.eye(2), U]), hidden)
    print(f"{name:14s} discord={qubit_discord_test(rho)}  exact={res.exact}  choi_error={res.choi_error:.1e}")

cq = classical_quantum_qubit_state(seed=5)
print(f"{'classical-q':14s} discord={qubit_discord_test(cq)}")
dims = []
for seed in range(200):
    U = random_haar_unitary(2, seed)
    dims.append(run_experiment(ExperimentPlan("CAPT", state=cq, unitaries=[np.eye(2), U]), hidden).determined_dim)
print(f"  200 random second unitaries: determined_dim in {sorted(set(dims))} (never 4)")
