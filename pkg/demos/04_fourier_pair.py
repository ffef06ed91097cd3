"""A state built from Weyl orbit representatives, rotated once by the Fourier matrix.

Conjugation by F moves each Weyl operator around an orbit of length at most four,
so a state holding one representative per orbit (plus its Fourier partner)
reaches the full operator space with just two settings, even though its
operator Schmidt rank is only about half the maximum.
"""

import numpy as np

from capt import ExperimentPlan, osr, random_channel, run_experiment
from capt.constructions import fourier_matrix, representative_sets, sigma_family, weyl_orbits

for d in (3, 4, 5, 6):
    sizes = sorted(o.size for o in weyl_orbits(d))
    p1, p2 = representative_sets(d)
    sigma = sigma_family(d)
    plan = ExperimentPlan("CAPT", state=sigma, unitaries=[np.eye(d), fourier_matrix(d)])
    res = run_experiment(plan, random_channel(d, seed=d))
    print(f"d={d}: orbit sizes {sizes}, |P1|={len(p1)}, |P2|={len(p2)}, "
          f"osr(σ)={osr(sigma)} of {d * d}, two settings exact={res.exact}")
