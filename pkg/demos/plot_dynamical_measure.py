"""
Dynamical coherence of qubit channels
=====================================

How much POVM coherence a channel can add to some input state. Channels
that never add any are the measure-induced incoherent operations.
"""

import numpy as np

from povm_coherence import Channel, OptimizerConfig, certify_cmio, power, random_unitary
from povm_coherence.scenarios import build_paper_example, depolarize_to_mixed, lambda_mixed

ex = build_paper_example()
cfg = OptimizerConfig()

res = power(ex.u_max, Channel.identity(2), ex.povm, cfg)
print("Hadamard: measure", round(res.value, 6), "oracle", round(res.oracle_value, 6))
print("witness", res.witness_point)

for name, ch in [("X", ex.u_min), ("Z", ex.u_min_prime), ("0.3 X + 0.7 Z", lambda_mixed(0.3)),
                 ("replace by I/2", depolarize_to_mixed())]:
    v = certify_cmio(ch, ex.povm, cfg)
    print(f"{name:15s} certified={v.certified_within_budget} violation={v.max_violation_found:.2e}")

# Random unitaries never beat the Hadamard.
rng = np.random.default_rng(7)
vals = [max(power(Channel.unitary(random_unitary(2, rng)), Channel.identity(2), ex.povm, cfg).value, 0)
        for _ in range(10)]
print("10 random unitaries, largest measure:", round(max(vals), 6))
