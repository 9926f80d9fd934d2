"""
POVM coherence of qubit states
==============================

Coherence with respect to a four-outcome qubit POVM whose effects are
half-weight projectors onto |0> + i^k |1>.
"""

import numpy as np

from povm_coherence import DensityMatrix, povm_relative_entropy_coherence, standard_relative_entropy_coherence
from povm_coherence.scenarios import four_outcome_povm

povm = four_outcome_povm()
print(povm.n_outcomes, "effects, each of trace", np.trace(povm.effects[0]).real)

# Basis states are the most coherent: every outcome except one is equally likely.
zero = DensityMatrix.from_ket([1, 0])
plus = DensityMatrix.from_ket([1, 1])
mixed = DensityMatrix.maximally_mixed(2)
for name, rho in [("|0>", zero), ("|+>", plus), ("I/2", mixed)]:
    print(f"{name:4s}  C_E = {povm_relative_entropy_coherence(rho, povm):.6f}"
          f"   C_basis = {standard_relative_entropy_coherence(rho):.6f}")

# The maximally mixed state is incoherent in the basis sense, yet it keeps
# one bit of POVM coherence: no qubit state is free for this POVM.
