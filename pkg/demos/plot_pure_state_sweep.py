"""
Sweeping pure states over the Bloch sphere
==========================================

Coherence of |psi(theta, phi)> on a 61 x 61 angle grid, with and without
a Hadamard applied first.
"""

import numpy as np

from povm_coherence.scenarios import U_MAX, four_outcome_povm, sweep_pure_states
from povm_coherence import Channel

povm = four_outcome_povm()
table = sweep_pure_states(povm, n_theta=61, n_phi=61)
print("rows:", len(table))
print("max", table.coherence.max(), "min", table.coherence.min())

# The minimum sits on the equator at four phases, one per effect.
lows = table.argwhere_close("coherence", table.coherence.min())
print("minimizers (theta, phi/pi):", sorted({(round(float(t), 4), round(float(f) / np.pi, 4)) for t, f in lows}))

# After a Hadamard the best gain is half a bit, reached at |+> and |->.
after = sweep_pure_states(povm, Channel.unitary(U_MAX))
inc = after.increment
print("largest increment", inc.max())
print("at", [(round(float(t), 4), round(float(f), 4)) for t, f in after.argwhere_close(inc, inc.max())])

# A coarse text rendering of C over (theta rows, phi columns).
coarse = sweep_pure_states(povm, n_theta=7, n_phi=9).coherence.reshape(7, 9)
for row in coarse:
    print(" ".join(f"{v:.2f}" for v in row))
