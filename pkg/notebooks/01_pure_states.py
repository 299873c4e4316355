# Pure states of the two-qubit preparation circuit.
#
# An Ry rotation on qubit A followed by a controlled rotation on B produces a
# family of pure states indexed by (alpha, theta). For every member the
# coherence, predictability and concurrence of either qubit satisfy
# V^2 + P^2 + C^2 = 1.
import math

import numpy as np

from triality import PrepParams, evaluate_pure, prepare_state, prepare_state_circuit

# %% closed form against the circuit
p = PrepParams(math.pi / 3, 2 * math.pi / 3)
print("closed form:", np.round(prepare_state(p).amplitudes, 6))
print("circuit:    ", np.round(prepare_state_circuit(p).amplitudes, 6))

# %% a few landmark states
landmarks = {
    "|00>": PrepParams(0.0, math.pi),
    "Bell": PrepParams(math.pi / 2, math.pi),
    "|+>|0>": PrepParams(math.pi / 2, 0.0),
}
for name, q in landmarks.items():
    rec = evaluate_pure(prepare_state(q), q)
    print(f"{name:7s} V={rec.v_a:.3f} P={rec.p_a:.3f} C={rec.c:.3f} sum={rec.sum_a:.15f}")

# %% the identity over a grid
grid = np.linspace(0, math.pi, 25)
worst = max(
    abs(evaluate_pure(prepare_state(PrepParams(a, t))).sum_a - 1)
    for a in grid
    for t in grid
)
print("worst |sum - 1| over a 25x25 grid:", worst)
