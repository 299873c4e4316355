# Mixedness pulls the sum below one.
#
# The Werner family p |Phi+><Phi+| + (1 - p) I/4 interpolates between a Bell
# state and the maximally mixed state. Concurrence vanishes once the purity
# drops to 1/3, and the spectrum-only bound C_max tracks it exactly.
import numpy as np

from triality import evaluate, werner_state

print(" p     purity  C       C_max   sum_a")
for p in np.linspace(0, 1, 11):
    rec = evaluate(werner_state(p))
    print(f"{p:4.1f}  {rec.purity:.4f}  {rec.c:.4f}  {rec.c_max:.4f}  {rec.sum_a:.4f}")

# %% at purity exactly 1/3 the state is separable
rec = evaluate(werner_state(1 / 3))
print("purity", rec.purity, "concurrence", rec.c)
