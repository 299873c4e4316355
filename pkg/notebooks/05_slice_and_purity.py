# Concurrence along V_A = 0 and against purity.
#
# With theta = pi the coherence of qubit A vanishes and alpha trades
# predictability for concurrence. Under noise the concurrence shrinks by a
# nearly constant factor. A depolarization grid on the Bell state shows C and
# C_max falling together until both reach zero at purity 1/3.
from triality import preset, purity_study, ratio_relative_std, slice_study

rows = slice_study(preset(), n_alpha=11)
print(" alpha  P_A    C_ideal C_noisy C_max  ratio")
for r in rows:
    ratio = "   -  " if r.ratio is None else f"{r.ratio:.4f}"
    print(f"{r.alpha:5.3f}  {r.p_a:.3f}  {r.c_ideal:.4f}  {r.c_channel:.4f}  {r.c_max:.4f} {ratio}")
print("relative std of the ratio:", round(ratio_relative_std(rows), 4))

print("\n level  purity  C       C_max")
for r in purity_study([0.0, 0.2, 0.4, 0.6, 2 / 3, 0.8, 1.0]):
    print(f"{r.level:5.3f}  {r.purity:.4f}  {r.c:.4f}  {r.c_max:.4f}")
