# Thirteen-state sweep with noise-simulation normalization.
#
# Two sampled sweeps share a noise model but draw from disjoint seed streams:
# one plays the measured data, the other the noise simulation. Rescaling the
# measured means by ideal / noise_sim puts the points back on the unit sphere.
from triality import SweepConfig, measured_and_noise_sim, preset, thirteen_states

cfg = SweepConfig(thirteen_states(), repetitions=10, shots=1000, noise=preset(), master_seed=3)
res = measured_and_noise_sim(cfg)

print(" idx  raw sum_a  normalized sum_a  [4-sigma range]   flags")
for i, (stats, pt) in enumerate(zip(res.raw_stats, res.normalized)):
    raw_sum = sum(stats.mean[a] ** 2 for a in ("v_a", "p_a", "c"))
    lo, hi = pt.sum_bounds()
    flags = ",".join(f"{a}:{f}" for a, f in pt.flags.items() if f) or "-"
    print(f"{i:4d}  {raw_sum:9.4f}  {pt.sum_a:16.4f}  [{lo:.3f}, {hi:.3f}]  {flags}")
print("all on the sphere:", all(pt.on_unit_sphere() for pt in res.normalized))
