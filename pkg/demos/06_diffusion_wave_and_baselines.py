"""Diffusion-wave stepping and a comparison with older schemes.

Runs the second-order-in-time equation with both primary steppers and the
Crank-Nicolson comparison scheme, then shows how the L1 and
Gruenwald-Letnikov baselines lose their advertised order on
characteristic-function data.
"""

from fracstep import harness

print("case (e): indicator data, diffusion-wave, alpha = 1.5")
cfg = harness.StudyConfig(
    case="e",
    alphas=(1.5,),
    schemes=("be", "sbd", "cn"),
    kind="temporal",
    M=16,
    N_list=(10, 20, 40, 80, 160),
    t=0.1,
)
print(harness.emit(harness.run_study(cfg), "markdown"))

print("case (b): subdiffusion baselines on rough data, alpha = 0.5")
print("(theoretical brackets are the smooth-solution rates, 2 - alpha)")
cfg = harness.StudyConfig(
    case="b",
    alphas=(0.5,),
    schemes=("l1", "zeng2"),
    kind="temporal",
    M=16,
    N_list=(10, 20, 40, 80, 160),
    t=0.1,
)
print(harness.emit(harness.run_study(cfg), "markdown"))
print("both drop to first order; the primary steppers keep their design rates.")
