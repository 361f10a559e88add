"""Frontier anatomy: how many maxima survive, how many records get broken.

Under independent coordinates in the plane the expected number of current
maxima at time n is exactly the harmonic number H_n (logarithmic growth),
while sampling uniformly from the simplex pushes it to sqrt(pi n):
dependence changes the frontier's whole growth order, not just a constant.
"""

import math

from paretorecords import (
    ExperimentConfig,
    IidExponential,
    MarginalDirichlet,
    estimate_maxima,
    make_rng,
    run_stream,
    sample_observations,
)

print("Expected current-maxima count E r_n, iid Exponential d=2 (theory: H_n)\n")
print("      n     estimate      H_n    gap/sigma")
for n in (10, 100, 1000):
    result = estimate_maxima(ExperimentConfig(IidExponential(2), n, 3000, seed=11))
    h_n = sum(1.0 / k for k in range(1, n + 1))
    gap = (result.maxima.point - h_n) / result.maxima.std_error
    print(f"  {n:5d}   {result.maxima.point:9.4f} {h_n:9.4f}   {gap:+.2f}")

print("\nUniform on the simplex (marginal Dirichlet, a=1), d=2: E r_n ~ sqrt(pi n)\n")
print("      n     estimate   sqrt(pi n)   ratio")
for n in (100, 1000, 10_000):
    result = estimate_maxima(ExperimentConfig(MarginalDirichlet(2, 1.0), n, 400, seed=12))
    target = math.sqrt(math.pi * n)
    print(f"  {n:5d}   {result.maxima.point:9.2f}   {target:9.2f}   {result.maxima.point / target:.4f}")

print("\nOne trajectory under the microscope (iid d=2, n=30):\n")
obs = sample_observations(IidExponential(2), 30, make_rng(3))
result = run_stream(obs)
size = 0
print("  step  record  broken  frontier")
for step, out in enumerate(result.outcomes, start=1):
    if out.is_record:
        size += 1 - out.broken
    mark = "*" if out.is_record else " "
    print(f"   {step:3d}     {mark}      {out.broken:2d}      {size:3d}")
print(f"\n  records total R_n = {result.records_total}, maxima left r_n = {result.maxima_count}")
print("  (each record removes the maxima it dominates: broken = r_(k-1) + 1 - r_k)")
