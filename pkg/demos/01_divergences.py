"""Tour of the one-shot divergences on small states.

Run with: python demos/01_divergences.py
"""
import numpy as np

from oneshot_secrecy import (
    binary_entropy,
    classical_np_oracle,
    fact_bound,
    fidelity,
    hypothesis_testing_divergence,
    max_relative_entropy,
    purified_distance,
    relative_entropy,
    smooth_max_relative_entropy,
    trace_distance,
)

rho = np.diag([0.5, 0.5]).astype(complex)
sigma = np.diag([0.9, 0.1]).astype(complex)

print("Two commuting qubit states: rho = I/2, sigma = diag(0.9, 0.1)")
print(f"  trace distance      {trace_distance(rho, sigma):.6f}")
print(f"  fidelity            {fidelity(rho, sigma):.6f}")
print(f"  purified distance   {purified_distance(rho, sigma):.6f}")
print(f"  relative entropy    {relative_entropy(rho, sigma):.6f} bits")
print(f"  max-relative ent.   {max_relative_entropy(rho, sigma):.6f} bits")
print()

# The hypothesis-testing divergence asks: with type-I success at least 1-eps,
# how small can the type-II error get?  On commuting states the optimum is a
# classical likelihood-ratio test, so the quantum solver must agree with the
# greedy Neyman-Pearson oracle.
for eps in (0.1, 0.25, 0.5):
    dh = hypothesis_testing_divergence(rho, sigma, eps)
    beta, oracle = classical_np_oracle([0.5, 0.5], [0.9, 0.1], eps)
    print(f"  eps = {eps:4}: D_H = {dh:.6f} bits, classical oracle {oracle:.6f} "
          f"(beta* = {beta:.4f})")
print()

# The relative-entropy bound on D_H; h_b is the binary entropy.
eps = 0.5
print(f"bound check at eps = {eps}: D_H = {hypothesis_testing_divergence(rho, sigma, eps):.6f} "
      f"<= (D + h_b)/(1-eps) = {fact_bound(rho, sigma, eps):.6f}, "
      f"h_b({eps}) = {binary_entropy(eps):.6f}")
print()

# Smoothing the max-relative entropy over a purified-distance ball: shifting
# probability mass toward sigma lowers the largest likelihood ratio.
peaked = np.diag([0.9, 0.1]).astype(complex)
flat = np.eye(2).astype(complex) / 2
print("smoothing D_max(diag(0.9, 0.1) || I/2):")
print(f"  unsmoothed          {max_relative_entropy(peaked, flat):.6f} bits")
for eps in (0.05, 0.1, 0.2):
    val = smooth_max_relative_entropy(peaked, flat, eps, "diagonal-scan")
    print(f"  eps = {eps:4}         {val:.6f} bits")
