"""Split-message regions, projection cross-check, and randomizer accounting.

Run with: python demos/03_split_messages_and_secrecy.py
"""
from oneshot_secrecy import (
    PenaltyMode,
    ToleranceParams,
    bundled_path,
    conjecture_region,
    control_state_hk,
    hk_nosecrecy_region,
    hk_region_via_projection,
    leakage_bound,
    load_channel,
    minimal_2d,
    randomizer_plan,
    secrecy_check,
    theorem2_region,
    uniform_hk,
    vertices_2d,
)

channel = load_channel(bundled_path("xor_split.json"))
dist = uniform_hk(channel)
params = ToleranceParams(eps=0.25, eps_prime=0.1, delta=0.01, delta_prime=0.2)
off = PenaltyMode("off")

print(f"channel {channel.name!r}: both receivers observe "
      "(x11 xor x22, x10 xor x20); the eavesdropper is maximally mixed.")
print()

# The split-message no-secrecy region can be written down directly, or
# obtained by projecting the two three-sender systems onto (R1, R2).
printed = hk_nosecrecy_region(channel, dist, params.eps, off)
projected = hk_region_via_projection(channel, dist, params.eps, off)
print("split-message region, printed rows (penalties off):")
for row in printed.rows:
    coeffs = " + ".join(f"{c:g} {v}" for c, v in zip(row.coeffs, printed.variables) if c)
    print(f"  {row.tag:6} {coeffs:13} <= {row.bound:.6f}")
pr = minimal_2d(printed)
pj = minimal_2d(projected)
print(f"irredundant rows: printed {len(pr.rows)}, via projection {len(pj.rows)}; "
      f"vertices match: {vertices_2d(pr).vertices == vertices_2d(pj).vertices}")
print()

conj = conjecture_region(channel, dist, params, off)
t2 = theorem2_region(channel, dist, params, off)
print("secrecy regions (penalties off):")
print(f"  split-message form: {[(round(a,4), round(b,4)) for a, b in vertices_2d(conj).vertices]}")
print(f"  side-information form ({len(t2.rows)} rows): "
      f"{[(round(a,4), round(b,4)) for a, b in vertices_2d(t2).vertices]}")
print()

# Randomizer blocks: each junk index register must carry at least the
# eavesdropper's max information about its message part plus the fixed
# smoothing overhead.
state = control_state_hk(channel, dist)
plan = randomizer_plan(state, params)
print(f"randomizer plan (decoding order {' -> '.join(plan.decoding_order)}):")
for name, bits in (("K10", plan.log_k10), ("K20", plan.log_k20),
                   ("K11", plan.log_k11), ("K22", plan.log_k22)):
    print(f"  log|{name}| >= {bits:.4f} bits")
lb = plan.leakage
print(f"leakage bound 60 delta'^(1/8) = {lb.value:.4f} "
      f"({'vacuous' if lb.vacuous else 'nonvacuous'} at delta' = {params.delta_prime})")
print(f"for a nonvacuous bound, delta' must drop below (1/30)^8 ~ "
      f"{leakage_bound(1e-16).value:.3f} at delta' = 1e-16")
print()

report = secrecy_check(state, params, (0.01, 0.01, 0.01))
print("leakage conditions:")
for cond in report.conditions:
    grouping = " ".join(cond.part_a)
    print(f"  {cond.label:9} I_max({grouping} : Z) "
          f"= {cond.value:.6f} <= {cond.threshold:g} -> {'pass' if cond.passed else 'FAIL'}")
