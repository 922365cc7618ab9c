"""
Rank-one free modules over sv(0)
================================

Solve the recurrences for an affine ansatz, rebuild the images of the
generator, and compare with Phi(l, a).
"""

import random

from svmod import PhiParams, build_residual_system, classify, solve_recurrences
from svmod.classifier import check_uniqueness, perturb_ansatz
from svmod.modules import intertwiner_check

state = solve_recurrences(window=3)
for name, ok in state.verdicts.items():
    print(f"{name:16s} {ok}")

# the chain that kills the constant part of Y_m.1
for fid, text in state.facts:
    if fid.startswith("c_"):
        print(fid, ":", text)

ans = classify(4)
print("L_2.1 =", ans.g[2])
print("Y_-3.1 =", ans.p[-3])
print("M_1.1 =", ans.a[1])

system = build_residual_system(ans)
print(len(system), "relations, all zero:", all(r.is_zero for r in system))
print("intertwines with Phi:", intertwiner_check(ans, PhiParams(), 4).passed)
print(check_uniqueness(ans))

# change one coefficient and see where it breaks
bad, label = perturb_ansatz(ans, random.Random(5))
broken = [r for r in build_residual_system(bad) if not r.is_zero]
print(label, "->", broken[0])
