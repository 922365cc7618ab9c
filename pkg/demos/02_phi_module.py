"""
The module Phi(l, a) on C[s, t, v]
==================================

Act with basis elements, check the module axiom and the t^i submodules.
"""

from svmod import STV, L, M, Y, PhiParams, act_phi, parse_polynomial
from svmod.modules import PhiActor, check_submodule_closure, default_test_set, verify_module_axiom
from svmod.sparsepoly import poly_weight_decompose

one = parse_polynomial("1", STV)
f = parse_polynomial("s^2*v + t", STV)

print(act_phi(L(1), one))            # l*s + l*a
print(act_phi(Y(1), parse_polynomial("v", STV)))
print(act_phi(M(-2), f))

# l and a stay formal, so a zero residual holds for every choice of them
tests = default_test_set(STV, fdeg=2, n_random=5, seed=1)
print(verify_module_axiom(PhiActor(), 2, tests).to_text())

# concrete parameters work the same way
concrete = PhiParams.concrete("2/3", -1)
print(act_phi(L(2), f, concrete))

# weight 2 deg_t + deg_v: L keeps it, Y adds 1, M adds 2
for x in (L(3), Y(3), M(3)):
    print(x, sorted(poly_weight_decompose(act_phi(x, f))))

print(check_submodule_closure(PhiParams(), 2, 3).to_text())
