"""
No rank-one free module over sv(1/2)
====================================

Build the bounded-degree certificate and read it.
"""

import json

from svmod import DegreeProfile, check_degree_constraints, prove_nonexistence_sv_half

cert = prove_nonexistence_sv_half(degree_bound=3, window=3)
for a in cert.assumptions:
    print("assume:", a)
for fact in cert.facts[:6]:
    print(f"[{fact.id}] {fact.statement}")
print("...", len(cert.facts), "facts in total")

c = cert.contradiction
print("pair", c.pair, "required", c.required, "computed", c.computed)
print("residual", c.residual, "valid:", cert.valid)

# every admissible pair in the window breaks, not just the default one
print(all(not k.residual.is_zero() for k in cert.pair_checks), len(cert.pair_checks))

other = prove_nonexistence_sv_half(3, 3, pair=("3/2", "1/2"))
print(json.dumps(other.contradiction.to_json(), indent=2))

# the degree bookkeeping behind the sv(0) side
print(check_degree_constraints(DegreeProfile(3, k={1: 1, -1: -1})).violations[:2])
print(check_degree_constraints(DegreeProfile.canonical(3)).consistent)
