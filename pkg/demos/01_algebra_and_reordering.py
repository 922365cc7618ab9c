"""
Brackets and normal ordering
============================

sv(0) and sv(1/2) as bracket tables, plus moving a generator through
L0^i M0^j Y0^k.
"""

from svmod import SV0, SV_HALF, L, M, Y, bracket, straighten, straighten_oracle
from svmod.lie import check_jacobi, format_algebra_def

# the builtin table, printed in the definition language
print(format_algebra_def(SV0))

# a few brackets; Y carries half-integer indices in sv(1/2)
print(bracket(SV0, L(2), Y(-1)))          # (-1 - 1) Y_1
print(bracket(SV_HALF, Y("1/2"), Y("-1/2")))
print(bracket(SV0, M(3), M(-3)))          # zero

# Jacobi over a small window, exact
report = check_jacobi(SV_HALF, 2)
print(report.to_text())

# normal order of L_1 * Y0^2: three tails L_1, Y_1, M_1
print(straighten(SV0, L(1), (0, 0, 2)))

# the swap-by-swap oracle lands on the same thing
assert straighten(SV0, Y(3), (2, 1, 3)) == straighten_oracle(SV0, Y(3), (2, 1, 3))
print(straighten(SV_HALF, Y("3/2"), (2, 1)))
