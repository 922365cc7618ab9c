"""Exact computations for the Schrodinger-Virasoro algebras sv(0) and sv(1/2).

Submodules:

* ``exactcoeff``: the coefficient ring Q[a][l, 1/l] and its fraction field
* ``sparsepoly``: sparse polynomials over named variables
* ``lie``: bracket tables, axiom audits, definition DSL
* ``pbw``: normal ordering in the enveloping algebra
* ``modules``: the modules Phi(l, a) and abstract rank-1 ansatz actions
* ``classifier``: residual systems, recurrences, nonexistence certificates
* ``cli``: command-line front end
"""

from .classifier import (
    DegreeProfile,
    InfeasibilityCertificate,
    build_residual_system,
    check_degree_constraints,
    classify,
    prove_nonexistence_sv_half,
    solve_recurrences,
)
from .exactcoeff import ALPHA, LAMBDA, ONE, ZERO, CoeffFraction, Coefficient, fraction_solve_linear
from .lie import SV0, SV_HALF, AlgebraDef, BasisElement, L, M, Y, bracket, parse_algebra_def
from .modules import AnsatzFamily, PhiParams, act_abstract, act_phi, theorem_ansatz, verify_module_axiom
from .parsing import ParseError, parse_coefficient, parse_polynomial
from .pbw import straighten, straighten_oracle
from .sparsepoly import ENVELOPING, ENVELOPING_HALF, STV, Polynomial, VarSpace

__version__ = "0.1.0"

__all__ = [
    "ALPHA", "LAMBDA", "ONE", "ZERO", "CoeffFraction", "Coefficient", "fraction_solve_linear",
    "ENVELOPING", "ENVELOPING_HALF", "STV", "Polynomial", "VarSpace",
    "ParseError", "parse_coefficient", "parse_polynomial",
    "SV0", "SV_HALF", "AlgebraDef", "BasisElement", "L", "M", "Y", "bracket", "parse_algebra_def",
    "straighten", "straighten_oracle",
    "AnsatzFamily", "PhiParams", "act_abstract", "act_phi", "theorem_ansatz", "verify_module_axiom",
    "DegreeProfile", "InfeasibilityCertificate", "build_residual_system", "check_degree_constraints",
    "classify", "prove_nonexistence_sv_half", "solve_recurrences",
]
