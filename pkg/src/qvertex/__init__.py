"""Exact symbolic checks for the level one bosonization of U_q(sl_n^) and its vertex operators."""

from .scalar_ring import (Q, QRat, Scalar, Series, DomainError, PhaseSumError, expand_rational,
                          pochhammer_series, q_pow, qint, scalar_arith, series_arith)
from .lattice import Lattice, LatticeElt, get_lattice, mul_lattice, pairing, to_free_basis
from .fock import (FockState, apply_boson, astar_expand, basis, boson_commutator,
                   matrix_element, weight_ops)
from .vertex_engine import (CurrentExpr, DivergentExpansion, Template, ValidationError,
                            commutator, contract, current, delta, eval_relation, fj_current,
                            mode, normal_ordered_product, rational, template_eq)
from .uq_algebra import (antipode_counit, coproduct, vecrep_apply, verify_def21, verify_hopf,
                         verify_rmatrix)
from .intertwiners import (FAMILIES, constant, correlator, verify_normalization, verify_ope,
                           verify_thm35, vo)
from .mutation import mutate
from .report import Report

__version__ = "0.1.0"
