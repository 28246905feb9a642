"""Witnesses for the virtual splitting of Aut(W) -> Out(W) for Coxeter groups.

Maximal spherical parabolic subgroups, exact geometric-representation
checks, word-problem normal forms, finite permutation quotients and
verifiable certificates.
"""

__version__ = "0.1.0"

from .coxeter import (INF, CoxeterSystem, TypeDecomposition, classify_finite_type,
                      enumerate_spherical_subsets, format_coxeter_system, induced_subsystem,
                      maximal_spherical_subsets, order_of, parse_coxeter_system)
from .cyclotomic import (AlgebraicReal, ExactMatrix, cos_pi_over, determinant, gram_matrix,
                         is_positive_definite, nullity, reflection_matrix, sign_of)
from .words import (NormalForm, cayley_enumerate, format_word, is_left_descent, is_w0_central, length,
                    longest_element, parse_word, shortlex_normal_form, tits_reduce_oracle)
from .quotients import (Evidence, PermQuotient, centralizer_evidence, normalizer_evidence,
                        search_quotients, separate_element, verify_quotient)
from .certificate import BPCertificate, CheckResult, certify_bp, verify_certificate
