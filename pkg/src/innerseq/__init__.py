"""Inner functions of the unit disk from their Taylor coefficients.

Construct inner functions, check the coefficient identities that
characterise them, and work with the shift-invariant subspaces of l2 they
generate.
"""
from .config import ToleranceConfig
from .seq import CoeffSeq, DecayCert, convolve, correlate, l2_norm_sq, shift
from .inner import (Atom, InnerSpec, SpecError, Zero, blaschke_factor_coeffs, evaluate,
                    sample_coeffs, spec_coeffs)
from .schur import (CriterionReport, classify, condition_c_residual, condition_d_residual,
                    gram_defect, gram_matrix, isometry_probe, norm_one_check)
from .beurling import (MembershipReport, SubspaceHandle, deconvolve, generate_element,
                       membership_test, pullback, shift_invariance_probe)
from .oracle import boundary_norm_sq, modulus_defect, parseval_crosscheck, radial_ladder

__version__ = "0.1.0"
