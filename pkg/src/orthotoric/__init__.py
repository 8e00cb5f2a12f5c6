"""Kahler metric models in momentum coordinates, with verification suites.

The package builds explicit metrics whose curvature is organized by a
spectrum of momentum intervals and constant roots, checks the defining
differential identities as numerical residual suites, and constructs the
nested families with prescribed curvature character (extremal / wbf / bf,
plus a conformally Einstein branch).
"""

from .poly import EXACT, FLOAT, InexactDivision, Polynomial
from .symfunc import (IdentityViolation, VariableSet, identity_suite,
                      random_variable_set)
from .jets import Jet, fd_gradient, fd_hessian, jet_value, variables
from .geom import (Box, ChartField, EndoField, MetricField, OneFormField,
                   ScalarField, ThreeFormField, TwoFormField, christoffel,
                   cov_deriv_2form, curvature_bundle, exterior_d,
                   kahler_decompose, lie_derivative_metric, pfaffian)
from .ansatz import (AnsatzError, BaseFactor, DomainTooLarge, MetricModel,
                     PositivityViolation, SignMismatch, SpectrumSpec,
                     ToricModel, build_calabi, build_general,
                     build_orthotoric, build_toric_from_potential,
                     conformal_reflection, orthotoric_dual_potential,
                     space_form_factor)
from .verify import (CheckReport, SUITE_REGISTRY, bijection_check,
                     characteristic_polynomial, conformal_killing_suite,
                     hamiltonian_suite, jet_suite, kahler_suite,
                     mutation_suite, orthotoric_compatibility,
                     potential_suite, run_model_suites, symmetry_suite)
from .classify import (ClassSpec, ClassSpecError, build_class_model,
                       check_bf, check_extremal, check_wbf, class_factors,
                       conf_einstein, detect_class, extract_quotient,
                       make_class_F)

__version__ = "0.1.0"
