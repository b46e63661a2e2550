"""Tomographic simulation and reconstruction of the internal degrees of
freedom of a Dirac spinor from rotated marginal distributions."""

from .clifford import (BASIS_LABELS, EPSILON, METRIC, S_PAIRS, Conventions,
                       GammaBasis, GammaRep, RepKind, conjugate_representation,
                       dirac_bar, gamma_basis, make_representation,
                       trace_inner_product)
from .errors import (BadAxis, DegenerateAnchor, DiracTomoError, GridMismatch,
                     InconsistentInput, MissingFrame, NegativeWeight,
                     NonRealCovariant, NonUnitary, NoValidCandidate,
                     NotConnected, Singular, UnsupportedRep)
from .lorentz import (DirectionSample, LorentzFrame, QuadratureScheme,
                      SpinorLift, boost, direction_frame, field_kernel_recon,
                      kernel_vector_recon, lift_check, parse_frame_label,
                      rotation, spinor_lift, transform_bilinears)
from .reconstruct import (AmbiguityReport, FeasibilityReport, MarginalDataset,
                          ReconstructionReport, TomographicGroup, Verdict,
                          ambiguity_probe, constraint_residuals,
                          convert_spinor, fierz_completion,
                          reconstruct_combined, reconstruct_continuous,
                          reconstruct_majorana, recover_JS_majorana,
                          representation_feasibility, simulate_dataset)
from .spinor import (BilinearSet, DiracSpinor, RhoOperator, bilinears,
                     crawford_reconstruct, crawford_reconstruct_auto,
                     fierz_residuals, phase_distance, random_spinor,
                     rho_from_bilinears, rho_from_spinor)
from .tomography import (MarginalRecord, Protocol, frame_set,
                         marginal_coefficients, marginal_formula_check,
                         marginals, projectors, records_to_csv,
                         records_to_json, sample_shots)

__version__ = "0.1.0"
