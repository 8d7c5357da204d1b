"""Spectral analysis of matrix semigroups.

Computes semigroup orbits, Laplace-transform resolvents, periodic spectral
projections and Laurent/Fourier data purely from semigroup evaluations, and
verifies the classical spectral inclusion and mapping identities against
independent eigensolver oracles.
"""

from .errors import (CatalogError, ConfigError, ConvergenceError,
                     DimensionMismatchError, DivergenceError, NumericalError,
                     OverflowBoundError, PeriodError, SgspecError)
from .operators import (GeneratorSpec, SemigroupEvaluator, catalog_build,
                        evaluate_orbit, generator_of, matrix_exp, rescale)
from .quadrature import (QuadratureConfig, contour_integral_circle,
                         laplace_resolvent, orbit_integral,
                         verify_rescale_identities)
from .spectra import (SpectrumReport, brute_force_eigen_oracle,
                      decomposition_check, hausdorff_distance, point_spectrum,
                      residual_spectrum, resolvent_map_check, spectrum_report)
from .periodic import (ProjectionFamily, build_projection_family, detect_period,
                       fourier_reconstruct_A, fourier_reconstruct_T,
                       laurent_coefficients, periodic_resolvent,
                       periodicity_criterion_check, projection_family_checks,
                       spectral_projection)
from .mapping import (MappingReport, eigenspace_intersection_check,
                      eigenspace_union_check, inclusion_checks,
                      point_mapping_check, residual_mapping_check)
from .hardy import (DiscFunction, WeightFunction, disc_rotation_semigroup,
                    hardy_projection_check, verify_hardy_spectrum,
                    weighted_seminorm)
from .cli import ScenarioConfig, run_scenario
from .report import emit_report

__version__ = "0.1.0"
