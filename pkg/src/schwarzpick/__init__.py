"""Sharp Schwarz-Pick regions for bounded complex harmonic functions on the unit ball."""
__version__ = "0.1.0"

from .errors import CapabilityError, ConsistencyError, DomainError, SolverError
from .extremal import (ExtremalProfile, LagrangeParams, R_I_values, build_extremal,
                       build_extremals, jacobian, kernel_A, solve_lagrange)
from .poisson import (CapSumData, GriddedData, ZonalData, classical_schwarz_bound,
                      evaluate_F_on_axis, evaluate_poisson_general, functional_L,
                      poisson_kernel)
from .region import (Region, RegionPolygon, SupportCurve, WitnessSpec, boundary_point,
                     build_region, contains, rotated_contains, support_value,
                     witness_function)
from .zonal import (CapThreshold, ZonalRule, cap_measure, integrate_zonal,
                    integrate_zonal_split, make_rule, solve_cap_threshold)
