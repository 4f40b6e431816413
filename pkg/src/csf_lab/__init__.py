"""Numerical laboratory for the curve shortening flow of convex plane curves.

Modules
-------
geometry          grids, curvature profiles, reconstruction, polygon measures
exact_solutions   shrinking circles, Angenent ovals, the grim reaper
flow_theta        pressure and normalized flows in the tangent-angle gauge
flow_arclength    polygonal curve shortening flow and convexity diagnostics
functionals       Lyapunov functionals J and I, Wirtinger gap
asymptotics       Fourier modes, rate fits, backward limits, classification
experiments       registered batch experiments behind the ``csf-lab`` command
"""

from .errors import *  # noqa: F401,F403
from .exact_solutions import (OvalParams, backward_limit_profile, circle_pressure,
                              grim_reaper_curvature, grim_reaper_curve,
                              oval_pressure, oval_pressure_derivatives)
from .geometry import (AngleGrid, CurvatureProfile, PlanarCurve, closure_residual,
                       curvature_of_curve, enclosed_area, geometric_measures,
                       reconstruct_curve)
from .flow_theta import (FlowTrajectory, SolverControls, ThetaFlowState,
                         evolve_normalized, evolve_pressure, harnack_margin,
                         pressure_rhs)
from .flow_arclength import (ArcControls, ArcFlowState, blowup_rescale,
                             convexity_certificate, evolve_curve,
                             sturm_zero_count, total_absolute_curvature)
from .functionals import lyapunov_J, stability_I, steady_state_residual, wirtinger_gap
from .asymptotics import (Classification, classify_ancient, extract_quadrupole,
                          fit_backward_limit, fit_exponential_rate,
                          fourier_decompose, linearized_spectrum)
from .config import ExperimentConfig, parse_config, parse_configs
from .experiments import run_experiment

__version__ = "0.1.0"
