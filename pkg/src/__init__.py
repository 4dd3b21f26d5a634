"""
로그 오목 함수 밸류에이션 실험실 패키지
"""

__version__ = "0.3.0"

from .exceptions import ValuationLabError
from .polytope_core import Polytope, LinearMap, HalfSpace, t_lambda, cube
from .convex_fn import PLConvexFunction, cone_fn, indicator_fn
from .log_concave import LogConcaveFunction, characteristic_fn, exp_cone_fn
from .functionals import SupportEvaluator, V0_pow, Vn_pow, level_set_body, moment_vector_fn
from .valuation_lab import (
    BlackBoxValuation,
    ValuationSpec,
    check_valuation_identity,
    classify_mink,
    classify_real,
)
from .pair_families import pair_generator
from .limit_experiments import limit_experiment_c1c2, limit_experiment_c3d4, zeta_derivative_check

__all__ = [
    "ValuationLabError",
    "Polytope",
    "LinearMap",
    "HalfSpace",
    "t_lambda",
    "cube",
    "PLConvexFunction",
    "cone_fn",
    "indicator_fn",
    "LogConcaveFunction",
    "characteristic_fn",
    "exp_cone_fn",
    "SupportEvaluator",
    "V0_pow",
    "Vn_pow",
    "level_set_body",
    "moment_vector_fn",
    "BlackBoxValuation",
    "ValuationSpec",
    "check_valuation_identity",
    "classify_mink",
    "classify_real",
    "pair_generator",
    "limit_experiment_c1c2",
    "limit_experiment_c3d4",
    "zeta_derivative_check",
]
