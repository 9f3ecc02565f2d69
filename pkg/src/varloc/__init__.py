"""Percentile (value-at-risk) robust 2D target localization from ranges."""

from .baselines import SolverDegenerateError, gd_rls, srls
from .bench import (
    BenchConfig,
    ConfigError,
    TrialRecord,
    emit_report,
    generate_scenario,
    run_monte_carlo,
)
from .core import (
    Estimate,
    Point2,
    Scenario,
    atom_deviation,
    empirical_var,
    load_scenario,
    objective,
    percentile,
    save_scenario,
    scalar_percentile_minimize,
)
from .geometry import (
    Circle,
    CurveComponent,
    DegeneratePairError,
    Ellipse,
    HalfHyperbola,
    LocalFrame,
    PairCase,
    Singleton,
    build_local_frame,
    circle_point,
    classify_pair,
    ellipse_point,
    hyperbola_point,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .majorizer import (
    MajorizerSet,
    build_majorizer,
    discretize,
    export_candidates_csv,
    norm_bound,
    truncation_bound,
)
from .solver import LatticeBudgetError, oracle_grid, rpte

__version__ = "0.1.0"

__all__ = [
    "BenchConfig",
    "Circle",
    "ConfigError",
    "CurveComponent",
    "DegeneratePairError",
    "Ellipse",
    "Estimate",
    "HalfHyperbola",
    "KERNEL_BACKEND",
    "LatticeBudgetError",
    "LocalFrame",
    "MajorizerSet",
    "PairCase",
    "Point2",
    "Scenario",
    "Singleton",
    "SolverDegenerateError",
    "TrialRecord",
    "atom_deviation",
    "build_local_frame",
    "build_majorizer",
    "circle_point",
    "classify_pair",
    "discretize",
    "ellipse_point",
    "emit_report",
    "empirical_var",
    "export_candidates_csv",
    "gd_rls",
    "generate_scenario",
    "hyperbola_point",
    "load_scenario",
    "norm_bound",
    "objective",
    "oracle_grid",
    "percentile",
    "rpte",
    "run_monte_carlo",
    "save_scenario",
    "scalar_percentile_minimize",
    "srls",
    "truncation_bound",
]
