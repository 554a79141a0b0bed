"""qlss: classical state-vector benchmarks for the quantum linear system
problem, via scheduled adiabatic evolution and QAOA-style optimization."""

from .bench import (ScalingFit, SearchParams, SweepConfig, SweepPoint,
                    SweepResult, fit_loglog, min_runtime, sweep_epsilon,
                    sweep_kappa)
from .errors import QlssError
from .evolution import (EvolutionPlan, EvolutionResult, TrotterPropagator,
                        density_error, evolve, fidelity, plan_for_runtime)
from .hamiltonians import (GapModel, HamiltonianEmbedding, build_embedding,
                           build_general_embedding, build_indefinite_embedding,
                           build_pd_embedding, gap_lower_bound, gap_model,
                           interpolate)
from .linalg import (EigenDecomposition, apply_exp, hermitian_eigendecompose,
                     qr_orthonormalize, solve_linear)
from .problems import (GeneratorSpec, QlspInstance, generate, generate_nonhermitian,
                       generate_pd, load_instance, save_instance)
from .qaoa import (OptimizerConfig, QaoaParams, QaoaReport, apply_ansatz,
                   gradient, objective, optimize, warm_start_params)
from .schedules import Schedule, eval_exponential, eval_power_one, eval_power_p, \
    eval_vanilla, ode_oracle

__version__ = "0.1.0"

__all__ = [
    "EigenDecomposition", "EvolutionPlan", "EvolutionResult", "GapModel",
    "GeneratorSpec", "HamiltonianEmbedding", "OptimizerConfig", "QaoaParams",
    "QaoaReport", "QlspInstance", "QlssError", "ScalingFit", "Schedule",
    "SearchParams", "SweepConfig", "SweepPoint", "SweepResult",
    "TrotterPropagator", "apply_ansatz", "apply_exp", "build_embedding",
    "build_general_embedding", "build_indefinite_embedding",
    "build_pd_embedding", "density_error", "eval_exponential",
    "eval_power_one", "eval_power_p", "eval_vanilla", "evolve", "fidelity",
    "fit_loglog", "gap_lower_bound", "gap_model", "generate",
    "generate_nonhermitian", "generate_pd", "gradient",
    "hermitian_eigendecompose", "interpolate", "load_instance", "min_runtime",
    "objective", "ode_oracle", "optimize", "plan_for_runtime",
    "qr_orthonormalize", "save_instance", "solve_linear", "sweep_epsilon",
    "sweep_kappa", "warm_start_params",
]
