#################################################################################
#   Copyright Amazon.com, Inc. or its affiliates. All Rights Reserved.          #
#                                                                               #
#   Licensed under the Apache License, Version 2.0 (the "License").             #
#   You may not use this file except in compliance with the License.            #
#   You may obtain a copy of the License at                                     #
#                                                                               #
#       http://www.apache.org/licenses/LICENSE-2.0                              #
#                                                                               #
#   Unless required by applicable law or agreed to in writing, software         #
#   distributed under the License is distributed on an "AS IS" BASIS,           #
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.    #
#   See the License for the specific language governing permissions and         #
#   limitations under the License.                                              #
#################################################################################
"""Multiscale decomposition laboratory modules"""
from .constants import RegularizerKind
from .constants import CommandType
from .constants import ExitCode
from .constants import (
    DEFAULT_M,
    DEFAULT_ALPHA0,
    DEFAULT_DIM,
    DEFAULT_STEPS,
    DEFAULT_J_MAX
)
from .exceptions import ConvergenceError

from .configs.config_interface import ConfigInterface
from .configs.cex_params import CexParams
from .configs.solver_options import SolverOptions
from .configs.multiscale_config import MultiscaleConfig
from .configs.experiment import ExperimentConfig, VerifyConfig, RunConfig, DenoiseConfig, ReportConfig

from .seqspace import SeqVector, norm_l1, norm_l2, norm_F, dual_norm_G, inner
from .operators import (
    LinearOp,
    derive_constants,
    eta,
    mu,
    build_counterexample_operator,
    adjoint_apply,
    operator_norm_upper,
    min_singular_estimate,
    kernel_recursion_check,
    injectivity_bound
)
from .counterexample import (
    ClaimReport,
    lambda_n,
    analytic_u,
    analytic_sigma,
    residual_closed_form,
    A_value,
    verify_claim,
    sigma_infinity
)
from .varsolve import (
    Regularizer,
    WeightedL1,
    HilbertNorm,
    TotalVariation1D,
    Certificate,
    SolveResult,
    prox_weighted_l1,
    prox_hilbert_norm,
    prox_tv_1d,
    kkt_certificate,
    zero_step_predicate,
    solve_step
)
from .multiscale import (
    StepRecord,
    RunReport,
    run_multiscale,
    check_monotonicity,
    check_minimizing,
    tnv_denoise_1d,
    contrast_experiment
)
