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
"""Module to contain multiscale laboratory related constants"""
from enum import Enum, IntEnum, unique


@unique
class RegularizerKind(Enum):
    """
    RegularizerKind Enumerator

    WEIGHTED_L1 is the F-norm sum_n n|u_n|.
    HILBERT_NORM is the plain (non-squared) l2 norm.
    TV_1D is the discrete total variation sum_i |u_{i+1} - u_i|.
    """
    WEIGHTED_L1 = "weighted-l1"
    HILBERT_NORM = "hilbert"
    TV_1D = "tv-1d"


@unique
class CommandType(Enum):
    """
    CLI Command Type
    """
    VERIFY = "verify"
    RUN = "run"
    DENOISE = "denoise"
    REPORT = "report"


@unique
class ExitCode(IntEnum):
    """
    CLI Exit Code
    """
    SUCCESS = 0
    SCIENTIFIC_FAILURE = 1
    USAGE_ERROR = 2


DEFAULT_M = 6.0
DEFAULT_ALPHA0 = 1.0
DEFAULT_DIM = 64
DEFAULT_STEPS = 8
DEFAULT_J_MAX = 200
DEFAULT_N_MAX = 30
DEFAULT_DENOISE_LAMBDA0 = 1.0
DEFAULT_DENOISE_STEPS = 12
DEFAULT_DENOISE_GROWTH = 2.0

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 200000
DEFAULT_CHECK_EVERY = 10
DEFAULT_POWER_ITERS = 100
DEFAULT_RESTART_SLACK = 1e-13
DEFAULT_SEED = 0

# safety factor applied to the power-iteration estimate of the spectral norm
NORM_SAFETY_FACTOR = 1.01
# every accepted counterexample truncation must lose less than this in col(1)
MAX_TAIL_ERROR = 1e-12
# relative tie tolerance when locating the maximiser of |A_{j,n1}|
ARGMAX_TIE_RTOL = 1e-12
# relative tolerance of the identity A_{n1,n1} * 2 * lambda_n == 1
CLAIM_IDENTITY_TOL = 1e-12
# residuals may grow by this much between steps and still count as monotone
MONOTONICITY_SLACK = 1e-12
# dense SVD is used for the smallest singular value up to this dimension
SVD_MAX_DIM = 256
# relative tolerance of the partial-sum identity when re-checking a saved report
PARTIAL_SUM_TOL = 1e-12

SEED_ENV_VAR = "MSCALE_SEED"
