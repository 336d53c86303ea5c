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
"""Closed-form objects of the divergent multiscale example and the claim verifier."""
import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from mscale_lab.configs.cex_params import CexParams
from mscale_lab.configs.config_interface import ConfigInterface
from mscale_lab.constants import ARGMAX_TIE_RTOL, CLAIM_IDENTITY_TOL, DEFAULT_J_MAX
from mscale_lab.operators import build_counterexample_operator, derive_constants, eta, mu
from mscale_lab.seqspace import SeqVector

CLAIM_CSV_HEADER = ["M", "alpha0", "n", "n1", "lambda_n", "A_max_index", "A_n1n1", "target", "margin", "pass"]


def lambda_n(n: int, p: CexParams) -> float:
    """
    Returns lambda_n = alpha0 M^n.

    Args:
        n (int): step, n >= 0.
        p (CexParams): constant pack.

    Returns:
        float: the regularization parameter of step n.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be a non-negative integer, given {}!".format(n))
    return p.alpha0 * p.M ** n


def analytic_u(n: int, p: CexParams, dim: int) -> SeqVector:
    """
    Returns u_n = b/(n+2) e_{n+2}.

    Args:
        n (int): step, n >= 0.
        p (CexParams): constant pack.
        dim (int): truncation dimension, at least n + 2.

    Returns:
        SeqVector: the n-th multiscale increment.
    """
    n, dim = int(n), int(dim)
    if n < 0:
        raise ValueError("n must be a non-negative integer, given {}!".format(n))
    if n + 2 > dim:
        raise ValueError("dim must be at least n+2={}, given {}!".format(n + 2, dim))
    values = np.zeros(dim)
    values[n + 1] = p.b / (n + 2)
    return SeqVector(values)


def analytic_sigma(n: int, p: CexParams, dim: int) -> SeqVector:
    """
    Returns sigma_n = sum_{j<=n} u_j, with entries b/j at indices 2..n+2.

    n = -1 gives the empty partial sum (the zero vector), the shift of step 0.

    Args:
        n (int): step, n >= -1.
        p (CexParams): constant pack.
        dim (int): truncation dimension, at least n + 2.

    Returns:
        SeqVector: the n-th partial sum.
    """
    n, dim = int(n), int(dim)
    if n < -1:
        raise ValueError("n must be at least -1, given {}!".format(n))
    if n + 2 > dim:
        raise ValueError("dim must be at least n+2={}, given {}!".format(n + 2, dim))
    values = np.zeros(dim)
    indices = np.arange(2, n + 3)
    values[indices - 1] = p.b / indices
    return SeqVector(values)


def residual_closed_form(n: int, p: CexParams, dim: int) -> SeqVector:
    """
    Returns Lambda(e_1) - Lambda(sigma_n) truncated to dim rows: (eta + mu)_{n1+1}
    at index n1+1 and eta_m at indices n1+2..dim, with n1 = n + 2.

    The sum in the residual is taken to start at n1+1, the only start index
    consistent with A_{1,n1} and A_{n1,n1}.

    Args:
        n (int): step, n >= 0.
        p (CexParams): constant pack.
        dim (int): truncation dimension, at least n + 3.

    Returns:
        SeqVector: the residual.
    """
    n, dim = int(n), int(dim)
    if n < 0:
        raise ValueError("n must be a non-negative integer, given {}!".format(n))
    if n + 3 > dim:
        raise ValueError("dim must be at least n+3={}, given {}!".format(n + 3, dim))
    n1 = n + 2
    values = np.zeros(dim)
    values[n1] = eta(n1 + 1, p) + mu(n1 + 1, p)
    for m in range(n1 + 2, dim + 1):
        values[m - 1] = eta(m, p)
    return SeqVector(values)


def residual_norm_squared_closed_form(n: int, p: CexParams) -> float:
    """
    Returns the untruncated ||Lambda(e_1) - Lambda(sigma_n)||^2
    = c0 [(1 - delta)^2 + 1/(M - 1)] / M^{n1+1}.

    Args:
        n (int): step, n >= 0.
        p (CexParams): constant pack.

    Returns:
        float: the squared residual norm.
    """
    scale = p.c0 * p.M ** (-(int(n) + 3))
    return scale * ((1.0 - p.delta) ** 2 + 1.0 / (p.M - 1.0))


def A_value(j: int, n: int, p: CexParams) -> float:
    """
    Returns A_{j,n1} = (1/j) <Lambda(e_1) - Lambda(sigma_n), Lambda(e_j)> in closed form.

    The j = 1 value sums the geometric tail exactly.

    Args:
        j (int): index, j >= 1.
        n (int): step, n >= 0 (n1 = n + 2).
        p (CexParams): constant pack.

    Returns:
        float: A_{j,n1}.
    """
    j, n = int(j), int(n)
    if j < 1:
        raise ValueError("j must be greater than 0, given {}!".format(j))
    if n < 0:
        raise ValueError("n must be a non-negative integer, given {}!".format(n))
    n1 = n + 2
    M, delta, b, c0 = p.M, p.delta, p.b, p.c0
    if j == 1:
        e = eta(n1 + 1, p)
        return (e + mu(n1 + 1, p)) * e + c0 * M ** (-(n1 + 1)) / (M - 1.0)
    if j < n1:
        return 0.0
    if j == n1:
        return c0 * delta * (1.0 - delta) / b * M ** (-(n1 + 1))
    if j == n1 + 1:
        return c0 / b * M ** (-(n1 + 1)) * ((1.0 - delta) ** 2 + delta / M)
    return c0 / b * M ** (-j) * ((1.0 - delta) + delta / M)


def a1_upper_bound(n: int, p: CexParams) -> float:
    """
    Returns the looser bound c0 / M^{n1+1} * M / (M - 1) on A_{1,n1}.

    Args:
        n (int): step, n >= 0.
        p (CexParams): constant pack.

    Returns:
        float: the bound.
    """
    return p.c0 * p.M ** (-(int(n) + 3)) * p.M / (p.M - 1.0)


def tail_comparison_holds(M: float, delta: float) -> bool:
    """
    Returns whether (1 - delta)/M + delta/M^2 <= (1 - delta)^2 + delta/M, which
    lets A_{n1+1,n1} dominate every A_{n1+s,n1}, s >= 2.

    Args:
        M (float): scale growth factor.
        delta (float): delta.

    Returns:
        bool: True if the comparison holds.
    """
    return (1.0 - delta) / M + delta / M ** 2 <= (1.0 - delta) ** 2 + delta / M


def sigma_norm_x_closed_form(n: int, p: CexParams) -> float:
    """
    Returns ||sigma_n||_X = b sum_{j=2}^{n+2} 1/j.

    Args:
        n (int): step, n >= -1.
        p (CexParams): constant pack.

    Returns:
        float: the l1 norm of the partial sum.
    """
    return p.b * math.fsum(1.0 / j for j in range(2, int(n) + 3))


def divergence_index(p: CexParams, factor: float = 2.0, reference_n: int = 8,
                     n_max: int = 10 ** 6) -> Optional[int]:
    """
    Returns the first step n whose ||sigma_n||_X exceeds factor * ||sigma_{reference_n}||_X.

    Args:
        p (CexParams): constant pack.
        factor (float): growth factor to exceed.
        reference_n (int): reference step.
        n_max (int): last step searched.

    Returns:
        Optional[int]: the step, or None when not reached by n_max.
    """
    threshold = float(factor) * sigma_norm_x_closed_form(reference_n, p)
    norms = p.b * np.cumsum(1.0 / np.arange(2, int(n_max) + 3, dtype=np.float64))
    hits = np.flatnonzero(norms > threshold)
    return int(hits[0]) if hits.size else None


def sigma_infinity(p: CexParams, dim: int) -> Tuple[SeqVector, float]:
    """
    Returns sigma_inf = sum_{j>=2} (b/j) e_j truncated at dim, together with
    ||Lambda(sigma_inf) - Lambda(e_1)||_2 over rows 1..dim-1.

    Args:
        p (CexParams): constant pack.
        dim (int): truncation dimension, at least 3.

    Returns:
        Tuple[SeqVector, float]: the l2 limit of sigma_n and the defect.
    """
    dim = int(dim)
    A = build_counterexample_operator(p, dim)
    sigma = analytic_sigma(dim - 2, p, dim)
    difference = A.matvec(sigma.values) - A.matvec(SeqVector.basis(1, dim).values)
    return sigma, float(np.linalg.norm(difference[:dim - 1]))


class ClaimReport(ConfigInterface):
    """
    Outcome of checking |A_{j,n1}| <= A_{n1,n1} = 1/(2 lambda_n) for one step.
    """
    def __init__(self,
                 params: CexParams,
                 n: int,
                 lambda_n: float,
                 a_values: Dict[int, float],
                 max_index: int,
                 target: float,
                 tail_bound: float,
                 identity_error: float,
                 quadratic: float,
                 margin: float,
                 passed: bool,
                 reason: str = "") -> None:
        """
        Initialize ClaimReport

        Args:
            params (CexParams): constant pack the claim was checked for.
            n (int): step.
            lambda_n (float): regularization parameter of the step.
            a_values (Dict[int, float]): A_{j,n1} for j <= J_max.
            max_index (int): index attaining max |A_{j,n1}|.
            target (float): 1 / (2 lambda_n).
            tail_bound (float): bound on sup_{j > J_max} |A_{j,n1}|.
            identity_error (float): |A_{n1,n1} 2 lambda_n - 1|.
            quadratic (float): 2 delta^2 + (1/M - 3) delta + 1.
            margin (float): target minus the largest competitor |A_{j,n1}|, j != n1.
            passed (bool): whether the claim holds.
            reason (str): why the claim failed, empty when it passed.
        """
        super().__init__()
        self._params = params
        self._n = int(n)
        self._lambda_n = float(lambda_n)
        self._a_values = {int(j): float(v) for j, v in a_values.items()}
        self._max_index = int(max_index)
        self._target = float(target)
        self._tail_bound = float(tail_bound)
        self._identity_error = float(identity_error)
        self._quadratic = float(quadratic)
        self._margin = float(margin)
        self._passed = bool(passed)
        self._reason = str(reason)

    @property
    def params(self) -> CexParams:
        return self._params

    @property
    def n(self) -> int:
        return self._n

    @property
    def n1(self) -> int:
        return self._n + 2

    @property
    def lambda_n(self) -> float:
        return self._lambda_n

    @property
    def a_values(self) -> Dict[int, float]:
        return dict(self._a_values)

    @property
    def max_index(self) -> int:
        return self._max_index

    @property
    def target(self) -> float:
        return self._target

    @property
    def tail_bound(self) -> float:
        return self._tail_bound

    @property
    def identity_error(self) -> float:
        return self._identity_error

    @property
    def quadratic(self) -> float:
        return self._quadratic

    @property
    def margin(self) -> float:
        return self._margin

    @property
    def strict(self) -> bool:
        """
        Returns whether every competitor stays strictly below the target.

        Returns:
            bool: True if margin > 0.
        """
        return self._margin > 0.0

    @property
    def passed(self) -> bool:
        return self._passed

    @property
    def reason(self) -> str:
        return self._reason

    def to_json(self) -> dict:
        """
        Returns json object of the claim report in dict format

        Returns:
            dict: json object of the claim report.
        """
        return {"M": self._params.M,
                "alpha0": self._params.alpha0,
                "params": self._params.to_json(),
                "n": self._n,
                "n1": self.n1,
                "lambda_n": self._lambda_n,
                "A_values": {str(j): v for j, v in sorted(self._a_values.items())},
                "max_index": self._max_index,
                "target": self._target,
                "tail_bound": self._tail_bound,
                "identity_error": self._identity_error,
                "quadratic": self._quadratic,
                "margin": self._margin,
                "strict": self.strict,
                "pass": self._passed,
                "reason": self._reason}

    @staticmethod
    def from_json(json_obj: Union[dict, str]) -> 'ClaimReport':
        """
        Returns ClaimReport instantiation from json object.

        Args:
            json_obj (Union[dict, str]): json object in dict format

        Returns:
            ClaimReport: claim report created from given json object
        """
        json_obj = ConfigInterface.load(json_obj)
        return ClaimReport(params=CexParams.from_json(json_obj['params']),
                           n=json_obj['n'],
                           lambda_n=json_obj['lambda_n'],
                           a_values={int(j): v for j, v in json_obj['A_values'].items()},
                           max_index=json_obj['max_index'],
                           target=json_obj['target'],
                           tail_bound=json_obj['tail_bound'],
                           identity_error=json_obj['identity_error'],
                           quadratic=json_obj['quadratic'],
                           margin=json_obj['margin'],
                           passed=json_obj['pass'],
                           reason=json_obj.get('reason', ""))

    def copy(self) -> 'ClaimReport':
        return ClaimReport.from_json(self.to_json())

    def csv_fields(self) -> list:
        """
        Returns the CSV fields in CLAIM_CSV_HEADER order.

        Returns:
            list: the row values.
        """
        return [repr(self._params.M), repr(self._params.alpha0), self._n, self.n1, repr(self._lambda_n),
                self._max_index, repr(self._a_values[self.n1]), repr(self._target), repr(self._margin),
                str(self._passed).lower()]

    def to_csv_row(self) -> str:
        """
        Returns the report as one RFC-4180 CSV row without line terminator.

        Returns:
            str: the CSV row.
        """
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="").writerow(self.csv_fields())
        return buffer.getvalue()

    def __eq__(self, other: 'ClaimReport') -> bool:
        return isinstance(other, ClaimReport) and self.to_json() == other.to_json()

    def __ne__(self, other: 'ClaimReport') -> bool:
        return not self.__eq__(other)

    def __str__(self) -> str:
        return "(M=%g, n=%d, max_index=%d, margin=%g, pass=%s)" % (self._params.M, self._n, self._max_index,
                                                                   self._margin, self._passed)

    def __repr__(self) -> str:
        return "ClaimReport" + str(self)


def verify_claim(n: int, p: CexParams, j_max: int = DEFAULT_J_MAX) -> ClaimReport:
    """
    Checks |A_{j,n1}| <= A_{n1,n1} = 1/(2 lambda_n) for j <= j_max, and beyond
    j_max through the geometric tail bound.

    Args:
        n (int): step, n >= 0.
        p (CexParams): constant pack.
        j_max (int): last index evaluated explicitly, at least n + 4.

    Returns:
        ClaimReport: the verification outcome.
    """
    n, j_max = int(n), int(j_max)
    if j_max < n + 4:
        raise ValueError("j_max must be at least n+4={}, given {}!".format(n + 4, j_max))
    n1 = n + 2
    a_values = {j: A_value(j, n, p) for j in range(1, j_max + 1)}
    lam = lambda_n(n, p)
    target = 1.0 / (2.0 * lam)

    magnitudes = np.abs(np.array([a_values[j] for j in range(1, j_max + 1)]))
    peak = float(np.max(magnitudes))
    max_index = int(np.flatnonzero(magnitudes >= peak * (1.0 - ARGMAX_TIE_RTOL))[0]) + 1
    tail_bound = p.c0 / p.b * p.M ** (-(j_max + 1)) * ((1.0 - p.delta) + p.delta / p.M)
    identity_error = abs(a_values[n1] * 2.0 * lam - 1.0)
    competitors = np.delete(magnitudes, n1 - 1)
    margin = target - max(float(np.max(competitors)), tail_bound)

    reasons = []
    if max_index != n1:
        reasons.append("max |A_j| attained at j={} instead of n1={}".format(max_index, n1))
    if identity_error > CLAIM_IDENTITY_TOL:
        reasons.append("A_n1n1 * 2 lambda_n deviates from 1 by {:.3e}".format(identity_error))
    if tail_bound > target:
        reasons.append("tail bound {:.3e} exceeds target {:.3e}".format(tail_bound, target))
    if reasons and p.quadratic_condition > 0.0:
        reasons.append("quadratic condition {:.6g} > 0".format(p.quadratic_condition))
    passed = not reasons
    if not passed:
        logging.info("[Verify] claim fails for M={} n={}: {}".format(p.M, n, "; ".join(reasons)))
    return ClaimReport(params=p, n=n, lambda_n=lam, a_values=a_values, max_index=max_index, target=target,
                       tail_bound=tail_bound, identity_error=identity_error, quadratic=p.quadratic_condition,
                       margin=margin, passed=passed, reason="; ".join(reasons))


def verify_grid(ms: Iterable[float], alpha0: float, n_max: int,
                j_max: int = DEFAULT_J_MAX, workers: int = 1) -> List[ClaimReport]:
    """
    Runs verify_claim over every (M, n) cell, n = 0..n_max.

    Cells are independent and may be evaluated concurrently; the result is
    ordered by (M as given, n).

    Args:
        ms (Iterable[float]): scale growth factors.
        alpha0 (float): lambda_0 shared by all cells.
        n_max (int): last step.
        j_max (int): last explicitly evaluated index.
        workers (int): number of worker threads.

    Returns:
        List[ClaimReport]: one report per cell.
    """
    packs = [derive_constants(M, alpha0) for M in ms]
    cells = [(p, n) for p in packs for n in range(int(n_max) + 1)]
    if int(workers) <= 1:
        return [verify_claim(n, p, j_max) for p, n in cells]
    with ThreadPoolExecutor(max_workers=int(workers)) as executor:
        return list(executor.map(lambda cell: verify_claim(cell[1], cell[0], j_max), cells))
