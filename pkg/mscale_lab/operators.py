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
"""Column-defined bounded linear operators l1 -> l2 and the counterexample operator."""
import csv
import io
import logging
import math
import os
from typing import Iterable, Optional, Tuple

import numpy as np
import scipy.linalg

from mscale_lab.configs.cex_params import CexParams
from mscale_lab.constants import (
    DEFAULT_POWER_ITERS, DEFAULT_SEED,
    NORM_SAFETY_FACTOR, SEED_ENV_VAR, SVD_MAX_DIM
)
from mscale_lab.exceptions import ConvergenceError
from mscale_lab.seqspace import SeqVector


def resolve_seed(seed: Optional[int] = None) -> int:
    """
    Returns seed, falling back to the MSCALE_SEED environment variable.

    Args:
        seed (Optional[int]): explicit seed.

    Returns:
        int: the seed to use.
    """
    if seed is not None:
        return int(seed)
    value = os.environ.get(SEED_ENV_VAR)
    if value is None or not value.strip():
        return DEFAULT_SEED
    try:
        return int(value)
    except ValueError as ex:
        raise ValueError("{} must be an integer, given {}!".format(SEED_ENV_VAR, value)) from ex


class LinearOp(object):
    """
    Dense bounded linear map R^dim_in -> R^dim_out given by its columns.

    col(j) is the image of e_j; apply and adjoint_apply both read the same
    column matrix, which is frozen at construction.
    """
    def __init__(self, matrix: np.ndarray, name: str = "matrix", tail_error: float = 0.0) -> None:
        """
        Initialize LinearOp

        Args:
            matrix (np.ndarray): dim_out x dim_in matrix whose columns are col(j).
            name (str): label used in logs and reports.
            tail_error (float): squared l2 mass dropped by the truncation.
        """
        matrix = np.array(matrix, dtype=np.float64, copy=True)
        if matrix.ndim != 2 or matrix.size == 0:
            raise ValueError("LinearOp expects a non-empty 2D matrix, given shape {}!".format(matrix.shape))
        if not np.all(np.isfinite(matrix)):
            raise ValueError("LinearOp entries must be finite!")
        matrix.setflags(write=False)
        self._matrix = matrix
        self._name = str(name)
        self._tail_error = float(tail_error)
        self._norm_cache = dict()

    @staticmethod
    def from_columns(columns: Iterable[SeqVector], dim_out: Optional[int] = None) -> 'LinearOp':
        """
        Returns the operator whose j-th column is the j-th given vector.

        Args:
            columns (Iterable[SeqVector]): images of e_1, e_2, ...
            dim_out (Optional[int]): output dimension, defaults to the largest column.

        Returns:
            LinearOp: the operator.
        """
        columns = list(columns)
        if not columns:
            raise ValueError("LinearOp requires at least one column!")
        dim_out = int(dim_out or max(col.dim for col in columns))
        return LinearOp(np.column_stack([col.padded(dim_out).values[:dim_out] for col in columns]))

    @staticmethod
    def identity(dim: int) -> 'LinearOp':
        """
        Returns the identity on R^dim.

        Args:
            dim (int): dimension.

        Returns:
            LinearOp: the identity operator.
        """
        return LinearOp(np.eye(int(dim)), name="identity")

    @property
    def dim_in(self) -> int:
        return int(self._matrix.shape[1])

    @property
    def dim_out(self) -> int:
        return int(self._matrix.shape[0])

    @property
    def matrix(self) -> np.ndarray:
        """
        Returns the read-only column matrix.

        Returns:
            np.ndarray: dim_out x dim_in matrix.
        """
        return self._matrix

    @property
    def name(self) -> str:
        return self._name

    @property
    def tail_error(self) -> float:
        """
        Returns the squared l2 mass dropped by truncating col(1).

        Returns:
            float: truncation error, 0 for finite-dimensional operators.
        """
        return self._tail_error

    def cached_norm(self, key: tuple) -> Optional[float]:
        """
        Returns the norm bound stored under key, None if absent.

        Args:
            key (tuple): (iters, seed) of the power iteration.

        Returns:
            Optional[float]: the stored bound.
        """
        return self._norm_cache.get(key)

    def store_norm(self, key: tuple, value: float) -> None:
        """
        Stores a norm bound under key.

        Args:
            key (tuple): (iters, seed) of the power iteration.
            value (float): the bound.
        """
        self._norm_cache[key] = float(value)

    def col(self, j: int) -> SeqVector:
        """
        Returns col(j), the image of e_j.

        Args:
            j (int): logical column index, 1 <= j <= dim_in.

        Returns:
            SeqVector: the column.
        """
        j = int(j)
        if not 1 <= j <= self.dim_in:
            raise ValueError("column index must be in [1, {}], given {}!".format(self.dim_in, j))
        return SeqVector(self._matrix[:, j - 1])

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Raw A x on numpy arrays of length dim_in."""
        return self._matrix @ x

    def rmatvec(self, w: np.ndarray) -> np.ndarray:
        """Raw A^T w on numpy arrays of length dim_out."""
        return self._matrix.T @ w

    def apply(self, gamma: SeqVector) -> SeqVector:
        """
        Returns sum_j gamma_j col(j).

        Args:
            gamma (SeqVector): input with at most dim_in entries (zero-padded).

        Returns:
            SeqVector: the image, dim_out entries.
        """
        return SeqVector(self.matvec(fit_dim(gamma, self.dim_in, "input")))

    def adjoint_apply(self, w: SeqVector) -> SeqVector:
        """
        Returns the vector whose entry j is <w, col(j)>.

        Args:
            w (SeqVector): output-side vector with at most dim_out entries.

        Returns:
            SeqVector: the adjoint image, dim_in entries.
        """
        return SeqVector(self.rmatvec(fit_dim(w, self.dim_out, "output")))

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self._matrix))

    def to_csv(self) -> str:
        """
        Returns the matrix as row-major RFC-4180 CSV text.

        Returns:
            str: one CSV row per matrix row.
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\r\n")
        for row in self._matrix:
            writer.writerow([repr(float(x)) for x in row])
        return buffer.getvalue()

    def __str__(self) -> str:
        return "(name=%s, dim_in=%d, dim_out=%d)" % (self._name, self.dim_in, self.dim_out)

    def __repr__(self) -> str:
        return "LinearOp" + str(self)


def fit_dim(v: SeqVector, dim: int, side: str) -> np.ndarray:
    """
    Returns v's coefficients zero-padded to dim, rejecting non-zero overflow.

    Args:
        v (SeqVector): the vector.
        dim (int): the operator-side dimension.
        side (str): "input" or "output", for the error message.

    Returns:
        np.ndarray: coefficients of length dim.
    """
    if not isinstance(v, SeqVector):
        raise ValueError("Expected SeqVector type but received {}.".format(type(v)))
    values = v.padded(dim).values
    if values.size > dim:
        if np.any(values[dim:] != 0.0):
            raise ValueError("{} vector has {} entries, operator accepts {}!".format(side, v.dim, dim))
        values = values[:dim]
    return values


def derive_constants(M: float, alpha0: float) -> CexParams:
    """
    Returns the constant pack delta = (3 - 1/M)/4, b = delta(1-delta)(M-1)/(2M),
    c0 = b M^3 / (2 alpha0 delta (1-delta)).

    The pack's divergence_guaranteed flag reports whether (3 - 1/M)^2 >= 8.

    Args:
        M (float): scale growth factor, > 1 (the analysis assumes M >= 2).
        alpha0 (float): lambda_0, > 0.

    Returns:
        CexParams: the constant pack.
    """
    M, alpha0 = float(M), float(alpha0)
    if not M > 1.0:
        raise ValueError("M must be greater than 1, given {}!".format(M))
    if not alpha0 > 0.0:
        raise ValueError("alpha0 must be a positive float value, given {}!".format(alpha0))
    if M < 2.0:
        logging.warning("[Operators] M={} is below 2, outside the analysed range.".format(M))
    delta = (3.0 - 1.0 / M) / 4.0
    b = delta * (1.0 - delta) * (M - 1.0) / (2.0 * M)
    c0 = b * M ** 3 / (2.0 * alpha0 * delta * (1.0 - delta))
    return CexParams(M=M, alpha0=alpha0, delta=delta, b=b, c0=c0)


def eta(j: int, p: CexParams) -> float:
    """
    Returns eta_j = sqrt(c0 / M^j), evaluated in log space.

    Args:
        j (int): index >= 1.
        p (CexParams): constant pack.

    Returns:
        float: eta_j (underflows to 0 for astronomically large j).
    """
    if int(j) < 1:
        raise ValueError("j must be greater than 0, given {}!".format(j))
    return math.exp(0.5 * (math.log(p.c0) - int(j) * math.log(p.M)))


def mu(j: int, p: CexParams) -> float:
    """
    Returns mu_j = -delta eta_j.

    Args:
        j (int): index >= 1.
        p (CexParams): constant pack.

    Returns:
        float: mu_j.
    """
    return -p.delta * eta(j, p)


def eta_array(indices: np.ndarray, p: CexParams) -> np.ndarray:
    """Vectorized eta over an integer index array."""
    indices = np.asarray(indices, dtype=np.float64)
    return np.exp(0.5 * (math.log(p.c0) - indices * math.log(p.M)))


def build_counterexample_operator(p: CexParams, dim: int, dim_out: Optional[int] = None) -> LinearOp:
    """
    Returns the dim-column truncation of the counterexample operator.

    col(1) = sum_{m>=2} eta_m e_m + mu_2 e_2 and, for j >= 2,
    col(j) = (j/b)((eta_j + mu_j) e_j - mu_{j+1} e_{j+1}); rows beyond
    dim_out are dropped. With the default dim_out = dim the matrix is square.

    Args:
        p (CexParams): constant pack.
        dim (int): number of columns D, at least 3.
        dim_out (Optional[int]): number of kept rows, at least dim.

    Returns:
        LinearOp: the truncated operator; tail_error records the col(1) loss.
    """
    dim = int(dim)
    dim_out = dim if dim_out is None else int(dim_out)
    if dim < 3:
        raise ValueError("dim must be at least 3, given {}!".format(dim))
    if dim_out < dim:
        raise ValueError("dim_out must be at least dim={}, given {}!".format(dim, dim_out))

    rows = np.arange(1, dim_out + 2)
    etas = eta_array(rows, p)
    mus = -p.delta * etas
    matrix = np.zeros((dim_out, dim))
    matrix[2:, 0] = etas[2:dim_out]
    matrix[1, 0] = etas[1] + mus[1]
    for j in range(2, dim + 1):
        scale = j / p.b
        matrix[j - 1, j - 1] = scale * (etas[j - 1] + mus[j - 1])
        if j < dim_out:
            matrix[j, j - 1] = -scale * mus[j]
    tail_error = p.tail_error(dim_out)
    logging.debug("[Operators] built counterexample operator D={} rows={} tail={:.3e}".format(dim, dim_out,
                                                                                           tail_error))
    return LinearOp(matrix, name="counterexample", tail_error=tail_error)


def adjoint_apply(A: LinearOp, w: SeqVector) -> SeqVector:
    """
    Returns the vector whose entry j is <w, col(j)>.

    Args:
        A (LinearOp): the operator.
        w (SeqVector): output-side vector.

    Returns:
        SeqVector: A^T w.
    """
    if not isinstance(A, LinearOp):
        raise ValueError("Expected LinearOp type but received {}.".format(type(A)))
    return A.adjoint_apply(w)


def operator_norm_upper(A: LinearOp, iters: int = DEFAULT_POWER_ITERS, seed: Optional[int] = None) -> float:
    """
    Returns an upper bound on the spectral norm of A.

    Power iteration on A^T A from a seeded random start, multiplied by the
    safety factor and capped by the Frobenius norm. Results are cached on
    the operator per (iters, seed).

    Args:
        A (LinearOp): the operator.
        iters (int): power iterations, at least 1.
        seed (Optional[int]): start vector seed, MSCALE_SEED when None.

    Returns:
        float: the norm bound.
    """
    iters = int(iters)
    if iters < 1:
        raise ValueError("iters must be greater than 0, given {}!".format(iters))
    seed = resolve_seed(seed)
    key = (iters, seed)
    cached = A.cached_norm(key)
    if cached is not None:
        return cached

    frobenius = A.frobenius_norm()
    estimate = 0.0
    if frobenius > 0.0:
        x = np.random.default_rng(seed).standard_normal(A.dim_in)
        x /= np.linalg.norm(x)
        for _ in range(iters):
            y = A.rmatvec(A.matvec(x))
            norm_y = np.linalg.norm(y)
            if norm_y == 0.0:
                break
            estimate = math.sqrt(norm_y)
            x = y / norm_y
    bound = min(NORM_SAFETY_FACTOR * estimate, frobenius)
    A.store_norm(key, bound)
    return bound


def min_singular_estimate(A: LinearOp,
                          max_iter: int = 1000,
                          tol: float = 1e-12,
                          method: Optional[str] = None,
                          seed: Optional[int] = None) -> float:
    """
    Returns an estimate of the smallest singular value of A.

    Dense SVD up to SVD_MAX_DIM columns, inverse power iteration on the
    normal matrix above (or when method="inverse").

    Args:
        A (LinearOp): operator with dim_in <= dim_out.
        max_iter (int): inverse iteration budget.
        tol (float): relative change that stops the inverse iteration.
        method (Optional[str]): "svd", "inverse" or None for automatic.
        seed (Optional[int]): start vector seed for the inverse iteration.

    Returns:
        float: the estimate.
    """
    if A.dim_in > A.dim_out:
        raise ValueError("min_singular_estimate requires dim_in <= dim_out, given {} > {}!".format(A.dim_in,
                                                                                                   A.dim_out))
    method = method or ("svd" if A.dim_in <= SVD_MAX_DIM else "inverse")
    if method == "svd":
        return float(np.min(scipy.linalg.svdvals(A.matrix)))
    if method != "inverse":
        raise ValueError("method must be 'svd' or 'inverse', given {}!".format(method))

    normal = A.matrix.T @ A.matrix
    try:
        factor = scipy.linalg.cho_factor(normal)
    except np.linalg.LinAlgError:
        logging.info("[Operators] normal matrix is numerically singular.")
        return 0.0
    x = np.random.default_rng(resolve_seed(seed)).standard_normal(A.dim_in)
    x /= np.linalg.norm(x)
    previous = None
    for iteration in range(int(max_iter)):
        y = scipy.linalg.cho_solve(factor, x)
        norm_y = np.linalg.norm(y)
        x = y / norm_y
        eigenvalue = 1.0 / norm_y
        if previous is not None and abs(eigenvalue - previous) <= tol * eigenvalue:
            return math.sqrt(eigenvalue)
        previous = eigenvalue
    raise ConvergenceError("inverse iteration did not converge in {} iterations".format(max_iter),
                           iterations=max_iter)


def kernel_recursion_check(p: CexParams, gamma1: float, dim: int) -> Tuple[SeqVector, float]:
    """
    Builds gamma = gamma1 (1, -b/2, ..., -b/D) and returns it with
    ||A gamma||_2 over rows 1..D-1.

    gamma is the l2 kernel direction whose l1 norm grows like a harmonic sum,
    which is why the operator stays injective on l1.

    Args:
        p (CexParams): constant pack.
        gamma1 (float): first coefficient.
        dim (int): truncation dimension D, at least 3.

    Returns:
        Tuple[SeqVector, float]: gamma and the defect.
    """
    A = build_counterexample_operator(p, dim)
    coeffs = -p.b / np.arange(1, int(dim) + 1, dtype=np.float64)
    coeffs[0] = 1.0
    gamma = SeqVector(float(gamma1) * coeffs)
    image = A.matvec(gamma.values)
    return gamma, float(np.linalg.norm(image[:int(dim) - 1]))


def injectivity_bound(p: CexParams, dim: int) -> float:
    """
    Returns an upper bound on the smallest singular value of the row-extended
    (dim + 1 rows) truncation: ||A gamma|| / ||gamma|| for the kernel recursion
    vector, whose only non-zero image entry is (1 - delta) eta_{dim+1}.

    Args:
        p (CexParams): constant pack.
        dim (int): number of columns D.

    Returns:
        float: the bound.
    """
    gamma, _ = kernel_recursion_check(p, 1.0, dim)
    return (1.0 - p.delta) * eta(int(dim) + 1, p) / float(np.linalg.norm(gamma.values))
