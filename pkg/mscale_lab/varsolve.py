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
"""Inner variational solver and the dual-norm optimality certificate."""
import abc
import logging
import math
from typing import List, Optional, Tuple, Union

import numpy as np

from mscale_lab.configs.config_interface import ConfigInterface
from mscale_lab.configs.solver_options import SolverOptions
from mscale_lab.constants import DEFAULT_TOL, RegularizerKind
from mscale_lab.operators import LinearOp, fit_dim, operator_norm_upper
from mscale_lab.seqspace import SeqVector, f_weights

ABC = abc.ABCMeta('ABC', (object,), {})

TRACE_HEADER = ["iteration", "objective", "dual_norm_value", "pairing_gap"]


def prox_weighted_l1(z: SeqVector, t: float, weights: Optional[np.ndarray] = None) -> SeqVector:
    """
    Soft-thresholding: sign(z_n) max(|z_n| - t w_n, 0).

    Args:
        z (SeqVector): point to shrink.
        t (float): threshold scale, t >= 0.
        weights (Optional[np.ndarray]): non-negative weights, F-weights (1, 2, ...) when None.

    Returns:
        SeqVector: the proximal point.
    """
    t = float(t)
    if t < 0.0:
        raise ValueError("t must be a non-negative float value, given {}!".format(t))
    weights = f_weights(z.dim) if weights is None else np.asarray(weights, dtype=np.float64)[:z.dim]
    if weights.size != z.dim or np.any(weights < 0.0):
        raise ValueError("weights must be {} non-negative values!".format(z.dim))
    return SeqVector(_soft_threshold(z.values, t * weights))


def _soft_threshold(x: np.ndarray, thresholds: Union[float, np.ndarray]) -> np.ndarray:
    return np.sign(x) * np.maximum(np.abs(x) - thresholds, 0.0)


def prox_hilbert_norm(z: SeqVector, t: float) -> SeqVector:
    """
    Block soft-thresholding: z max(1 - t/||z||_2, 0).

    Args:
        z (SeqVector): point to shrink.
        t (float): threshold, t >= 0.

    Returns:
        SeqVector: the proximal point.
    """
    t = float(t)
    if t < 0.0:
        raise ValueError("t must be a non-negative float value, given {}!".format(t))
    return SeqVector(_block_shrink(z.values, t))


def _block_shrink(x: np.ndarray, t: float) -> np.ndarray:
    norm = float(np.linalg.norm(x))
    if norm <= t:
        return np.zeros_like(x)
    return x * (1.0 - t / norm)


def prox_tv_1d(z: SeqVector, t: float) -> SeqVector:
    """
    Exact minimizer of 1/2 ||u - z||^2 + t sum_i |u_{i+1} - u_i| by the taut string.

    Args:
        z (SeqVector): signal to denoise.
        t (float): total variation weight, t >= 0.

    Returns:
        SeqVector: the proximal point.
    """
    t = float(t)
    if t < 0.0:
        raise ValueError("t must be a non-negative float value, given {}!".format(t))
    return SeqVector(_taut_string(z.values, t))


def _taut_string(x: np.ndarray, t: float) -> np.ndarray:
    """
    Returns the increments of the shortest path through the tube
    [S_k - t, S_k + t] around the cumulative sums S of x, pinned at
    S_0 = 0 and S_n.

    Args:
        x (np.ndarray): the signal.
        t (float): tube half width.

    Returns:
        np.ndarray: the denoised signal.
    """
    n = x.size
    if t == 0.0 or n == 1:
        return x.copy()
    cumulative = np.concatenate(([0.0], np.cumsum(x)))
    lower = cumulative - t
    upper = cumulative + t
    lower[0] = upper[0] = 0.0
    lower[n] = upper[n] = cumulative[n]

    string = np.empty(n + 1)
    string[0] = 0.0
    anchor, anchor_value = 0, 0.0
    while anchor < n:
        slope_low, slope_up = -math.inf, math.inf
        i_low = i_up = anchor
        for k in range(anchor + 1, n + 1):
            span = k - anchor
            low = (lower[k] - anchor_value) / span
            up = (upper[k] - anchor_value) / span
            if low > slope_up:
                # bends at the ceiling
                string[anchor + 1:i_up + 1] = anchor_value + slope_up * np.arange(1, i_up - anchor + 1)
                anchor, anchor_value = i_up, upper[i_up]
                break
            if up < slope_low:
                # bends at the floor
                string[anchor + 1:i_low + 1] = anchor_value + slope_low * np.arange(1, i_low - anchor + 1)
                anchor, anchor_value = i_low, lower[i_low]
                break
            if low >= slope_low:
                slope_low, i_low = low, k
            if up <= slope_up:
                slope_up, i_up = up, k
        else:
            slope = (cumulative[n] - anchor_value) / (n - anchor)
            string[anchor + 1:] = anchor_value + slope * np.arange(1, n - anchor + 1)
            anchor = n
        string[anchor] = anchor_value if anchor < n else cumulative[n]
    return np.diff(string)


class Regularizer(ABC):
    """
    Convex, non-negative, positively 1-homogeneous penalty with an exact prox.
    """
    @property
    @abc.abstractmethod
    def kind(self) -> RegularizerKind:
        raise NotImplementedError('The subclass of Regularizer must implement this method')

    @abc.abstractmethod
    def value_array(self, x: np.ndarray) -> float:
        """Penalty of raw coefficients."""
        raise NotImplementedError('The subclass of Regularizer must implement this method')

    @abc.abstractmethod
    def prox_array(self, x: np.ndarray, t: float) -> np.ndarray:
        """Prox of t times the penalty on raw coefficients."""
        raise NotImplementedError('The subclass of Regularizer must implement this method')

    @abc.abstractmethod
    def dual_norm(self, g: np.ndarray) -> float:
        """
        Returns sup{<g, u> : R(u) <= 1} restricted to the complement of the null space.

        Args:
            g (np.ndarray): the functional, A^T v for the certificate.

        Returns:
            float: the dual norm.
        """
        raise NotImplementedError('The subclass of Regularizer must implement this method')

    def null_space_defect(self, g: np.ndarray) -> float:
        """
        Returns how far g is from annihilating the null space of the penalty.

        Args:
            g (np.ndarray): the functional.

        Returns:
            float: 0 for penalties that are norms.
        """
        return 0.0

    def evaluate(self, u: SeqVector) -> float:
        """
        Returns R(u).

        Args:
            u (SeqVector): the point.

        Returns:
            float: the penalty.
        """
        return self.value_array(u.values)

    def prox(self, z: SeqVector, t: float) -> SeqVector:
        """
        Returns argmin_u 1/2 ||u - z||^2 + t R(u).

        Args:
            z (SeqVector): the point.
            t (float): step, t >= 0.

        Returns:
            SeqVector: the proximal point.
        """
        t = float(t)
        if t < 0.0:
            raise ValueError("t must be a non-negative float value, given {}!".format(t))
        return SeqVector(self.prox_array(z.values, t))

    def to_json(self) -> dict:
        return {"kind": self.kind.value}

    def __eq__(self, other: 'Regularizer') -> bool:
        return isinstance(other, Regularizer) and self.to_json() == other.to_json()

    def __ne__(self, other: 'Regularizer') -> bool:
        return not self.__eq__(other)

    def __str__(self) -> str:
        return "(kind=%s)" % self.kind.value

    def __repr__(self) -> str:
        return type(self).__name__ + str(self)


class WeightedL1(Regularizer):
    """
    sum_n w_n |u_n|, with w_n = n (the F-norm) unless weights are given.
    """
    def __init__(self, weights: Optional[List[float]] = None) -> None:
        """
        Initialize WeightedL1

        Args:
            weights (Optional[List[float]]): positive weights, F-weights when None.
        """
        self._weights = None
        if weights is not None:
            self._weights = np.array(weights, dtype=np.float64).ravel()
            if self._weights.size < 1 or not np.all(self._weights > 0.0):
                raise ValueError("weights must be positive float values, given {}!".format(list(weights)))

    @property
    def kind(self) -> RegularizerKind:
        return RegularizerKind.WEIGHTED_L1

    def weights(self, dim: int) -> np.ndarray:
        """
        Returns the weights of the first dim coefficients.

        Args:
            dim (int): number of coefficients.

        Returns:
            np.ndarray: the weights.
        """
        if self._weights is None:
            return f_weights(dim)
        if self._weights.size < dim:
            raise ValueError("weights cover {} entries, {} required!".format(self._weights.size, dim))
        return self._weights[:dim]

    def value_array(self, x: np.ndarray) -> float:
        return float(np.dot(self.weights(x.size), np.abs(x)))

    def prox_array(self, x: np.ndarray, t: float) -> np.ndarray:
        return _soft_threshold(x, t * self.weights(x.size))

    def dual_norm(self, g: np.ndarray) -> float:
        return float(np.max(np.abs(g) / self.weights(g.size)))

    def to_json(self) -> dict:
        json_obj = super().to_json()
        json_obj["weights"] = None if self._weights is None else self._weights.tolist()
        return json_obj


class HilbertNorm(Regularizer):
    """
    The non-squared l2 norm.
    """
    @property
    def kind(self) -> RegularizerKind:
        return RegularizerKind.HILBERT_NORM

    def value_array(self, x: np.ndarray) -> float:
        return float(np.linalg.norm(x))

    def prox_array(self, x: np.ndarray, t: float) -> np.ndarray:
        return _block_shrink(x, t)

    def dual_norm(self, g: np.ndarray) -> float:
        return float(np.linalg.norm(g))


class TotalVariation1D(Regularizer):
    """
    Discrete total variation sum_i |u_{i+1} - u_i|; constants form its null space.
    """
    @property
    def kind(self) -> RegularizerKind:
        return RegularizerKind.TV_1D

    def value_array(self, x: np.ndarray) -> float:
        return float(np.sum(np.abs(np.diff(x))))

    def prox_array(self, x: np.ndarray, t: float) -> np.ndarray:
        return _taut_string(x, t)

    def dual_norm(self, g: np.ndarray) -> float:
        # g = D^T p with p_k = -sum_{i<=k} g_i
        if g.size < 2:
            return 0.0
        return float(np.max(np.abs(np.cumsum(g)[:-1])))

    def null_space_defect(self, g: np.ndarray) -> float:
        return abs(float(np.sum(g)))


def make_regularizer(kind: Union[str, RegularizerKind], weights: Optional[List[float]] = None) -> Regularizer:
    """
    Returns the regularizer of the given kind.

    Args:
        kind (Union[str, RegularizerKind]): regularizer kind.
        weights (Optional[List[float]]): weights of the weighted-l1 kind.

    Returns:
        Regularizer: the regularizer.
    """
    kind = RegularizerKind(kind)
    if kind == RegularizerKind.WEIGHTED_L1:
        return WeightedL1(weights)
    if weights is not None:
        raise ValueError("weights are only accepted by {}, given kind {}!".format(RegularizerKind.WEIGHTED_L1.value,
                                                                                  kind.value))
    if kind == RegularizerKind.HILBERT_NORM:
        return HilbertNorm()
    return TotalVariation1D()


def regularizer_from_json(json_obj: Union[dict, str]) -> Regularizer:
    """
    Returns the regularizer described by json_obj ({"kind": ..., "weights": ...}).

    Args:
        json_obj (Union[dict, str]): json object in dict format

    Returns:
        Regularizer: the regularizer.
    """
    json_obj = ConfigInterface.load(json_obj)
    return make_regularizer(json_obj['kind'], json_obj.get('weights'))


class Certificate(ConfigInterface):
    """
    Dual-norm optimality certificate of u for lambda ||y - A(s+u)||^2 + R(u).

    u is a minimizer iff the residual functional g = A^T v, v = y - A(s+u),
    has R-dual norm <= 1/(2 lambda), pairs with A u at exactly R(u)/(2 lambda)
    and annihilates the null space of R. All three tests are relative to the
    target 1/(2 lambda).
    """
    def __init__(self,
                 dual_norm_value: float,
                 target: float,
                 pairing_lhs: float,
                 pairing_rhs: float,
                 null_space_defect: float = 0.0,
                 tol: float = DEFAULT_TOL) -> None:
        """
        Initialize Certificate

        Args:
            dual_norm_value (float): R-dual norm of A^T v.
            target (float): 1 / (2 lambda).
            pairing_lhs (float): <v, A u>.
            pairing_rhs (float): R(u) / (2 lambda).
            null_space_defect (float): pairing of A^T v with the null space of R.
            tol (float): relative tolerance of the three tests.
        """
        super().__init__()
        self._dual_norm_value = float(dual_norm_value)
        self._target = float(target)
        self._pairing_lhs = float(pairing_lhs)
        self._pairing_rhs = float(pairing_rhs)
        self._null_space_defect = float(null_space_defect)
        self._tol = float(tol)
        if not self._target > 0.0:
            raise ValueError("target must be a positive float value, given {}!".format(self._target))

    @property
    def dual_norm_value(self) -> float:
        return self._dual_norm_value

    @property
    def target(self) -> float:
        return self._target

    @property
    def pairing_lhs(self) -> float:
        return self._pairing_lhs

    @property
    def pairing_rhs(self) -> float:
        return self._pairing_rhs

    @property
    def null_space_defect(self) -> float:
        return self._null_space_defect

    @property
    def tol(self) -> float:
        return self._tol

    @property
    def gap(self) -> float:
        """
        Returns |pairing_lhs - pairing_rhs|.

        Returns:
            float: the pairing gap.
        """
        return abs(self._pairing_lhs - self._pairing_rhs)

    @property
    def feasible(self) -> bool:
        """
        Returns whether the dual inequality, the pairing equality and the
        null space condition hold within tol.

        Returns:
            bool: True if the certificate holds.
        """
        return (self._dual_norm_value <= self._target * (1.0 + self._tol)
                and self.gap <= self._tol * max(self._target, abs(self._pairing_rhs))
                and self._null_space_defect <= self._tol * self._target)

    @property
    def dual_equality(self) -> bool:
        """
        Returns whether the dual norm attains the target within tol, as it
        must whenever the minimizer is non-zero.

        Returns:
            bool: True if dual_norm_value equals the target within tol.
        """
        return abs(self._dual_norm_value - self._target) <= self._tol * self._target

    def to_json(self) -> dict:
        """
        Returns json object of the certificate in dict format

        Returns:
            dict: json object of the certificate.
        """
        return {"dual_norm_value": self._dual_norm_value,
                "target": self._target,
                "pairing_lhs": self._pairing_lhs,
                "pairing_rhs": self._pairing_rhs,
                "null_space_defect": self._null_space_defect,
                "tol": self._tol,
                "gap": self.gap,
                "feasible": self.feasible,
                "dual_equality": self.dual_equality}

    @staticmethod
    def from_json(json_obj: Union[dict, str]) -> 'Certificate':
        """
        Returns Certificate instantiation from json object.
        Derived fields (gap, feasible, dual_equality) are recomputed.

        Args:
            json_obj (Union[dict, str]): json object in dict format

        Returns:
            Certificate: certificate created from given json object
        """
        json_obj = ConfigInterface.load(json_obj)
        return Certificate(dual_norm_value=json_obj['dual_norm_value'],
                           target=json_obj['target'],
                           pairing_lhs=json_obj['pairing_lhs'],
                           pairing_rhs=json_obj['pairing_rhs'],
                           null_space_defect=json_obj.get('null_space_defect', 0.0),
                           tol=json_obj.get('tol', DEFAULT_TOL))

    def copy(self) -> 'Certificate':
        return Certificate.from_json(self.to_json())

    def __eq__(self, other: 'Certificate') -> bool:
        return isinstance(other, Certificate) and self.to_json() == other.to_json()

    def __ne__(self, other: 'Certificate') -> bool:
        return not self.__eq__(other)

    def __str__(self) -> str:
        return "(dual=%g, target=%g, gap=%g, feasible=%s)" % (self._dual_norm_value, self._target,
                                                             self.gap, self.feasible)

    def __repr__(self) -> str:
        return "Certificate" + str(self)


class SolveResult(ConfigInterface):
    """
    Outcome of one inner solve.
    """
    def __init__(self,
                 u: SeqVector,
                 objective: float,
                 iterations: int,
                 certificate: Certificate,
                 trace: Optional[List[Tuple[int, float, float, float]]] = None) -> None:
        """
        Initialize SolveResult

        Args:
            u (SeqVector): the computed minimizer.
            objective (float): lambda ||y - A(s+u)||^2 + R(u).
            iterations (int): iterations performed.
            certificate (Certificate): certificate of u.
            trace (Optional[List[Tuple[int, float, float, float]]]): rows of TRACE_HEADER.
        """
        super().__init__()
        self._u = u
        self._objective = float(objective)
        self._iterations = int(iterations)
        self._certificate = certificate
        self._trace = list(trace or [])

    @property
    def u(self) -> SeqVector:
        return self._u

    @property
    def objective(self) -> float:
        return self._objective

    @property
    def iterations(self) -> int:
        return self._iterations

    @property
    def certificate(self) -> Certificate:
        return self._certificate

    @property
    def converged(self) -> bool:
        """
        Returns whether the certificate of u is feasible.

        Returns:
            bool: True if the solve is certified.
        """
        return self._certificate.feasible

    @property
    def trace(self) -> List[Tuple[int, float, float, float]]:
        return list(self._trace)

    def to_json(self) -> dict:
        """
        Returns json object of the solve result in dict format

        Returns:
            dict: json object of the solve result.
        """
        return {"u": self._u.to_json(),
                "objective": self._objective,
                "iterations": self._iterations,
                "converged": self.converged,
                "certificate": self._certificate.to_json()}

    @staticmethod
    def from_json(json_obj: Union[dict, str]) -> 'SolveResult':
        """
        Returns SolveResult instantiation from json object.

        Args:
            json_obj (Union[dict, str]): json object in dict format

        Returns:
            SolveResult: solve result created from given json object
        """
        json_obj = ConfigInterface.load(json_obj)
        return SolveResult(u=SeqVector.from_json(json_obj['u']),
                           objective=json_obj['objective'],
                           iterations=json_obj['iterations'],
                           certificate=Certificate.from_json(json_obj['certificate']))

    def copy(self) -> 'SolveResult':
        return SolveResult(self._u, self._objective, self._iterations, self._certificate.copy(), self._trace)

    def __str__(self) -> str:
        return "(iterations=%d, objective=%g, converged=%s)" % (self._iterations, self._objective, self.converged)

    def __repr__(self) -> str:
        return "SolveResult" + str(self)


def _check_operator(A: LinearOp) -> None:
    if not isinstance(A, LinearOp):
        raise ValueError("Expected LinearOp type but received {}.".format(type(A)))


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not lam > 0.0:
        raise ValueError("lambda must be a positive float value, given {}!".format(lam))
    return lam


def _shifted_residual(A: LinearOp, y: SeqVector, s: SeqVector) -> np.ndarray:
    return fit_dim(y, A.dim_out, "output") - A.matvec(fit_dim(s, A.dim_in, "input"))


def _certify(A: LinearOp, r0: np.ndarray, x: np.ndarray, lam: float, R: Regularizer, tol: float) -> Certificate:
    image = A.matvec(x)
    v = r0 - image
    g = A.rmatvec(v)
    target = 1.0 / (2.0 * lam)
    return Certificate(dual_norm_value=R.dual_norm(g),
                       target=target,
                       pairing_lhs=float(np.dot(v, image)),
                       pairing_rhs=R.value_array(x) * target,
                       null_space_defect=R.null_space_defect(g),
                       tol=tol)


def smooth_value(A: LinearOp, y: SeqVector, s: SeqVector, lam: float, u: SeqVector) -> float:
    """
    Returns the fidelity term lambda ||y - A(s+u)||^2.

    Args:
        A (LinearOp): the operator.
        y (SeqVector): data.
        s (SeqVector): shift, the previous partial sum.
        lam (float): fidelity weight.
        u (SeqVector): the point.

    Returns:
        float: the fidelity value.
    """
    _check_operator(A)
    v = _shifted_residual(A, y, s) - A.matvec(fit_dim(u, A.dim_in, "input"))
    return _check_lambda(lam) * float(np.dot(v, v))


def smooth_gradient(A: LinearOp, y: SeqVector, s: SeqVector, lam: float, u: SeqVector) -> SeqVector:
    """
    Returns the gradient 2 lambda A^T (A(s+u) - y) of the fidelity term.

    Args:
        A (LinearOp): the operator.
        y (SeqVector): data.
        s (SeqVector): shift.
        lam (float): fidelity weight.
        u (SeqVector): the point.

    Returns:
        SeqVector: the gradient, dim_in entries.
    """
    _check_operator(A)
    v = _shifted_residual(A, y, s) - A.matvec(fit_dim(u, A.dim_in, "input"))
    return SeqVector(-2.0 * _check_lambda(lam) * A.rmatvec(v))


def kkt_certificate(A: LinearOp,
                    y: SeqVector,
                    s: SeqVector,
                    lam: float,
                    u: SeqVector,
                    R: Optional[Regularizer] = None,
                    tol: float = DEFAULT_TOL) -> Certificate:
    """
    Returns the optimality certificate of u.

    Args:
        A (LinearOp): the operator.
        y (SeqVector): data.
        s (SeqVector): shift.
        lam (float): fidelity weight.
        u (SeqVector): candidate minimizer.
        R (Optional[Regularizer]): regularizer, the F-norm when None.
        tol (float): relative tolerance.

    Returns:
        Certificate: the certificate.
    """
    _check_operator(A)
    R = R or WeightedL1()
    return _certify(A, _shifted_residual(A, y, s), fit_dim(u, A.dim_in, "input"), _check_lambda(lam), R, tol)


def zero_step_predicate(A: LinearOp,
                        y: SeqVector,
                        s: SeqVector,
                        lam: float,
                        R: Optional[Regularizer] = None) -> bool:
    """
    Returns whether u = 0 minimizes lambda ||y - A(s+u)||^2 + R(u), i.e.
    whether A^T (y - A s) has R-dual norm at most 1/(2 lambda) and vanishes
    on the null space of R.

    Args:
        A (LinearOp): the operator.
        y (SeqVector): data.
        s (SeqVector): shift.
        lam (float): fidelity weight.
        R (Optional[Regularizer]): regularizer, the F-norm when None.

    Returns:
        bool: True if the step is zero.
    """
    _check_operator(A)
    R = R or WeightedL1()
    target = 1.0 / (2.0 * _check_lambda(lam))
    g = A.rmatvec(_shifted_residual(A, y, s))
    return R.dual_norm(g) <= target and R.null_space_defect(g) <= DEFAULT_TOL * target


def solve_step(A: LinearOp,
               y: SeqVector,
               s: SeqVector,
               lam: float,
               R: Optional[Regularizer] = None,
               opts: Optional[SolverOptions] = None) -> SolveResult:
    """
    Minimizes lambda ||y - A(s+u)||^2 + R(u) over u.

    Accelerated proximal gradient with step 1/L, L = 2 lambda ||A||^2, and a
    function-value restart: whenever the extrapolated step would increase the
    objective, the momentum is dropped and a plain proximal gradient step is
    taken from the current iterate. The certificate is evaluated every
    check_every iterations and stops the iteration once feasible.

    Args:
        A (LinearOp): the operator.
        y (SeqVector): data.
        s (SeqVector): shift, the previous partial sum.
        lam (float): fidelity weight, lambda > 0.
        R (Optional[Regularizer]): regularizer, the F-norm when None.
        opts (Optional[SolverOptions]): solver options, defaults when None.

    Returns:
        SolveResult: the minimizer, its certificate and the iteration count.
    """
    _check_operator(A)
    lam = _check_lambda(lam)
    R = R or WeightedL1()
    opts = opts or SolverOptions()
    r0 = _shifted_residual(A, y, s)

    def objective(x: np.ndarray) -> float:
        v = r0 - A.matvec(x)
        return lam * float(np.dot(v, v)) + R.value_array(x)

    def gradient(x: np.ndarray) -> np.ndarray:
        return -2.0 * lam * A.rmatvec(r0 - A.matvec(x))

    x = np.zeros(A.dim_in)
    norm = operator_norm_upper(A, opts.power_iters, opts.seed)
    if norm == 0.0:
        certificate = _certify(A, r0, x, lam, R, opts.tol)
        return SolveResult(SeqVector(x), objective(x), 0, certificate)
    step = 1.0 / (2.0 * lam * norm ** 2)

    x_prev = x
    f_x = objective(x)
    theta = 1.0
    trace = []
    restarts = 0
    iteration = 0
    while True:
        if iteration % opts.check_every == 0 or iteration == opts.max_iter:
            certificate = _certify(A, r0, x, lam, R, opts.tol)
            if opts.record_trace:
                trace.append((iteration, f_x, certificate.dual_norm_value, certificate.gap))
            if certificate.feasible or iteration >= opts.max_iter:
                break
        theta_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * theta ** 2))
        point = x + ((theta - 1.0) / theta_next) * (x - x_prev)
        z = R.prox_array(point - step * gradient(point), step)
        f_z = objective(z)
        if f_z > f_x + opts.restart_slack * abs(f_x):
            theta_next = 1.0
            restarts += 1
            z = R.prox_array(x - step * gradient(x), step)
            f_z = objective(z)
        x_prev, x, f_x, theta = x, z, f_z, theta_next
        iteration += 1

    if certificate.feasible:
        logging.debug("[Solver] certified after {} iterations ({} restarts).".format(iteration, restarts))
    else:
        logging.warning("[Solver] not certified after {} iterations: dual={:.6e} target={:.6e} gap={:.3e}".format(
            iteration, certificate.dual_norm_value, certificate.target, certificate.gap))
    return SolveResult(SeqVector(x), f_x, iteration, certificate, trace)
