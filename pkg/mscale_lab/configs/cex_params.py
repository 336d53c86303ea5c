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
"""A class for the counterexample constant pack."""
import math
from typing import Union

from mscale_lab.configs.config_interface import ConfigInterface
from mscale_lab.constants import MAX_TAIL_ERROR

# (3 - 1/M)^2 >= 8 is evaluated with this slack so that M = 3 + 2*sqrt(2) counts
THRESHOLD_SLACK = 1e-12


class CexParams(ConfigInterface):
    """
    Constant pack (M, alpha0, delta, b, c0) of the divergent multiscale example.

    Instances are immutable; use operators.derive_constants to obtain the
    pack for which the multiscale sequence is known in closed form.
    """
    def __init__(self, M: float, alpha0: float, delta: float, b: float, c0: float) -> None:
        """
        Initialize CexParams

        Args:
            M (float): scale growth factor, lambda_n = alpha0 * M^n.
            alpha0 (float): first regularization parameter lambda_0.
            delta (float): ratio -mu_j / eta_j, in (0, 1).
            b (float): coefficient scale of the minimizers u_n.
            c0 (float): scale of the column coefficients eta_j^2.
        """
        super().__init__()
        self._M = float(M)
        self._alpha0 = float(alpha0)
        self._delta = float(delta)
        self._b = float(b)
        self._c0 = float(c0)
        if not self._M > 1.0:
            raise ValueError("M must be greater than 1, given {}!".format(self._M))
        if not self._alpha0 > 0.0:
            raise ValueError("alpha0 must be a positive float value, given {}!".format(self._alpha0))
        if not 0.0 < self._delta < 1.0:
            raise ValueError("delta must be in (0, 1), given {}!".format(self._delta))
        if not self._b > 0.0:
            raise ValueError("b must be a positive float value, given {}!".format(self._b))
        if not self._c0 > 0.0:
            raise ValueError("c0 must be a positive float value, given {}!".format(self._c0))

    @property
    def M(self) -> float:
        """
        Returns the scale growth factor.

        Returns:
            float: M.
        """
        return self._M

    @property
    def alpha0(self) -> float:
        """
        Returns lambda_0.

        Returns:
            float: alpha0.
        """
        return self._alpha0

    @property
    def delta(self) -> float:
        """
        Returns delta.

        Returns:
            float: delta.
        """
        return self._delta

    @property
    def b(self) -> float:
        """
        Returns b.

        Returns:
            float: b.
        """
        return self._b

    @property
    def c0(self) -> float:
        """
        Returns c0.

        Returns:
            float: c0.
        """
        return self._c0

    @property
    def quadratic_condition(self) -> float:
        """
        Returns 2 delta^2 + (1/M - 3) delta + 1; non-positive values make
        A_{n1+1,n1} <= A_{n1,n1}.

        Returns:
            float: the value of the quadratic.
        """
        return 2.0 * self._delta ** 2 + (1.0 / self._M - 3.0) * self._delta + 1.0

    @property
    def divergence_guaranteed(self) -> bool:
        """
        Returns whether (3 - 1/M)^2 >= 8, i.e. M >= 1/(3 - 2 sqrt(2)).

        Returns:
            bool: True if the divergence guarantee applies.
        """
        return (3.0 - 1.0 / self._M) ** 2 >= 8.0 - THRESHOLD_SLACK

    def tail_error(self, dim: int) -> float:
        """
        Returns the squared l2 mass of col(1) dropped by truncating at dim,
        sum_{m > dim} eta_m^2 = c0 M^{-dim} / (M - 1).

        Args:
            dim (int): truncation dimension D.

        Returns:
            float: the truncation error.
        """
        return math.exp(math.log(self._c0) - int(dim) * math.log(self._M)) / (self._M - 1.0)

    def min_dim(self, max_tail_error: float = MAX_TAIL_ERROR) -> int:
        """
        Returns the smallest dimension whose tail_error is below max_tail_error.

        Args:
            max_tail_error (float): accepted truncation error.

        Returns:
            int: the smallest admissible dimension (at least 3).
        """
        dim = 3
        while self.tail_error(dim) >= max_tail_error:
            dim += 1
        return dim

    def to_json(self) -> dict:
        """
        Returns json object of the constant pack in dict format

        Returns:
            dict: json object of the constant pack.
        """
        return {"M": self._M,
                "alpha0": self._alpha0,
                "delta": self._delta,
                "b": self._b,
                "c0": self._c0,
                "divergence_guaranteed": self.divergence_guaranteed}

    @staticmethod
    def from_json(json_obj: Union[dict, str]) -> 'CexParams':
        """
        Returns CexParams instantiation from json object.

        Args:
            json_obj (Union[dict, str]): json object in dict format

        Returns:
            CexParams: constant pack created from given json object
        """
        json_obj = ConfigInterface.load(json_obj)
        return CexParams(M=json_obj['M'],
                         alpha0=json_obj['alpha0'],
                         delta=json_obj['delta'],
                         b=json_obj['b'],
                         c0=json_obj['c0'])

    def copy(self) -> 'CexParams':
        """
        Returns a copy of self.

        Returns:
            CexParams: a copy of self.
        """
        return CexParams(M=self._M, alpha0=self._alpha0, delta=self._delta, b=self._b, c0=self._c0)

    def __eq__(self, other: 'CexParams') -> bool:
        """
        Check equality.

        Args:
            other (CexParams): other to compare

        Returns:
            bool: True if all constants are equal, Otherwise False.
        """
        return (isinstance(other, CexParams)
                and self._M == other._M
                and self._alpha0 == other._alpha0
                and self._delta == other._delta
                and self._b == other._b
                and self._c0 == other._c0)

    def __ne__(self, other: 'CexParams') -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash((self._M, self._alpha0, self._delta, self._b, self._c0))

    def __str__(self) -> str:
        """
        String representation of the constant pack

        Returns:
            str: String representation of the constant pack
        """
        return "(M=%g, alpha0=%g, delta=%g, b=%g, c0=%g)" % (self._M, self._alpha0,
                                                            self._delta, self._b, self._c0)

    def __repr__(self) -> str:
        return "CexParams" + str(self)
