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
"""A class for inner solver options."""
from typing import Optional, Union

from mscale_lab.configs.config_interface import ConfigInterface
from mscale_lab.constants import (
    DEFAULT_TOL, DEFAULT_MAX_ITER, DEFAULT_CHECK_EVERY,
    DEFAULT_POWER_ITERS, DEFAULT_RESTART_SLACK
)


class SolverOptions(ConfigInterface):
    """
    SolverOptions class
    """
    def __init__(self,
                 tol: float = DEFAULT_TOL,
                 max_iter: int = DEFAULT_MAX_ITER,
                 check_every: int = DEFAULT_CHECK_EVERY,
                 power_iters: int = DEFAULT_POWER_ITERS,
                 restart_slack: float = DEFAULT_RESTART_SLACK,
                 record_trace: bool = False,
                 seed: Optional[int] = None) -> None:
        """
        Initialize SolverOptions

        Args:
            tol (float): certificate tolerance, relative to the target 1/(2 lambda).
            max_iter (int): iteration budget of one inner solve.
            check_every (int): iterations between two certificate checks.
            power_iters (int): power iterations for the Lipschitz bound.
            restart_slack (float): relative objective increase tolerated before a restart.
            record_trace (bool): whether to keep the per-check trace rows.
            seed (Optional[int]): power iteration seed, MSCALE_SEED when None.
        """
        super().__init__()
        self._tol = float(tol)
        if not self._tol > 0.0:
            raise ValueError("tol must be a positive float value, given {}!".format(self._tol))
        self._max_iter = int(max_iter)
        if self._max_iter < 1:
            raise ValueError("max_iter must be greater than 0, given {}!".format(self._max_iter))
        self._check_every = int(check_every)
        if self._check_every < 1:
            raise ValueError("check_every must be greater than 0, given {}!".format(self._check_every))
        self._power_iters = int(power_iters)
        if self._power_iters < 1:
            raise ValueError("power_iters must be greater than 0, given {}!".format(self._power_iters))
        self._restart_slack = float(restart_slack)
        if self._restart_slack < 0.0:
            raise ValueError("restart_slack must be a non-negative float value, given {}!".format(self._restart_slack))
        self._record_trace = bool(record_trace)
        self._seed = None if seed is None else int(seed)

    @property
    def tol(self) -> float:
        """
        Returns the certificate tolerance.

        Returns:
            float: the certificate tolerance.
        """
        return self._tol

    @tol.setter
    def tol(self, value: float) -> None:
        """
        Sets the certificate tolerance.

        Args:
            value (float): new tolerance.
        """
        value = float(value)
        if not value > 0.0:
            raise ValueError("tol must be a positive float value, given {}!".format(value))
        self._tol = value

    @property
    def max_iter(self) -> int:
        """
        Returns the iteration budget.

        Returns:
            int: the iteration budget.
        """
        return self._max_iter

    @max_iter.setter
    def max_iter(self, value: int) -> None:
        """
        Sets the iteration budget.

        Args:
            value (int): new iteration budget.
        """
        value = int(value)
        if value < 1:
            raise ValueError("max_iter must be greater than 0, given {}!".format(value))
        self._max_iter = value

    @property
    def check_every(self) -> int:
        return self._check_every

    @property
    def power_iters(self) -> int:
        return self._power_iters

    @property
    def restart_slack(self) -> float:
        return self._restart_slack

    @property
    def record_trace(self) -> bool:
        """
        Returns whether trace rows are kept.

        Returns:
            bool: True if the solver keeps its trace.
        """
        return self._record_trace

    @record_trace.setter
    def record_trace(self, value: bool) -> None:
        self._record_trace = bool(value)

    @property
    def seed(self) -> Optional[int]:
        return self._seed

    def to_json(self) -> dict:
        """
        Returns json object of the solver options in dict format

        Returns:
            dict: json object of the solver options.
        """
        return {"tol": self._tol,
                "max_iter": self._max_iter,
                "check_every": self._check_every,
                "power_iters": self._power_iters,
                "restart_slack": self._restart_slack,
                "record_trace": self._record_trace,
                "seed": self._seed}

    @staticmethod
    def from_json(json_obj: Union[dict, str]) -> 'SolverOptions':
        """
        Returns SolverOptions instantiation from json object.
        Missing keys take their default values.

        Args:
            json_obj (Union[dict, str]): json object in dict format

        Returns:
            SolverOptions: solver options created from given json object
        """
        json_obj = ConfigInterface.load(json_obj)
        return SolverOptions(tol=json_obj.get('tol', DEFAULT_TOL),
                             max_iter=json_obj.get('max_iter', DEFAULT_MAX_ITER),
                             check_every=json_obj.get('check_every', DEFAULT_CHECK_EVERY),
                             power_iters=json_obj.get('power_iters', DEFAULT_POWER_ITERS),
                             restart_slack=json_obj.get('restart_slack', DEFAULT_RESTART_SLACK),
                             record_trace=json_obj.get('record_trace', False),
                             seed=json_obj.get('seed'))

    def copy(self) -> 'SolverOptions':
        """
        Returns a copy of self.

        Returns:
            SolverOptions: a copy of self.
        """
        return SolverOptions.from_json(self.to_json())

    def __eq__(self, other: 'SolverOptions') -> bool:
        """
        Returns whether the options are equal to other.

        Args:
            other (SolverOptions): other to compare

        Returns:
            bool: True if the options are equal to other, False otherwise.
        """
        return isinstance(other, SolverOptions) and self.to_json() == other.to_json()

    def __ne__(self, other: 'SolverOptions') -> bool:
        return not self.__eq__(other)

    def __str__(self) -> str:
        return "(tol=%g, max_iter=%d, check_every=%d, power_iters=%d, restart_slack=%g, record_trace=%s, seed=%s)" % (
            self._tol, self._max_iter, self._check_every, self._power_iters, self._restart_slack,
            self._record_trace, self._seed)

    def __repr__(self) -> str:
        return "SolverOptions" + str(self)
